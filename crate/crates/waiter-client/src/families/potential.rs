//! Potential sums over winning families.
//!
//! All sums use Neumaier compensated summation. Terms whose value underflows
//! the double range simply contribute 0.

use crate::game::{ElementId, GameState, Owner};

use super::WinningFamily;

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

fn power_sum(family: &WinningFamily, base: f64, scale: f64) -> f64 {
    family
        .sets()
        .iter()
        .map(|s| base.powf(s.len() as f64 * scale))
        .collect::<NeumaierSum>()
        .value()
}

/// Σ (q+1)^{-|A|}.
pub fn phi_wc(family: &WinningFamily, q: usize) -> f64 {
    power_sum(family, 1.0 / (q as f64 + 1.0), 1.0)
}

/// Σ over sets without a Waiter element of (q+1)^{-|A minus Client's elements|}.
pub fn phi_wc_live(family: &WinningFamily, state: &GameState) -> f64 {
    let base = 1.0 / (state.q() as f64 + 1.0);
    let mut sum = NeumaierSum::new();
    'sets: for set in family.sets() {
        let mut missing = 0;
        for &e in set {
            match state.owner(e) {
                Owner::Waiter => continue 'sets,
                Owner::Free => missing += 1,
                Owner::Client => {}
            }
        }
        sum.add(base.powi(missing));
    }
    sum.value()
}

/// Σ (q/(q+1))^{|A|}.
pub fn phi_cw(family: &WinningFamily, q: usize) -> f64 {
    power_sum(family, q as f64 / (q as f64 + 1.0), 1.0)
}

/// Σ 2^{-|A|/(2q-1)}.
pub fn bednarska_sum(family: &WinningFamily, q: usize) -> f64 {
    power_sum(family, 0.5, 1.0 / (2.0 * q as f64 - 1.0))
}

/// Indices of the sets Client has fully claimed.
pub fn client_fully_claims(state: &GameState, family: &WinningFamily) -> Vec<usize> {
    family
        .sets()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().all(|&e| state.owner(e) == Owner::Client))
        .map(|(i, _)| i)
        .collect()
}

/// Whether `elements` meets every set of the family.
pub fn is_transversal(elements: &[ElementId], family: &WinningFamily) -> bool {
    let mut mark = vec![false; family.n_elements()];
    for &e in elements {
        if e.index() < mark.len() {
            mark[e.index()] = true;
        }
    }
    family.sets().iter().all(|s| s.iter().any(|e| mark[e.index()]))
}
