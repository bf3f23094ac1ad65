//! Closed-form evaluators for the potential sums of generated families.
//!
//! Binomials and factorials are handled in log space; every sum is finite and
//! exact up to floating point, no asymptotic simplification is applied.

use std::sync::OnceLock;

use statrs::function::factorial::{ln_binomial, ln_factorial};

use crate::error::{Error, Result};

use super::NeumaierSum;

/// ln C(n, k), or -inf when k > n.
fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        ln_binomial(n, k)
    }
}

pub fn binomial_f64(n: u64, k: u64) -> f64 {
    ln_choose(n, k).exp().round()
}

/// Number of cycles of length k in K_n: C(n,k)(k-1)!/2.
pub fn cycles_count(n: usize, k: usize) -> f64 {
    if k < 3 || k > n {
        return 0.0;
    }
    (ln_choose(n as u64, k as u64) + ln_factorial(k as u64 - 1) - 2f64.ln()).exp().round()
}

/// ln of the falling factorial (n)_k.
fn ln_falling(n: u64, k: u64) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        ln_factorial(n) - ln_factorial(n - k)
    }
}

fn sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    terms.map(f64::exp).collect::<NeumaierSum>().value()
}

/// Σ_{k=lmin}^{n} C(n,k) (k-1)!/2 (q+1)^{-k}: the potential of all cycles of
/// length at least `lmin` in K_n.
pub fn phi_formula_cycles_tail(n: usize, q: usize, lmin: usize) -> f64 {
    let lq = (q as f64 + 1.0).ln();
    sum_exp((lmin.max(3)..=n).map(|k| {
        ln_choose(n as u64, k as u64) + ln_factorial(k as u64 - 1) - 2f64.ln() - k as f64 * lq
    }))
}

/// Upper bound on the potential of the family of unions of two cycles of
/// length at most `lmax` meeting in a path:
/// Σ_{l1=3}^{lmax} Σ_{l2=3}^{l1} Σ_{s=1}^{l2} C(n,l1)(l1-1)!/2 · l1 · (n)_{l2-s} · (q+1)^{-(l1+l2-s+1)}.
pub fn phi2_bound(n: usize, q: usize, lmax: usize) -> f64 {
    let lq = (q as f64 + 1.0).ln();
    let n64 = n as u64;
    let mut terms = Vec::new();
    for l1 in 3..=lmax.min(n) {
        let c1 = ln_choose(n64, l1 as u64) + ln_factorial(l1 as u64 - 1) - 2f64.ln() + (l1 as f64).ln();
        for l2 in 3..=l1 {
            for s in 1..=l2 {
                let size = (l1 + l2 - s + 1) as f64;
                terms.push(c1 + ln_falling(n64, (l2 - s) as u64) - size * lq);
            }
        }
    }
    sum_exp(terms.into_iter())
}

/// The families whose potentials bound Client's colorability strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorabilityFamily {
    /// Unions of two vertex-intersecting cycles of length 3 or 4 (exact).
    F1,
    /// Edge sets of size ⌈|S| k ln k/16⌉ inside some vertex set S.
    F2,
    /// ⌈|S|k/6⌉ edges inside S plus ⌈|S| k ln k/8⌉ edges leaving S.
    F3,
    /// Edge sets of size ⌈|S|k/2⌉ inside S (small k).
    SmallK,
}

impl std::str::FromStr for ColorabilityFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(ColorabilityFamily::F1),
            "f2" => Ok(ColorabilityFamily::F2),
            "f3" => Ok(ColorabilityFamily::F3),
            "small_k" | "smallk" => Ok(ColorabilityFamily::SmallK),
            _ => Err(Error::Parse(format!("unknown colorability family `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaValue {
    pub value: f64,
    /// Set when the rounded set size is 0, so the family contains the empty
    /// set and the potential is infinite.
    pub degenerate: bool,
}

impl FormulaValue {
    fn finite(value: f64) -> Self {
        FormulaValue { value, degenerate: false }
    }

    fn degenerate() -> Self {
        FormulaValue { value: f64::INFINITY, degenerate: true }
    }
}

fn short_pair_counts() -> &'static Vec<Vec<f64>> {
    static COUNTS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    COUNTS.get_or_init(super::short_pair_type_counts)
}

/// Potential bound for the colorability families; non-integer set sizes are
/// rounded up. `F1` is evaluated exactly by counting member types on at most
/// seven vertices.
pub fn phi_formula_colorability(
    n: usize,
    k: usize,
    q: usize,
    which: ColorabilityFamily,
) -> Result<FormulaValue> {
    if k == 0 || q == 0 {
        return Err(Error::Parameter("colorability formulas need k >= 1 and q >= 1".into()));
    }
    let lq = (q as f64 + 1.0).ln();
    let n64 = n as u64;
    let kf = k as f64;
    let klk = kf * kf.ln();
    let ceil = |x: f64| x.ceil() as u64;
    match which {
        ColorabilityFamily::F1 => {
            let counts = short_pair_counts();
            let mut terms = Vec::new();
            for (v, row) in counts.iter().enumerate() {
                for (e, &u) in row.iter().enumerate() {
                    if u > 0.0 {
                        terms.push(ln_choose(n64, v as u64) + u.ln() - e as f64 * lq);
                    }
                }
            }
            Ok(FormulaValue::finite(sum_exp(terms.into_iter())))
        }
        ColorabilityFamily::F2 | ColorabilityFamily::SmallK => {
            let per_vertex = if which == ColorabilityFamily::F2 { klk / 16.0 } else { kf / 2.0 };
            if ceil(per_vertex) == 0 {
                return Ok(FormulaValue::degenerate());
            }
            let terms = (1..=n64).map(|t| {
                let m = ceil(t as f64 * per_vertex);
                ln_choose(n64, t) + ln_choose(t * (t - 1) / 2, m) - m as f64 * lq
            });
            Ok(FormulaValue::finite(sum_exp(terms)))
        }
        ColorabilityFamily::F3 => {
            if ceil(kf / 6.0) == 0 || ceil(klk / 8.0) == 0 {
                return Ok(FormulaValue::degenerate());
            }
            let terms = (1..=n64).map(|t| {
                let a = ceil(t as f64 * kf / 6.0);
                let b = ceil(t as f64 * klk / 8.0);
                ln_choose(n64, t) + ln_choose(t * (t - 1) / 2, a) + ln_choose(t * (n64 - t), b)
                    - (a + b) as f64 * lq
            });
            Ok(FormulaValue::finite(sum_exp(terms)))
        }
    }
}

/// Σ over ⌈n/k⌉-cliques of 2^{-|A|/(2q-1)} = C(n,s) 2^{-C(s,2)/(2q-1)}, s = ⌈n/k⌉.
pub fn clique_bednarska_formula(n: usize, k: usize, q: usize) -> f64 {
    let s = n.div_ceil(k) as u64;
    let edges = (s * s.saturating_sub(1) / 2) as f64;
    (ln_choose(n as u64, s) - edges / (2.0 * q as f64 - 1.0) * 2f64.ln()).exp()
}

/// Σ over ⌈n/k⌉-cliques of (q/(q+1))^{|A|}.
pub fn clique_cw_formula(n: usize, k: usize, q: usize) -> f64 {
    let s = n.div_ceil(k) as u64;
    let edges = (s * s.saturating_sub(1) / 2) as f64;
    (ln_choose(n as u64, s) + edges * (q as f64 / (q as f64 + 1.0)).ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts_match_closed_form() {
        assert_eq!(cycles_count(4, 3), 4.0);
        assert_eq!(cycles_count(4, 4), 3.0);
        assert_eq!(cycles_count(5, 5), 12.0);
        assert_eq!(cycles_count(3, 4), 0.0);
    }

    #[test]
    fn tail_examples() {
        assert!((phi_formula_cycles_tail(4, 1, 3) - 0.6875).abs() < 1e-12);
        assert!((phi_formula_cycles_tail(5, 2, 5) - 12.0 / 243.0).abs() < 1e-12);
        assert_eq!(phi_formula_cycles_tail(5, 2, 6), 0.0);
    }

    #[test]
    fn degenerate_sizes_flagged() {
        let v = phi_formula_colorability(10, 1, 3, ColorabilityFamily::F2).unwrap();
        assert!(v.degenerate && v.value.is_infinite());
        let w = phi_formula_colorability(10, 4, 3, ColorabilityFamily::F2).unwrap();
        assert!(!w.degenerate && w.value.is_finite());
    }

    #[test]
    fn formulas_decrease_in_q() {
        for which in [
            ColorabilityFamily::F1,
            ColorabilityFamily::F2,
            ColorabilityFamily::F3,
            ColorabilityFamily::SmallK,
        ] {
            let mut prev = f64::INFINITY;
            for q in [1, 2, 5, 20, 100, 1000, 100_000] {
                let v = phi_formula_colorability(40, 6, q, which).unwrap().value;
                assert!(v <= prev, "{which:?} at q={q}");
                prev = v;
            }
            assert!(prev < 1e-3);
        }
    }

    #[test]
    fn clique_formula_examples() {
        // C(6,3) triangles at q=2: 20 * 2^{-1}
        assert!((clique_bednarska_formula(6, 2, 2) - 10.0).abs() < 1e-9);
        assert!((clique_cw_formula(4, 2, 3) - 6.0 * 0.75).abs() < 1e-12);
    }
}
