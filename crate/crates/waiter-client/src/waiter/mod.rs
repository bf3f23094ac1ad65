//! Waiter strategies.
//!
//! Graph strategies read Client's moves from the state history at the start
//! of every `offer` call, so they work with or without `observe`. Where a
//! strategy is free to choose, it takes the lexicographically smallest edges.

mod color;
mod connectivity;
mod minor;
mod odd_cycle;
mod path;

use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::families::WinningFamily;
use crate::game::{Convention, ElementId, GameRng, GameState, Offer, Owner, RoundRecord, WaiterStrategy};

pub use color::{h1_degree_bound, ColorPlan, ColorStage, ColorabilityWaiter};
pub use connectivity::{connectivity_plan, AgePlan, ConnectivityWaiter, TreeForcingWaiter};
pub use minor::{MinorForcingWaiter, MinorParams, MinorPlan, MinorStage};
pub use odd_cycle::{endpoint_odd_chords, OddCycleWaiter};
pub use path::{path_edges, path_forcing_offer, PathForcer, PathForcingWaiter};

/// Counts the history records a strategy has already processed.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tracker {
    seen: usize,
}

impl Tracker {
    pub(crate) fn new_records<'s>(&mut self, state: &'s GameState) -> Result<&'s [RoundRecord]> {
        let round = state.round();
        if round < self.seen {
            return Err(Error::Parameter(
                "strategy instance already played a longer game; use a fresh clone per match".into(),
            ));
        }
        let new = &state.history()[self.seen..];
        self.seen = round;
        Ok(new)
    }
}

pub(crate) fn check_board(board: &EdgeBoard, state: &GameState) -> Result<()> {
    if board.size() != state.board_size() {
        return Err(Error::Parameter(format!(
            "strategy is for K_{} ({} edges) but the board has {} elements",
            board.n(),
            board.size(),
            state.board_size()
        )));
    }
    Ok(())
}

/// The min(q+1, free) smallest free elements.
pub fn smallest_free_offer(state: &GameState) -> Result<Offer> {
    let k = state.max_offer_size();
    if k == 0 {
        return Err(Error::Rule("no free elements left to offer".into()));
    }
    Offer::new(state.free_elements().take(k).collect())
}

/// Uniformly random legal offers. Client-Waiter offers first draw a uniform
/// size in 1..=min(q+1, free).
#[derive(Debug, Clone, Default)]
pub struct UniformRandomWaiter;

impl WaiterStrategy for UniformRandomWaiter {
    fn name(&self) -> String {
        "random".into()
    }

    fn offer(&mut self, state: &GameState, rng: &mut GameRng) -> Result<Offer> {
        let max = state.max_offer_size();
        let size = match state.convention() {
            Convention::WaiterClient => state.required_wc_offer_size(),
            Convention::ClientWaiter => rng.random_range(1..=max),
        };
        let free: Vec<ElementId> = state.free_elements().collect();
        Offer::new(sample(rng, free.len(), size).into_iter().map(|i| free[i]).collect())
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

/// Live weight (q+1)^{-free(A)} per set and the element scores it induces.
fn live_scores(family: &WinningFamily, state: &GameState) -> (Vec<f64>, Vec<f64>) {
    let base = 1.0 / (state.q() as f64 + 1.0);
    let weights: Vec<f64> = family
        .sets()
        .iter()
        .map(|s| {
            let mut free = 0;
            for &e in s {
                match state.owner(e) {
                    Owner::Waiter => return 0.0,
                    Owner::Free => free += 1,
                    Owner::Client => {}
                }
            }
            base.powi(free)
        })
        .collect();
    let mut scores = vec![0.0; state.board_size()];
    for e in state.free_elements() {
        scores[e.index()] = family.containing(e).iter().map(|&i| weights[i as usize]).sum();
    }
    (weights, scores)
}

/// Adversarial heuristic for Waiter-Client games where Client avoids
/// winning sets: offers high-weight elements, preferring elements that do
/// not share a live set, so Client cannot dodge by sacrificing one set.
#[derive(Debug, Clone)]
pub struct PressureWaiter {
    family: Arc<WinningFamily>,
}

impl PressureWaiter {
    pub fn new(family: Arc<WinningFamily>) -> Self {
        PressureWaiter { family }
    }
}

impl WaiterStrategy for PressureWaiter {
    fn name(&self) -> String {
        format!("pressure[{}]", self.family.label())
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        let (weights, scores) = live_scores(&self.family, state);
        let mut order: Vec<ElementId> = state.free_elements().collect();
        order.sort_by(|a, b| scores[b.index()].total_cmp(&scores[a.index()]).then(a.cmp(b)));
        let k = state.max_offer_size();
        let mut used = vec![false; self.family.len()];
        let mut chosen = Vec::with_capacity(k);
        for &e in &order {
            if chosen.len() == k {
                break;
            }
            let live = self.family.containing(e).iter().filter(|&&i| weights[i as usize] > 0.0);
            if live.clone().all(|&i| !used[i as usize]) {
                for &i in live {
                    used[i as usize] = true;
                }
                chosen.push(e);
            }
        }
        for &e in &order {
            if chosen.len() == k {
                break;
            }
            if !chosen.contains(&e) {
                chosen.push(e);
            }
        }
        Offer::new(chosen)
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

/// Greedy Waiter for forcing Client to claim a transversal in a
/// Waiter-Client game: offers the q+1 free elements of largest weight
/// Σ 2^{-free(A)/(2q-1)} over sets Client has not hit yet.
#[derive(Debug, Clone)]
pub struct TransversalHeuristicWaiter {
    family: Arc<WinningFamily>,
}

impl TransversalHeuristicWaiter {
    pub fn new(family: Arc<WinningFamily>) -> Self {
        TransversalHeuristicWaiter { family }
    }

    /// Whether Client's elements hit every set.
    pub fn client_has_transversal(&self, state: &GameState) -> bool {
        let mine: Vec<ElementId> = state.client_elements().collect();
        crate::families::is_transversal(&mine, &self.family)
    }
}

impl WaiterStrategy for TransversalHeuristicWaiter {
    fn name(&self) -> String {
        format!("transversal-heuristic[{}]", self.family.label())
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        let exp = 1.0 / (2.0 * state.q() as f64 - 1.0);
        let weights: Vec<f64> = self
            .family
            .sets()
            .iter()
            .map(|s| {
                if s.iter().any(|&e| state.owner(e) == Owner::Client) {
                    return 0.0;
                }
                let free = s.iter().filter(|&&e| state.is_free(e)).count();
                0.5f64.powf(free as f64 * exp)
            })
            .collect();
        let mut order: Vec<(f64, ElementId)> = state
            .free_elements()
            .map(|e| (self.family.containing(e).iter().map(|&i| weights[i as usize]).sum(), e))
            .collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        Offer::new(order.into_iter().take(state.max_offer_size()).map(|(_, e)| e).collect())
    }

    fn diagnostics(&self) -> Vec<String> {
        vec!["heuristic: success is measured, not guaranteed".into()]
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::client::UniformRandom;
    use crate::game::play_match;

    #[test]
    fn random_waiter_is_legal_and_replayable() {
        for conv in [Convention::WaiterClient, Convention::ClientWaiter] {
            for seed in 0..3 {
                let s = GameState::new(15, 2, conv).unwrap();
                let a = play_match(&mut UniformRandomWaiter, &mut UniformRandom, s.clone(), seed).unwrap();
                let b = play_match(&mut UniformRandomWaiter, &mut UniformRandom, s, seed).unwrap();
                assert_eq!(a.transcript, b.transcript);
                a.transcript.replay().unwrap();
            }
        }
    }
}
