//! Forcing an odd cycle: build a Client path by path forcing until at
//! least q+1 free chords x_a x_b with b-a even exist, then offer q+1 of
//! them. Any chord Client takes closes a cycle of odd length b-a+1.

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::{Convention, ElementId, GameRng, GameState, Offer, WaiterStrategy};

use super::{check_board, smallest_free_offer, PathForcer, Tracker};

#[derive(Debug, Clone)]
pub struct OddCycleWaiter {
    board: EdgeBoard,
    q: usize,
    forcer: PathForcer,
    chords_offered: bool,
    path_pending: bool,
    tracker: Tracker,
}

impl OddCycleWaiter {
    /// Requires 1 <= q <= (1-δ)n and q < n.
    pub fn new(n: usize, q: usize, delta: f64) -> Result<Self> {
        if q == 0 || q >= n {
            return Err(Error::Parameter(format!("odd-cycle forcing needs 1 <= q < n, got q = {q}, n = {n}")));
        }
        if !(0.0..1.0).contains(&delta) || q as f64 > (1.0 - delta) * n as f64 + 1e-9 {
            return Err(Error::Parameter(format!(
                "odd-cycle forcing needs q <= (1-delta)n: q = {q}, (1-delta)n = {:.2}",
                (1.0 - delta) * n as f64
            )));
        }
        let vertices: Vec<usize> = (0..n).collect();
        Ok(OddCycleWaiter {
            board: EdgeBoard::new(n)?,
            q,
            forcer: PathForcer::new(n, &vertices)?.spread_offers(true),
            chords_offered: false,
            path_pending: false,
            tracker: Tracker::default(),
        })
    }

    pub fn path(&self) -> &[usize] {
        self.forcer.path()
    }

    /// Free chords x_a x_b of the current path with b - a even and at least 2.
    pub fn free_odd_chords(&self, state: &GameState) -> Vec<ElementId> {
        let p = self.forcer.path();
        let mut out: Vec<ElementId> = (0..p.len())
            .flat_map(|a| (a + 2..p.len()).step_by(2).map(move |b| (a, b)))
            .map(|(a, b)| self.board.id(p[a], p[b]))
            .filter(|&e| state.is_free(e))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Odd-closing chords from one end of a path with `len` edges: ⌊len/2⌋.
pub fn endpoint_odd_chords(len: usize) -> usize {
    len / 2
}

impl WaiterStrategy for OddCycleWaiter {
    fn name(&self) -> String {
        "odd-cycle".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        check_board(&self.board, state)?;
        if state.q() != self.q || state.convention() != Convention::WaiterClient {
            return Err(Error::Parameter("odd-cycle strategy was built for another game".into()));
        }
        for record in self.tracker.new_records(state)? {
            if std::mem::take(&mut self.path_pending) {
                self.forcer.apply(&self.board, record)?;
            }
        }
        if self.chords_offered {
            return smallest_free_offer(state);
        }
        let chords = self.free_odd_chords(state);
        if chords.len() > self.q {
            self.chords_offered = true;
            return Offer::new(chords.into_iter().take(self.q + 1).collect());
        }
        match self.forcer.next_offer(&self.board, self.q) {
            Some(o) => {
                self.path_pending = true;
                Ok(o)
            }
            None => Err(Error::StrategyFailure(format!(
                "path on {} vertices has only {} free odd chords, need {}",
                self.forcer.path().len(),
                chords.len(),
                self.q + 1
            ))),
        }
    }

    fn diagnostics(&self) -> Vec<String> {
        vec![format!("path on {} vertices before the chord round", self.forcer.path().len())]
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}
