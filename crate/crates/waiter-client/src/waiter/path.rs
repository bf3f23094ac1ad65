//! Path forcing: offer edges from the current path endpoint to unused
//! vertices, so every Client pick extends the path by one vertex.

use std::collections::BTreeSet;

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::{ElementId, GameRng, GameState, Offer, RoundRecord, WaiterStrategy};

use super::{check_board, smallest_free_offer, Tracker};

/// Path forcing restricted to a vertex set.
#[derive(Debug, Clone)]
pub struct PathForcer {
    path: Vec<usize>,
    unused: BTreeSet<usize>,
    /// How often each vertex has been offered so far.
    offered: Vec<u32>,
    least_offered: bool,
}

impl PathForcer {
    /// Starts at the smallest vertex of `vertices`.
    pub fn new(n: usize, vertices: &[usize]) -> Result<Self> {
        let mut unused: BTreeSet<usize> = vertices.iter().copied().collect();
        if unused.iter().any(|&v| v >= n) {
            return Err(Error::Parameter(format!("path vertex outside 0..{n}")));
        }
        let start = unused.pop_first().ok_or_else(|| Error::Parameter("no vertices to build a path on".into()))?;
        Ok(PathForcer { path: vec![start], unused, offered: vec![0; n], least_offered: false })
    }

    /// Offer the unused vertices offered least often so far, instead of the
    /// smallest ones.
    pub fn spread_offers(mut self, on: bool) -> Self {
        self.least_offered = on;
        self
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn endpoint(&self) -> usize {
        *self.path.last().expect("path is never empty")
    }

    pub fn unused(&self) -> &BTreeSet<usize> {
        &self.unused
    }

    /// Whether another round can be played, i.e. at least `q+1` unused vertices remain.
    pub fn can_continue(&self, q: usize) -> bool {
        self.unused.len() > q
    }

    /// The q+1 target vertices of the next offer, or `None` once finished.
    pub fn next_targets(&self, q: usize) -> Option<Vec<usize>> {
        if !self.can_continue(q) {
            return None;
        }
        let mut targets: Vec<usize> = self.unused.iter().copied().collect();
        if self.least_offered {
            targets.sort_by_key(|&v| (self.offered[v], v));
        }
        targets.truncate(q + 1);
        targets.sort_unstable();
        Some(targets)
    }

    pub fn next_offer(&self, board: &EdgeBoard, q: usize) -> Option<Offer> {
        let x = self.endpoint();
        let targets = self.next_targets(q)?;
        Some(Offer::new(targets.into_iter().map(|y| board.id(x, y)).collect()).expect("distinct targets"))
    }

    /// Extends the path with Client's pick from an offer made by this forcer.
    pub fn apply(&mut self, board: &EdgeBoard, record: &RoundRecord) -> Result<()> {
        let x = self.endpoint();
        for &e in record.offer.elements() {
            let (a, b) = board.ends(e);
            self.offered[if a == x { b } else { a }] += 1;
        }
        let &[pick] = record.client.as_slice() else {
            return Err(Error::Invariant("path round resolved without a Client pick".into()));
        };
        let (a, b) = board.ends(pick);
        let y = match (a == x, b == x) {
            (true, _) => b,
            (_, true) => a,
            _ => return Err(Error::Invariant(format!("Client edge {a}-{b} is not at the path end {x}"))),
        };
        if !self.unused.remove(&y) {
            return Err(Error::Invariant(format!("vertex {y} is already used")));
        }
        self.path.push(y);
        Ok(())
    }
}

/// The next path-forcing offer for `forcer`, or `None` when the stage is over.
pub fn path_forcing_offer(forcer: &PathForcer, board: &EdgeBoard, state: &GameState) -> Option<Offer> {
    forcer.next_offer(board, state.q())
}

/// Waiter that forces a path on all of K_m and then offers the smallest free edges.
#[derive(Debug, Clone)]
pub struct PathForcingWaiter {
    board: EdgeBoard,
    forcer: PathForcer,
    tracker: Tracker,
    done: bool,
}

impl PathForcingWaiter {
    pub fn new(m: usize) -> Result<Self> {
        let board = EdgeBoard::new(m)?;
        let vertices: Vec<usize> = (0..m).collect();
        Ok(PathForcingWaiter { forcer: PathForcer::new(m, &vertices)?, board, tracker: Tracker::default(), done: false })
    }

    pub fn path(&self) -> &[usize] {
        self.forcer.path()
    }

    pub fn finished(&self) -> bool {
        self.done
    }

    fn catch_up(&mut self, state: &GameState) -> Result<()> {
        for record in self.tracker.new_records(state)? {
            if !self.done {
                self.forcer.apply(&self.board, record)?;
            }
        }
        Ok(())
    }
}

impl WaiterStrategy for PathForcingWaiter {
    fn name(&self) -> String {
        "path".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        check_board(&self.board, state)?;
        self.catch_up(state)?;
        if !self.done {
            if let Some(o) = path_forcing_offer(&self.forcer, &self.board, state) {
                return Ok(o);
            }
            self.done = true;
        }
        smallest_free_offer(state)
    }

    fn diagnostics(&self) -> Vec<String> {
        vec![format!("path on {} vertices", self.forcer.path().len())]
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

/// Elements of the path edges, for assertions.
pub fn path_edges(board: &EdgeBoard, path: &[usize]) -> Vec<ElementId> {
    path.windows(2).map(|w| board.id(w[0], w[1])).collect()
}
