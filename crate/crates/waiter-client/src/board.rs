//! Edge boards: the elements of E(K_n) indexed row by row.

use crate::error::{Error, Result};
use crate::game::ElementId;

/// Canonical numbering of the edges `uv`, `u < v`, of the complete graph on
/// `n` vertices: (0,1), (0,2), .., (0,n-1), (1,2), ..
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBoard {
    n: usize,
    row_start: Vec<usize>,
    ends: Vec<(u32, u32)>,
}

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl EdgeBoard {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("edge board needs n >= 2, got {n}")));
        }
        let mut row_start = Vec::with_capacity(n);
        let mut ends = Vec::with_capacity(edge_count(n));
        for u in 0..n {
            row_start.push(ends.len());
            for v in u + 1..n {
                ends.push((u as u32, v as u32));
            }
        }
        Ok(EdgeBoard { n, row_start, ends })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.ends.len()
    }

    /// Id of the edge `uv` (either orientation).
    pub fn id(&self, u: usize, v: usize) -> ElementId {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        ElementId((self.row_start[a] + (b - a - 1)) as u32)
    }

    pub fn try_id(&self, u: usize, v: usize) -> Result<ElementId> {
        if u == v || u >= self.n || v >= self.n {
            return Err(Error::Parameter(format!("({u},{v}) is not an edge of K_{}", self.n)));
        }
        Ok(self.id(u, v))
    }

    pub fn ends(&self, e: ElementId) -> (usize, usize) {
        let (u, v) = self.ends[e.index()];
        (u as usize, v as usize)
    }

    pub fn try_ends(&self, e: ElementId) -> Result<(usize, usize)> {
        if e.index() >= self.size() {
            return Err(Error::UnknownElement(e));
        }
        Ok(self.ends(e))
    }

    pub fn edges(&self) -> impl Iterator<Item = (ElementId, usize, usize)> + '_ {
        self.ends
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (ElementId(i as u32), u as usize, v as usize))
    }

    /// Recovers `n` from a board size, if it is a triangular number.
    pub fn n_for_size(size: usize) -> Option<usize> {
        let mut n = 2;
        while edge_count(n) < size {
            n += 1;
        }
        (edge_count(n) == size).then_some(n)
    }
}
