//! Graph views over claimed edge sets and exact property verifiers.

mod color;
mod io;
mod minor;
mod planar;
mod props;

use std::collections::VecDeque;

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::{ElementId, GameState, Owner};

pub use color::{
    chromatic_number, clique_number, dsatur_coloring, independence_number, is_k_colorable,
    Bounded, EXACT_CAP,
};
pub use io::{parse_edge_list, to_dot, to_edge_list};
pub use minor::{
    ccl, has_kt_minor, has_kt_minor_with_witness, k4_minor_free_by_reduction, verify_branch_sets, BranchDecomposition,
    MinorAnswer, MINOR_EXHAUSTIVE_CAP,
};
pub use planar::is_planar;
pub use props::{
    check_colorability_properties, dangerous_edges, degeneracy, girth, is_linear_forest,
    no_intersecting_cycles, ColorabilityReport, PropertyMode,
};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphView {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl GraphView {
    pub fn empty(n: usize) -> Self {
        GraphView { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list. Loops and out-of-range vertices are
    /// errors; repeated edges are merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!("edge ({u},{v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Parameter(format!("loop at vertex {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(GraphView { adj, m: m / 2 })
    }

    /// The graph formed by the board edges in `ids`.
    pub fn from_element_ids(board: &EdgeBoard, ids: impl IntoIterator<Item = ElementId>) -> Self {
        GraphView::from_edges(board.n(), ids.into_iter().map(|e| board.ends(e)))
            .expect("board edges are valid")
    }

    /// The graph of the edges `who` owns in `state`.
    pub fn from_owner(board: &EdgeBoard, state: &GameState, who: Owner) -> Self {
        let ids = state
            .owners()
            .iter()
            .enumerate()
            .filter(|(_, &o)| o == who)
            .map(|(i, _)| ElementId(i as u32));
        GraphView::from_element_ids(board, ids)
    }

    pub fn complete(n: usize) -> Self {
        GraphView::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        GraphView::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        GraphView::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        GraphView::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
    }

    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        GraphView::from_edges(10, e).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter().filter(move |&&v| v as usize > u).map(move |&v| (u, v as usize))
        })
    }

    /// Subgraph induced by `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> GraphView {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let pos = &pos;
            self.adj[v]
                .iter()
                .map(move |&w| pos[w as usize])
                .filter(move |&j| j != usize::MAX && j > i)
                .map(move |j| (i, j))
        });
        GraphView::from_edges(vertices.len(), edges.collect::<Vec<_>>()).expect("valid")
    }

    pub fn complement(&self) -> GraphView {
        let n = self.n();
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect();
        GraphView::from_edges(n, edges).expect("valid")
    }

    /// Union with a graph on the same vertex set.
    pub fn union(&self, other: &GraphView) -> Result<GraphView> {
        if self.n() != other.n() {
            return Err(Error::Parameter("graphs have different vertex counts".into()));
        }
        GraphView::from_edges(self.n(), self.edges().chain(other.edges()).collect::<Vec<_>>())
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    let w = w as usize;
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.components().1
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.component_count() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.m + self.component_count() == self.n()
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut side = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    let w = w as usize;
                    if side[w] == u8::MAX {
                        side[w] = side[v] ^ 1;
                        queue.push_back(w);
                    } else if side[w] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of edges with both ends in `set` (given as a membership mask).
    pub fn edges_inside(&self, inside: &[bool]) -> usize {
        self.edges().filter(|&(u, v)| inside[u] && inside[v]).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(GraphView::complete(5).edge_count(), 10);
        assert_eq!(GraphView::petersen().edge_count(), 15);
        assert!(GraphView::petersen().neighbors(0).len() == 3);
        assert_eq!(GraphView::complete_bipartite(3, 3).edge_count(), 9);
        assert!(GraphView::from_edges(3, [(0, 0)]).is_err());
        assert_eq!(GraphView::from_edges(3, [(0, 1), (1, 0)]).unwrap().edge_count(), 1);
    }

    #[test]
    fn basic_structure() {
        let p = GraphView::path(4);
        assert!(p.is_forest() && p.is_connected() && p.is_bipartite());
        assert!(!GraphView::cycle(5).is_bipartite());
        let two = GraphView::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.component_count(), 2);
        assert_eq!(GraphView::complete(4).complement().edge_count(), 0);
        let tri = GraphView::complete(4).induced(&[0, 2, 3]);
        assert_eq!(tri.edge_count(), 3);
    }

    #[test]
    fn from_game_state() {
        use crate::game::{Convention, Offer};
        let b = EdgeBoard::new(4).unwrap();
        let mut s = GameState::new(b.size(), 1, Convention::WaiterClient).unwrap();
        let off = Offer::new(vec![b.id(0, 1), b.id(2, 3)]).unwrap();
        s.resolve_round(off, Some(b.id(2, 3))).unwrap();
        let g = GraphView::from_owner(&b, &s, Owner::Client);
        assert!(g.has_edge(2, 3) && g.edge_count() == 1);
        let w = GraphView::from_owner(&b, &s, Owner::Waiter);
        assert!(w.has_edge(0, 1));
    }
}
