//! Client-Waiter strategy keeping Client's graph k-colorable.
//!
//! Stage I never offers dangerous edges (free edges closing a 3- or 4-cycle
//! with Client's graph), so Client's Stage I graph H1 has girth at least 5,
//! and it answers every Client edge xy with edges at x and at y, which keeps
//! Δ(H1) small. Stage II offers every free edge touching an inclusion-maximal
//! vertex set A with at most q+1 such edges, seeded with Client's last edge,
//! so the Stage II graph H2 is a linear forest.

use std::collections::HashSet;

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::{Convention, ElementId, GameRng, GameState, Offer, WaiterStrategy};
use crate::graph::GraphView;

use super::{check_board, Tracker};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorStage {
    I,
    II,
}

/// Snapshot of the strategy's bookkeeping.
#[derive(Debug, Clone)]
pub struct ColorPlan {
    /// Free dangerous edges.
    pub dangerous: Vec<ElementId>,
    pub h1: Vec<(usize, usize)>,
    pub h2: Vec<(usize, usize)>,
    pub last_edge: Option<(usize, usize)>,
    pub stage: ColorStage,
}

#[derive(Debug, Clone)]
pub struct ColorabilityWaiter {
    board: EdgeBoard,
    k: usize,
    q: usize,
    eps: f64,
    dangerous: Vec<bool>,
    adj: Vec<Vec<usize>>,
    h1: Vec<(usize, usize)>,
    h2: Vec<(usize, usize)>,
    last_edge: Option<(usize, usize)>,
    /// Last Client edge claimed in Stage II.
    last_stage2: Option<(usize, usize)>,
    stage: ColorStage,
    pending: Option<ColorStage>,
    used_substitutes: HashSet<(usize, usize)>,
    substitutions: usize,
    arbitrary_rounds: usize,
    stage2_fallbacks: usize,
    warnings: Vec<String>,
    tracker: Tracker,
}

/// Degree bound for H1: ⌈(n-1)/⌊(q+1)/2⌋⌉ + 1.
pub fn h1_degree_bound(n: usize, q: usize) -> usize {
    (n - 1).div_ceil((q + 1) / 2) + 1
}

impl ColorabilityWaiter {
    /// `alpha` is the slack in the requirement q >= (4+α)n/(k ln k).
    pub fn new(n: usize, k: usize, q: usize, eps: f64, alpha: f64) -> Result<Self> {
        if k < 2 || q < 1 || n < 3 {
            return Err(Error::Parameter(format!("colorability strategy needs n >= 3, k >= 2, q >= 1 (n={n}, k={k}, q={q})")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Parameter(format!("eps = {eps} must lie in (0, 1)")));
        }
        let klk = k as f64 * (k as f64).ln();
        let need = (4.0 + alpha) * n as f64 / klk;
        if (q as f64) < need {
            return Err(Error::Parameter(format!(
                "q >= (4+alpha)n/(k ln k) violated: q = {q}, bound = {need:.3}"
            )));
        }
        let mut warnings = Vec::new();
        let cubic = 2.0 * klk.powi(3);
        if (q as f64) < cubic {
            warnings.push(format!("q = {q} is below 2(k ln k)^3 = {cubic:.0}"));
        }
        let d1 = h1_degree_bound(n, q);
        let stage2 = 2 * (d1 * d1 + d1 * d1 * d1);
        if q + 1 < stage2 {
            warnings.push(format!(
                "q+1 = {} is below 2(D^2+D^3) = {stage2} for D = {d1}; Stage II guarantees unverified",
                q + 1
            ));
        }
        if (d1 as f64) > (1.0 - eps) * klk / 2.0 {
            warnings.push(format!(
                "H1 degree bound {d1} exceeds (1-eps) k ln k / 2 = {:.2}",
                (1.0 - eps) * klk / 2.0
            ));
        }
        let board = EdgeBoard::new(n)?;
        Ok(ColorabilityWaiter {
            dangerous: vec![false; board.size()],
            adj: vec![Vec::new(); n],
            board,
            k,
            q,
            eps,
            h1: Vec::new(),
            h2: Vec::new(),
            last_edge: None,
            last_stage2: None,
            stage: ColorStage::I,
            pending: None,
            used_substitutes: HashSet::new(),
            substitutions: 0,
            arbitrary_rounds: 0,
            stage2_fallbacks: 0,
            warnings,
            tracker: Tracker::default(),
        })
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// True when no feasibility warning was raised.
    pub fn guarantees_verified(&self) -> bool {
        !self.warnings.iter().any(|w| w.contains("unverified"))
    }

    pub fn h1_graph(&self) -> GraphView {
        GraphView::from_edges(self.board.n(), self.h1.iter().copied()).expect("valid edges")
    }

    pub fn h2_graph(&self) -> GraphView {
        GraphView::from_edges(self.board.n(), self.h2.iter().copied()).expect("valid edges")
    }

    pub fn plan(&self, state: &GameState) -> ColorPlan {
        ColorPlan {
            dangerous: state.free_elements().filter(|e| self.dangerous[e.index()]).collect(),
            h1: self.h1.clone(),
            h2: self.h2.clone(),
            last_edge: self.last_edge,
            stage: self.stage,
        }
    }

    fn mark(&mut self, a: usize, b: usize) {
        if a != b {
            self.dangerous[self.board.id(a, b).index()] = true;
        }
    }

    /// Adds Client's edge uv and marks the edges that now close a 3- or 4-cycle.
    fn add_client_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
        for (x, y) in [(u, v), (v, u)] {
            let ny = self.adj[y].clone();
            for &w in ny.iter().filter(|&&w| w != x) {
                // x - y - w
                self.mark(x, w);
                for &z in self.adj[w].clone().iter().filter(|&&z| z != y && z != x) {
                    // x - y - w - z
                    self.mark(x, z);
                }
            }
        }
        let nu: Vec<usize> = self.adj[u].iter().copied().filter(|&a| a != v).collect();
        let nv: Vec<usize> = self.adj[v].iter().copied().filter(|&b| b != u).collect();
        for &a in &nu {
            for &b in &nv {
                // a - u - v - b
                self.mark(a, b);
            }
        }
    }

    fn catch_up(&mut self, state: &GameState) -> Result<()> {
        for record in self.tracker.new_records(state)? {
            let stage = self.pending.take().unwrap_or(self.stage);
            let &[pick] = record.client.as_slice() else {
                return Err(Error::Invariant("Client-Waiter round without a pick".into()));
            };
            let (u, v) = self.board.ends(pick);
            self.add_client_edge(u, v);
            match stage {
                ColorStage::I => self.h1.push((u, v)),
                ColorStage::II => {
                    self.h2.push((u, v));
                    self.last_stage2 = Some((u, v));
                }
            }
            self.last_edge = Some((u, v));
        }
        Ok(())
    }

    fn safe_at(&self, state: &GameState, x: usize) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = (0..self.board.n())
            .filter(|&w| w != x)
            .map(|w| self.board.id(x, w))
            .filter(|&e| state.is_free(e) && !self.dangerous[e.index()])
            .collect();
        out.sort_unstable();
        out
    }

    fn split_offer(&self, state: &GameState, x: usize, y: usize) -> Vec<ElementId> {
        let half_up = (self.q + 1).div_ceil(2);
        let half_down = (self.q + 1) / 2;
        let mut ids: Vec<ElementId> = self.safe_at(state, x).into_iter().take(half_up).collect();
        ids.extend(self.safe_at(state, y).into_iter().take(half_down));
        ids
    }

    fn stage1_offer(&mut self, state: &GameState) -> Option<Vec<ElementId>> {
        if let Some((x, y)) = self.last_edge {
            let ids = self.split_offer(state, x, y);
            if !ids.is_empty() {
                return Some(ids);
            }
            let mut client: Vec<(usize, usize)> = self.h1.iter().chain(&self.h2).copied().collect();
            client.sort_unstable();
            for (u, v) in client {
                if self.used_substitutes.contains(&(u, v)) {
                    continue;
                }
                let ids = self.split_offer(state, u, v);
                if !ids.is_empty() {
                    self.used_substitutes.insert((u, v));
                    self.substitutions += 1;
                    return Some(ids);
                }
            }
        }
        let ids: Vec<ElementId> =
            state.free_elements().filter(|e| !self.dangerous[e.index()]).take(self.q + 1).collect();
        if ids.is_empty() {
            return None;
        }
        if self.last_edge.is_some() {
            self.arbitrary_rounds += 1;
        }
        Some(ids)
    }

    fn stage2_offer(&mut self, state: &GameState) -> Vec<ElementId> {
        let n = self.board.n();
        let free_deg: Vec<usize> =
            (0..n).map(|v| (0..n).filter(|&w| w != v && state.is_free(self.board.id(v, w))).count()).collect();
        let mut in_a = vec![false; n];
        let mut members: Vec<usize> = Vec::new();
        let mut count = 0usize;
        let add = |v: usize, in_a: &mut Vec<bool>, members: &mut Vec<usize>, count: &mut usize, force: bool| {
            if in_a[v] {
                return true;
            }
            let inner = members.iter().filter(|&&a| state.is_free(self.board.id(a, v))).count();
            let next = *count + free_deg[v] - inner;
            if next <= self.q + 1 || force {
                in_a[v] = true;
                members.push(v);
                *count = next;
                true
            } else {
                false
            }
        };
        if let Some((x, y)) = self.last_stage2 {
            add(x, &mut in_a, &mut members, &mut count, true);
            add(y, &mut in_a, &mut members, &mut count, true);
            if count > self.q + 1 {
                // the seed alone has too many free edges
                self.stage2_fallbacks += 1;
                let mut ids: Vec<ElementId> = (0..n)
                    .flat_map(|w| [(x, w), (y, w)])
                    .filter(|&(a, b)| a != b)
                    .map(|(a, b)| self.board.id(a, b))
                    .filter(|&e| state.is_free(e))
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                ids.truncate(self.q + 1);
                return ids;
            }
        }
        for v in 0..n {
            add(v, &mut in_a, &mut members, &mut count, false);
        }
        let ids: Vec<ElementId> =
            state.free_elements().filter(|&e| {
                let (a, b) = self.board.ends(e);
                in_a[a] || in_a[b]
            }).collect();
        if ids.is_empty() {
            self.stage2_fallbacks += 1;
            return state.free_elements().take(self.q + 1).collect();
        }
        ids
    }
}

impl WaiterStrategy for ColorabilityWaiter {
    fn name(&self) -> String {
        format!("color(k={})", self.k)
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        check_board(&self.board, state)?;
        if state.q() != self.q || state.convention() != Convention::ClientWaiter {
            return Err(Error::Parameter("colorability strategy was built for another game".into()));
        }
        self.catch_up(state)?;
        if self.stage == ColorStage::I {
            if let Some(ids) = self.stage1_offer(state) {
                self.pending = Some(ColorStage::I);
                return Offer::new(ids);
            }
            self.stage = ColorStage::II;
        }
        let ids = self.stage2_offer(state);
        self.pending = Some(ColorStage::II);
        Offer::new(ids)
    }

    fn diagnostics(&self) -> Vec<String> {
        let mut d = self.warnings.clone();
        d.push(format!(
            "stage I: {} Client edges, {} substitutions, {} arbitrary rounds; stage II: {} Client edges, {} fallbacks; eps = {}",
            self.h1.len(),
            self.substitutions,
            self.arbitrary_rounds,
            self.h2.len(),
            self.stage2_fallbacks,
            self.eps
        ));
        d
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_bound_examples() {
        assert_eq!(h1_degree_bound(101, 49), 5);
        assert_eq!(h1_degree_bound(300, 199), 4);
    }

    #[test]
    fn precondition_is_checked() {
        assert!(ColorabilityWaiter::new(300, 20, 10, 0.1, 0.0).is_err());
        let w = ColorabilityWaiter::new(300, 20, 199, 0.1, 0.0).unwrap();
        assert!(w.guarantees_verified());
        assert!(!w.warnings().is_empty());
    }

    #[test]
    fn danger_tracking_matches_definition() {
        let mut w = ColorabilityWaiter::new(8, 10, 7, 0.1, 0.0).unwrap();
        for (u, v) in [(0, 1), (1, 2), (2, 3), (4, 5)] {
            w.add_client_edge(u, v);
        }
        let g = GraphView::from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap();
        for (e, a, b) in w.board.edges() {
            if g.has_edge(a, b) {
                continue;
            }
            let want = crate::graph::dangerous_edges(&g, &[(a, b)]).len() == 1;
            assert_eq!(w.dangerous[e.index()], want, "edge {a}-{b}");
        }
    }
}
