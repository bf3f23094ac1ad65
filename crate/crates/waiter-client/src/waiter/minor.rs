//! Forcing a K_t minor in three stages: a long path on B, a matching
//! between A and the path, then one Client edge between every two groups
//! of matched A-vertices.

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::{Convention, ElementId, GameRng, GameState, Offer, RoundRecord, WaiterStrategy};
use crate::graph::BranchDecomposition;

use super::{check_board, smallest_free_offer, PathForcer, Tracker};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorParams {
    pub n: usize,
    pub q: usize,
    pub eps: f64,
    pub t: usize,
}

impl MinorParams {
    /// Checks q <= (1-ε)n, ε >= 4n^{-1/4} and t <= ε²√n/5.
    pub fn validate(&self) -> Result<()> {
        let MinorParams { n, q, eps, t } = *self;
        let nf = n as f64;
        let fail = |what: String| Err(Error::Parameter(format!("minor forcing: {what}")));
        if !(eps > 0.0 && eps <= 1.0) {
            return fail(format!("eps = {eps} must lie in (0, 1]"));
        }
        if q == 0 || q as f64 > (1.0 - eps) * nf + 1e-9 {
            return fail(format!("q <= (1-eps)n violated: q = {q}, (1-eps)n = {:.3}", (1.0 - eps) * nf));
        }
        let min_eps = 4.0 * nf.powf(-0.25);
        if eps < min_eps - 1e-12 {
            return fail(format!("eps >= 4n^(-1/4) violated: eps = {eps}, 4n^(-1/4) = {min_eps:.4}"));
        }
        let max_t = eps * eps * nf.sqrt() / 5.0;
        if t < 1 || t as f64 > max_t + 1e-9 {
            return fail(format!("1 <= t <= eps^2 sqrt(n)/5 violated: t = {t}, bound = {max_t:.4}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorStage {
    Path,
    Matching,
    Connect,
    Done,
}

/// The sets the strategy builds. A = {0..|A|-1}, B the remaining vertices.
#[derive(Debug, Clone)]
pub struct MinorPlan {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub path: Vec<usize>,
    /// Client's matching edges as (A-vertex, path vertex).
    pub matching: Vec<(usize, usize)>,
    pub segments: Vec<Vec<usize>>,
    pub d: Vec<Vec<usize>>,
    pub stage: MinorStage,
}

impl MinorPlan {
    /// B_i = V(P_i) ∪ D_i, available once the connecting stage is over.
    pub fn witness(&self) -> Option<BranchDecomposition> {
        (self.stage == MinorStage::Done).then(|| {
            BranchDecomposition::new(
                self.segments.iter().zip(&self.d).map(|(p, d)| p.iter().chain(d).copied().collect()).collect(),
            )
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Pending {
    Path,
    Matching,
    Connect,
}

#[derive(Debug, Clone)]
pub struct MinorForcingWaiter {
    params: MinorParams,
    board: EdgeBoard,
    forcer: PathForcer,
    plan: MinorPlan,
    matched: Vec<bool>,
    pending: Option<Pending>,
    tracker: Tracker,
    notes: Vec<String>,
}

impl MinorForcingWaiter {
    pub fn new(params: MinorParams) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        let a_size = (params.eps * n as f64 / 2.0).floor() as usize;
        let a: Vec<usize> = (0..a_size).collect();
        let b: Vec<usize> = (a_size..n).collect();
        let forcer = PathForcer::new(n, &b)?;
        Ok(MinorForcingWaiter {
            params,
            board: EdgeBoard::new(n)?,
            plan: MinorPlan {
                a,
                b,
                path: forcer.path().to_vec(),
                matching: Vec::new(),
                segments: Vec::new(),
                d: Vec::new(),
                stage: MinorStage::Path,
            },
            forcer,
            matched: vec![false; n],
            pending: None,
            tracker: Tracker::default(),
            notes: Vec::new(),
        })
    }

    pub fn plan(&self) -> &MinorPlan {
        &self.plan
    }

    pub fn witness(&self) -> Option<BranchDecomposition> {
        self.plan.witness()
    }

    fn catch_up(&mut self, state: &GameState) -> Result<()> {
        let records: Vec<RoundRecord> = self.tracker.new_records(state)?.to_vec();
        for record in records {
            match self.pending.take() {
                Some(Pending::Path) => {
                    self.forcer.apply(&self.board, &record)?;
                    self.plan.path = self.forcer.path().to_vec();
                }
                Some(Pending::Matching) => {
                    let pick = single_pick(&record)?;
                    let (u, v) = self.board.ends(pick);
                    if self.matched[u] || self.matched[v] {
                        return Err(Error::Invariant(format!("matching edge {u}-{v} reuses a matched vertex")));
                    }
                    self.matched[u] = true;
                    self.matched[v] = true;
                    self.plan.matching.push((u.min(v), u.max(v)));
                }
                Some(Pending::Connect) | None => {}
            }
        }
        Ok(())
    }

    fn end_path_stage(&mut self) -> Result<()> {
        let need = self.params.eps * self.params.n as f64 / 2.0;
        let p = self.plan.path.len();
        if (p as f64) < need - 1e-9 {
            return Err(Error::Invariant(format!("path stage ended with {p} vertices, fewer than eps*n/2 = {need}")));
        }
        self.notes.push(format!("path on {p} vertices (eps*n/2 = {need:.1})"));
        self.plan.stage = MinorStage::Matching;
        Ok(())
    }

    fn matching_offer(&self, state: &GameState) -> Result<Option<Offer>> {
        let q = self.params.q as f64;
        let r = self.plan.matching.len() as f64;
        let a = self.plan.a.len() as f64;
        let p = self.plan.path.len() as f64;
        if (a - r) * (p - r) - q * r < q + 1.0 {
            return Ok(None);
        }
        let mut path_sorted = self.plan.path.clone();
        path_sorted.sort_unstable();
        let mut ids = Vec::with_capacity(self.params.q + 1);
        'outer: for &u in self.plan.a.iter().filter(|&&u| !self.matched[u]) {
            for &v in path_sorted.iter().filter(|&&v| !self.matched[v]) {
                let e = self.board.id(u, v);
                if state.is_free(e) {
                    ids.push(e);
                    if ids.len() == self.params.q + 1 {
                        break 'outer;
                    }
                }
            }
        }
        if ids.len() <= self.params.q {
            return Err(Error::Invariant(format!(
                "matching stage guard holds at r = {r} but only {} eligible edges are free",
                ids.len()
            )));
        }
        Ok(Some(Offer::new(ids)?))
    }

    fn end_matching_stage(&mut self) -> Result<()> {
        let n = self.params.n;
        let r = self.plan.matching.len();
        let need = (self.params.eps * self.params.eps * n as f64 / 5.0 - 1e-9).ceil() as usize;
        let root = (n as f64).sqrt().floor() as usize;
        if r < need || r < self.params.t * root {
            return Err(Error::Invariant(format!(
                "matching stage ended with {r} edges; need {need} and t*floor(sqrt n) = {}",
                self.params.t * root
            )));
        }
        self.notes.push(format!("matching of size {r} (eps^2 n/5 = {need})"));
        // split P into t consecutive pieces with floor(sqrt n) matched vertices each
        let partner: std::collections::HashMap<usize, usize> =
            self.plan.matching.iter().map(|&(a, p)| (p, a)).collect();
        let t = self.params.t;
        let mut segments = vec![Vec::new(); t];
        let mut d = vec![Vec::new(); t];
        let mut i = 0;
        for &v in &self.plan.path {
            if i + 1 < t && d[i].len() == root {
                i += 1;
            }
            segments[i].push(v);
            if let Some(&a) = partner.get(&v) {
                d[i].push(a);
            }
        }
        if d.iter().any(|di| di.len() < root) {
            return Err(Error::Invariant("a path segment has fewer than floor(sqrt n) matched vertices".into()));
        }
        for di in &mut d {
            di.sort_unstable();
        }
        self.plan.segments = segments;
        self.plan.d = d;
        self.plan.stage = MinorStage::Connect;
        Ok(())
    }

    fn connect_offer(&self, state: &GameState) -> Result<Option<Offer>> {
        let t = self.params.t;
        for i in 0..t {
            for j in i + 1..t {
                let (di, dj) = (&self.plan.d[i], &self.plan.d[j]);
                let mut ids: Vec<ElementId> = Vec::new();
                let mut joined = false;
                for &u in di {
                    for &v in dj {
                        let e = self.board.id(u, v);
                        match state.owner(e) {
                            crate::game::Owner::Client => joined = true,
                            crate::game::Owner::Free => ids.push(e),
                            crate::game::Owner::Waiter => {}
                        }
                    }
                }
                if joined {
                    continue;
                }
                ids.sort_unstable();
                if ids.len() <= self.params.q {
                    return Err(Error::Invariant(format!(
                        "only {} free edges between D_{} and D_{}",
                        ids.len(),
                        i + 1,
                        j + 1
                    )));
                }
                ids.truncate(self.params.q + 1);
                return Ok(Some(Offer::new(ids)?));
            }
        }
        Ok(None)
    }
}

fn single_pick(record: &RoundRecord) -> Result<ElementId> {
    match record.client.as_slice() {
        &[pick] => Ok(pick),
        _ => Err(Error::Invariant("stage round resolved without a Client pick".into())),
    }
}

impl WaiterStrategy for MinorForcingWaiter {
    fn name(&self) -> String {
        format!("minor(t={})", self.params.t)
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        check_board(&self.board, state)?;
        if state.q() != self.params.q || state.convention() != Convention::WaiterClient {
            return Err(Error::Parameter("minor strategy was built for another game".into()));
        }
        self.catch_up(state)?;
        loop {
            match self.plan.stage {
                MinorStage::Path => match self.forcer.next_offer(&self.board, state.q()) {
                    Some(o) => {
                        self.pending = Some(Pending::Path);
                        return Ok(o);
                    }
                    None => self.end_path_stage()?,
                },
                MinorStage::Matching => match self.matching_offer(state)? {
                    Some(o) => {
                        self.pending = Some(Pending::Matching);
                        return Ok(o);
                    }
                    None => self.end_matching_stage()?,
                },
                MinorStage::Connect => match self.connect_offer(state)? {
                    Some(o) => {
                        self.pending = Some(Pending::Connect);
                        return Ok(o);
                    }
                    None => {
                        self.notes.push(format!("all {} groups joined after round {}", self.params.t, state.round()));
                        self.plan.stage = MinorStage::Done;
                    }
                },
                MinorStage::Done => return smallest_free_offer(state),
            }
        }
    }

    fn diagnostics(&self) -> Vec<String> {
        self.notes.clone()
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}
