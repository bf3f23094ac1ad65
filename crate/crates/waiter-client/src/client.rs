//! Client strategies.
//!
//! The potential-based strategies score each offered element by the change
//! it would cause in their potential and take the smallest score, breaking
//! ties (within [`TIE_EPS`]) towards the smallest id.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::families::{enumerate, FamilySpec, NeumaierSum, WinningFamily};
use crate::game::{ClientStrategy, ElementId, GameRng, GameState, Offer, Owner, RoundRecord};

/// Absolute tolerance for comparing potential values.
pub const TIE_EPS: f64 = 1e-12;

/// Per-set owner counts, updated from round records and resynchronised from
/// the state whenever a round was missed.
#[derive(Debug, Clone)]
struct SetTracker {
    family: Arc<WinningFamily>,
    free: Vec<u32>,
    client: Vec<u32>,
    waiter: Vec<u32>,
    synced_round: Option<usize>,
}

impl SetTracker {
    fn new(family: Arc<WinningFamily>) -> Self {
        let free = family.sets().iter().map(|s| s.len() as u32).collect();
        let k = family.len();
        SetTracker { family, free, client: vec![0; k], waiter: vec![0; k], synced_round: None }
    }

    fn check_board(&self, state: &GameState) -> Result<()> {
        if state.board_size() != self.family.n_elements() {
            return Err(Error::Parameter(format!(
                "family {} is over {} elements but the board has {}",
                self.family.label(),
                self.family.n_elements(),
                state.board_size()
            )));
        }
        Ok(())
    }

    fn sync(&mut self, state: &GameState) -> Result<()> {
        if self.synced_round == Some(state.round()) {
            return Ok(());
        }
        self.check_board(state)?;
        for (i, set) in self.family.sets().iter().enumerate() {
            let (mut f, mut c, mut w) = (0, 0, 0);
            for &e in set {
                match state.owner(e) {
                    Owner::Free => f += 1,
                    Owner::Client => c += 1,
                    Owner::Waiter => w += 1,
                }
            }
            self.free[i] = f;
            self.client[i] = c;
            self.waiter[i] = w;
        }
        self.synced_round = Some(state.round());
        Ok(())
    }

    fn apply(&mut self, state: &GameState, record: &RoundRecord) {
        if self.synced_round.map(|r| r + 1) != Some(state.round()) {
            self.synced_round = None;
            let _ = self.sync(state);
            return;
        }
        for &e in &record.client {
            for &i in self.family.containing(e) {
                self.free[i as usize] -= 1;
                self.client[i as usize] += 1;
            }
        }
        for &e in &record.waiter {
            for &i in self.family.containing(e) {
                self.free[i as usize] -= 1;
                self.waiter[i as usize] += 1;
            }
        }
        self.synced_round = Some(state.round());
    }

    /// |A ∩ offer| for every set meeting the offer.
    fn hits(&self, offer: &Offer) -> HashMap<u32, u32> {
        let mut hits = HashMap::new();
        for &e in offer {
            for &i in self.family.containing(e) {
                *hits.entry(i).or_insert(0) += 1;
            }
        }
        hits
    }

    fn matches_state(&self, state: &GameState) -> bool {
        let mut fresh = SetTracker::new(self.family.clone());
        fresh.sync(state).is_ok()
            && fresh.free == self.free
            && fresh.client == self.client
            && fresh.waiter == self.waiter
    }
}

/// Index of the smallest score; earlier positions win ties.
fn argmin(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s < scores[best] - TIE_EPS {
            best = i;
        }
    }
    best
}

fn require_offer(offer: &Offer) -> Result<()> {
    if offer.is_empty() {
        return Err(Error::Rule("Client was offered nothing".into()));
    }
    Ok(())
}

/// Avoids fully claiming winning sets by minimising the live potential
/// Σ (q+1)^{-(free elements of A)} over sets without a Waiter element.
#[derive(Debug, Clone)]
pub struct PotentialAvoid {
    tracker: SetTracker,
    debug_check: bool,
}

impl PotentialAvoid {
    pub fn new(family: Arc<WinningFamily>) -> Self {
        PotentialAvoid { tracker: SetTracker::new(family), debug_check: false }
    }

    /// Recompute the counters from scratch before every pick and fail on any
    /// disagreement with the incremental ones.
    pub fn with_debug_check(mut self, on: bool) -> Self {
        self.debug_check = on;
        self
    }

    pub fn family(&self) -> &Arc<WinningFamily> {
        &self.tracker.family
    }

    /// Change of the live potential for each offered element, in offer order.
    ///
    /// Taking x kills every live set meeting the offer elsewhere and
    /// multiplies the weight of live sets meeting the offer only in x by q+1.
    pub fn scores(&mut self, state: &GameState, offer: &Offer) -> Result<Vec<f64>> {
        self.tracker.sync(state)?;
        if self.debug_check && !self.tracker.matches_state(state) {
            return Err(Error::Invariant("incremental potential counters diverged".into()));
        }
        let t = &self.tracker;
        let base = 1.0 / (state.q() as f64 + 1.0);
        let hits = t.hits(offer);
        let mut killed = NeumaierSum::new();
        for &i in hits.keys() {
            if t.waiter[i as usize] == 0 {
                killed.add(base.powi(t.free[i as usize] as i32));
            }
        }
        let boost = state.q() as f64 + 1.0;
        Ok(offer
            .elements()
            .iter()
            .map(|&x| {
                let mut kept = NeumaierSum::new();
                kept.add(-killed.value());
                for &i in t.family.containing(x) {
                    let i = i as usize;
                    if t.waiter[i] == 0 && hits[&(i as u32)] == 1 {
                        kept.add(boost * base.powi(t.free[i] as i32));
                    }
                }
                kept.value()
            })
            .collect())
    }
}

impl ClientStrategy for PotentialAvoid {
    fn name(&self) -> String {
        format!("potential[{}]", self.tracker.family.label())
    }

    fn pick(&mut self, state: &GameState, offer: &Offer, _rng: &mut GameRng) -> Result<ElementId> {
        require_offer(offer)?;
        let scores = self.scores(state, offer)?;
        Ok(offer.elements()[argmin(&scores)])
    }

    fn observe(&mut self, state: &GameState, record: &RoundRecord) {
        self.tracker.apply(state, record);
    }

    fn box_clone(&self) -> Box<dyn ClientStrategy> {
        Box::new(self.clone())
    }
}

/// The offered element minimising the post-round live potential.
pub fn potential_avoid_pick(state: &GameState, family: &WinningFamily, offer: &Offer) -> Result<ElementId> {
    require_offer(offer)?;
    let mut s = PotentialAvoid::new(Arc::new(family.clone()));
    let scores = s.scores(state, offer)?;
    Ok(offer.elements()[argmin(&scores)])
}

/// Hits every winning set when Σ (q/(q+1))^{|A|} < 1.
///
/// An unhit set A weighs β^{f(A)} with β = q/(q+1) and f(A) its free
/// elements. Elements are scored by the potential after the round, so a set
/// meeting the offer in j elements counts as β^{f(A)-j} if Client skips it.
#[derive(Debug, Clone)]
pub struct TransversalHit {
    tracker: SetTracker,
}

impl TransversalHit {
    pub fn new(family: Arc<WinningFamily>) -> Self {
        TransversalHit { tracker: SetTracker::new(family) }
    }

    /// Change of the hitting potential for each offered element.
    pub fn scores(&mut self, state: &GameState, offer: &Offer) -> Result<Vec<f64>> {
        self.tracker.sync(state)?;
        let t = &self.tracker;
        let q = state.q() as f64;
        let beta = q / (q + 1.0);
        let hits = t.hits(offer);
        let mut grow = NeumaierSum::new();
        for (&i, &j) in &hits {
            let i = i as usize;
            if t.client[i] == 0 {
                let w = beta.powi(t.free[i] as i32);
                grow.add(beta.powi(t.free[i] as i32 - j as i32) - w);
            }
        }
        Ok(offer
            .elements()
            .iter()
            .map(|&x| {
                let mut s = NeumaierSum::new();
                s.add(grow.value());
                for &i in t.family.containing(x) {
                    let i = i as usize;
                    if t.client[i] == 0 {
                        s.add(-beta.powi(t.free[i] as i32 - hits[&(i as u32)] as i32));
                    }
                }
                s.value()
            })
            .collect())
    }
}

impl ClientStrategy for TransversalHit {
    fn name(&self) -> String {
        format!("transversal[{}]", self.tracker.family.label())
    }

    fn pick(&mut self, state: &GameState, offer: &Offer, _rng: &mut GameRng) -> Result<ElementId> {
        require_offer(offer)?;
        let scores = self.scores(state, offer)?;
        Ok(offer.elements()[argmin(&scores)])
    }

    fn observe(&mut self, state: &GameState, record: &RoundRecord) {
        self.tracker.apply(state, record);
    }

    fn box_clone(&self) -> Box<dyn ClientStrategy> {
        Box::new(self.clone())
    }
}

pub fn transversal_hit_pick(state: &GameState, family: &WinningFamily, offer: &Offer) -> Result<ElementId> {
    require_offer(offer)?;
    let mut s = TransversalHit::new(Arc::new(family.clone()));
    let scores = s.scores(state, offer)?;
    Ok(offer.elements()[argmin(&scores)])
}

/// Uniform pick plus a mark with probability |offer|/(q+1); the marked
/// picks form the set X_C.
#[derive(Debug, Clone)]
pub struct DeanRandom {
    family: Arc<WinningFamily>,
    marked: Vec<ElementId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeanReport {
    /// |X_C|.
    pub marked: usize,
    /// Winning sets contained in X_C.
    pub sets_inside: usize,
    /// ⌊|X|/(q+1)⌋.
    pub target: usize,
}

pub fn dean_random_pick(state: &GameState, offer: &Offer, rng: &mut GameRng) -> Result<(ElementId, bool)> {
    require_offer(offer)?;
    let x = offer.elements()[rng.random_range(0..offer.len())];
    let alpha = (offer.len() as f64 / (state.q() as f64 + 1.0)).min(1.0);
    Ok((x, rng.random_bool(alpha)))
}

impl DeanRandom {
    pub fn new(family: Arc<WinningFamily>) -> Self {
        DeanRandom { family, marked: Vec::new() }
    }

    pub fn marked(&self) -> &[ElementId] {
        &self.marked
    }

    pub fn report(&self, q: usize) -> DeanReport {
        let mut inside = vec![false; self.family.n_elements()];
        for &e in &self.marked {
            inside[e.index()] = true;
        }
        DeanReport {
            marked: self.marked.len(),
            sets_inside: self.family.sets().iter().filter(|s| s.iter().all(|e| inside[e.index()])).count(),
            target: self.family.n_elements() / (q + 1),
        }
    }
}

impl ClientStrategy for DeanRandom {
    fn name(&self) -> String {
        format!("dean[{}]", self.family.label())
    }

    fn pick(&mut self, state: &GameState, offer: &Offer, rng: &mut GameRng) -> Result<ElementId> {
        let (x, mark) = dean_random_pick(state, offer, rng)?;
        if mark {
            self.marked.push(x);
        }
        Ok(x)
    }

    fn diagnostics(&self) -> Vec<String> {
        vec![format!("marked {} elements", self.marked.len())]
    }

    fn box_clone(&self) -> Box<dyn ClientStrategy> {
        Box::new(self.clone())
    }
}

/// Uniformly random picks.
#[derive(Debug, Clone, Default)]
pub struct UniformRandom;

impl ClientStrategy for UniformRandom {
    fn name(&self) -> String {
        "random".into()
    }

    fn pick(&mut self, _state: &GameState, offer: &Offer, rng: &mut GameRng) -> Result<ElementId> {
        require_offer(offer)?;
        Ok(offer.elements()[rng.random_range(0..offer.len())])
    }

    fn box_clone(&self) -> Box<dyn ClientStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Debug, Clone)]
pub enum Component {
    Potential(PotentialAvoid),
    Transversal(TransversalHit),
}

/// Minimises a weighted sum of component potentials.
#[derive(Debug, Clone)]
pub struct Composite {
    parts: Vec<(f64, Component)>,
}

impl Composite {
    pub fn new(parts: Vec<(f64, Component)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Parameter("composite strategy needs at least one part".into()));
        }
        Ok(Composite { parts })
    }
}

impl ClientStrategy for Composite {
    fn name(&self) -> String {
        let names: Vec<String> = self
            .parts
            .iter()
            .map(|(w, c)| match c {
                Component::Potential(p) => format!("{w}*{}", p.name()),
                Component::Transversal(t) => format!("{w}*{}", t.name()),
            })
            .collect();
        format!("composite[{}]", names.join("+"))
    }

    fn pick(&mut self, state: &GameState, offer: &Offer, _rng: &mut GameRng) -> Result<ElementId> {
        require_offer(offer)?;
        let mut total = vec![NeumaierSum::new(); offer.len()];
        for (w, c) in &mut self.parts {
            let s = match c {
                Component::Potential(p) => p.scores(state, offer)?,
                Component::Transversal(t) => t.scores(state, offer)?,
            };
            for (acc, v) in total.iter_mut().zip(s) {
                acc.add(*w * v);
            }
        }
        let total: Vec<f64> = total.iter().map(NeumaierSum::value).collect();
        Ok(offer.elements()[argmin(&total)])
    }

    fn observe(&mut self, state: &GameState, record: &RoundRecord) {
        for (_, c) in &mut self.parts {
            match c {
                Component::Potential(p) => p.observe(state, record),
                Component::Transversal(t) => t.observe(state, record),
            }
        }
    }

    fn box_clone(&self) -> Box<dyn ClientStrategy> {
        Box::new(self.clone())
    }
}

/// Default shortest "long" cycle length for the minor-avoiding Client:
/// max(3, ⌈n^{1/3}/2⌉).
pub fn default_long_cycle(n: usize) -> usize {
    ((n as f64).cbrt() / 2.0).ceil().max(3.0) as usize
}

/// Potential play against cycles of length at least `lmin` together with
/// pairs of shorter cycles sharing a path. If Φ < 1 Client's graph ends with
/// pairwise vertex-disjoint cycles.
pub fn minor_avoiding_client_with(n: usize, lmin: usize) -> Result<PotentialAvoid> {
    if lmin < 3 || lmin > n {
        return Err(Error::Parameter(format!("long-cycle length {lmin} outside 3..={n}")));
    }
    let mut family = enumerate(&FamilySpec::Cycles { n, lmin, lmax: n })?;
    if lmin > 3 {
        family = family.union(&enumerate(&FamilySpec::CyclePairsSharingPath { n, lmax: lmin - 1 })?)?;
    }
    Ok(PotentialAvoid::new(Arc::new(family)))
}

pub fn minor_avoiding_client(n: usize) -> Result<PotentialAvoid> {
    minor_avoiding_client_with(n, default_long_cycle(n))
}

/// Potential play against all cycles of K_n.
pub fn cycle_avoiding_client(n: usize) -> Result<PotentialAvoid> {
    if n < 3 {
        return Err(Error::Parameter(format!("K_{n} has no cycles")));
    }
    Ok(PotentialAvoid::new(Arc::new(enumerate(&FamilySpec::Cycles { n, lmin: 3, lmax: n })?)))
}
