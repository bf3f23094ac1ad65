//! Exact minimax solver for small boards.
//!
//! Every objective here is a monotone property of Client's final element
//! set. Waiter wants it in Waiter-Client games and Client wants it in
//! Client-Waiter games. A state is decided as soon as Client's set already
//! has the property, or Client's set plus all free elements does not.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::board::EdgeBoard;
use crate::error::{Error, Result, Side};
use crate::families::WinningFamily;
use crate::game::{rng_from_seed, ClientStrategy, Convention, ElementId, GameState, Offer, WaiterStrategy};

/// Default cap on the board size.
pub const MAX_ELEMENTS: usize = 12;
/// Default cap on memoized states.
pub const MAX_STATES: usize = 20_000_000;

#[derive(Debug, Clone)]
pub enum Objective {
    /// Client fully claims some set of the family.
    ClaimsSome(Arc<WinningFamily>),
    /// Client's elements meet every set of the family.
    Transversal(Arc<WinningFamily>),
    /// Client's edges form a connected spanning graph of K_n.
    Connected { n: usize },
}

impl Objective {
    pub fn label(&self) -> String {
        match self {
            Objective::ClaimsSome(f) => format!("claims[{}]", f.label()),
            Objective::Transversal(f) => format!("transversal[{}]", f.label()),
            Objective::Connected { n } => format!("connected(K_{n})"),
        }
    }

    /// The side that wants the property under `convention`.
    pub fn wanted_by(convention: Convention) -> Side {
        match convention {
            Convention::WaiterClient => Side::Waiter,
            Convention::ClientWaiter => Side::Client,
        }
    }

    fn board_size(&self) -> usize {
        match self {
            Objective::ClaimsSome(f) | Objective::Transversal(f) => f.n_elements(),
            Objective::Connected { n } => crate::board::edge_count(*n),
        }
    }
}

type Mask = u64;

fn bit(e: ElementId) -> Mask {
    1 << e.0
}

fn mask_of<'a>(ids: impl IntoIterator<Item = &'a ElementId>) -> Mask {
    ids.into_iter().fold(0, |m, &e| m | bit(e))
}

fn elements(mut m: Mask) -> Vec<ElementId> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(ElementId(m.trailing_zeros()));
        m &= m - 1;
    }
    out
}

/// The objective compiled to bit masks.
#[derive(Debug, Clone)]
enum Target {
    Some(Vec<Mask>),
    Transversal(Vec<Mask>),
    Connected { n: usize, ends: Vec<(usize, usize)> },
}

impl Target {
    fn compile(obj: &Objective) -> Result<Self> {
        Ok(match obj {
            Objective::ClaimsSome(f) => Target::Some(f.sets().iter().map(|s| mask_of(s)).collect()),
            Objective::Transversal(f) => Target::Transversal(f.sets().iter().map(|s| mask_of(s)).collect()),
            Objective::Connected { n } => {
                let board = EdgeBoard::new(*n)?;
                Target::Connected { n: *n, ends: board.edges().map(|(_, u, v)| (u, v)).collect() }
            }
        })
    }

    fn holds(&self, client: Mask) -> bool {
        match self {
            Target::Some(sets) => sets.iter().any(|&s| s & client == s),
            Target::Transversal(sets) => sets.iter().all(|&s| s & client != 0),
            Target::Connected { n, ends } => {
                let comp = components(*n, ends, client);
                comp.iter().all(|&c| c == comp[0])
            }
        }
    }

    /// Free elements whose owner can no longer matter; any two of them are
    /// interchangeable for the rest of the game.
    fn irrelevant(&self, client: Mask, waiter: Mask, free: Mask) -> Mask {
        let live = |sets: &[Mask], dead: &dyn Fn(Mask) -> bool| {
            sets.iter().filter(|&&s| !dead(s)).fold(0, |m, &s| m | s)
        };
        match self {
            Target::Some(sets) => free & !live(sets, &|s| s & waiter != 0),
            Target::Transversal(sets) => free & !live(sets, &|s| s & client != 0),
            Target::Connected { n, ends } => {
                let comp = components(*n, ends, client);
                elements(free)
                    .into_iter()
                    .filter(|e| {
                        let (u, v) = ends[e.index()];
                        comp[u] == comp[v]
                    })
                    .fold(0, |m, e| m | bit(e))
            }
        }
    }

    /// Whether the memo key may forget who owns irrelevant elements. For
    /// the set objectives every live set avoids them, so the value depends
    /// only on the relevant elements and the count of free irrelevant ones.
    fn forgets_irrelevant(&self) -> bool {
        !matches!(self, Target::Connected { .. })
    }
}

fn components(n: usize, ends: &[(usize, usize)], client: Mask) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in elements(client) {
        let (u, v) = ends[e.index()];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a.max(b)] = a.min(b);
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub memo: bool,
    /// Symmetry reduction over interchangeable free elements.
    pub reduce: bool,
    pub max_elements: usize,
    pub max_states: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { memo: true, reduce: true, max_elements: MAX_ELEMENTS, max_states: MAX_STATES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    relevant: Mask,
    client: Mask,
    waiter: Mask,
    spare: u8,
}

/// One round of the principal line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineRound {
    pub offer: Offer,
    pub pick: Option<ElementId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub winner: Side,
    pub principal_line: Vec<LineRound>,
    pub states_visited: u64,
}

impl SolveResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

pub struct Solver {
    target: Target,
    n: usize,
    q: usize,
    convention: Convention,
    config: SolverConfig,
    memo: HashMap<Key, bool>,
    visited: u64,
}

impl Solver {
    pub fn new(objective: &Objective, q: usize, convention: Convention, config: SolverConfig) -> Result<Self> {
        let n = objective.board_size();
        if n > config.max_elements.min(64) {
            return Err(Error::Cap(format!("board of {n} elements exceeds the solver cap of {}", config.max_elements)));
        }
        if q == 0 {
            return Err(Error::Parameter("bias q must be at least 1".into()));
        }
        if convention == Convention::ClientWaiter && q > 3 && n > 9 {
            return Err(Error::Cap(format!("Client-Waiter solving with q = {q} > 3 is capped at 9 elements")));
        }
        Ok(Solver { target: Target::compile(objective)?, n, q, convention, config, memo: HashMap::new(), visited: 0 })
    }

    fn all(&self) -> Mask {
        if self.n == 64 {
            Mask::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    fn key(&self, client: Mask, waiter: Mask, free: Mask) -> Key {
        if self.config.reduce && self.target.forgets_irrelevant() {
            let irr = self.target.irrelevant(client, waiter, free);
            // owned elements in no live set are forgotten along with free ones
            let relevant = !self.target.irrelevant(client, waiter, self.all()) & self.all();
            Key { relevant, client: client & relevant, waiter: waiter & relevant, spare: irr.count_ones() as u8 }
        } else {
            Key { relevant: self.all(), client, waiter, spare: 0 }
        }
    }

    /// Offers worth trying, in lexicographic order. With reduction on, the
    /// interchangeable free elements in an offer are always the smallest
    /// ones, which keeps the lexicographically first offer of each class.
    fn offers(&self, client: Mask, waiter: Mask, free: Mask) -> Vec<Vec<ElementId>> {
        let irr = if self.config.reduce { self.target.irrelevant(client, waiter, free) } else { 0 };
        let rel = elements(free & !irr);
        let irr = elements(irr);
        let nfree = rel.len() + irr.len();
        let sizes: Vec<usize> = match self.convention {
            Convention::WaiterClient => vec![(self.q + 1).min(nfree)],
            Convention::ClientWaiter => (1..=(self.q + 1).min(nfree)).collect(),
        };
        let mut out = Vec::new();
        for size in sizes {
            for j in 0..=size.min(irr.len()) {
                if size - j > rel.len() {
                    continue;
                }
                crate::families::for_each_combination(rel.len(), size - j, |c| {
                    let mut o: Vec<ElementId> = c.iter().map(|&i| rel[i]).chain(irr[..j].iter().copied()).collect();
                    o.sort_unstable();
                    out.push(o);
                });
            }
        }
        out.sort();
        out
    }

    /// Picks worth trying for an offer; interchangeable elements collapse to one.
    fn picks(&self, client: Mask, waiter: Mask, free: Mask, offer: &[ElementId]) -> Vec<ElementId> {
        let irr = if self.config.reduce { self.target.irrelevant(client, waiter, free) } else { 0 };
        let mut seen_irr = false;
        offer
            .iter()
            .copied()
            .filter(|&e| {
                if irr & bit(e) == 0 {
                    return true;
                }
                !std::mem::replace(&mut seen_irr, true)
            })
            .collect()
    }

    /// Whether the property ends up holding under optimal play.
    fn value(&mut self, client: Mask, waiter: Mask) -> Result<bool> {
        let free = self.all() & !(client | waiter);
        if self.target.holds(client) {
            return Ok(true);
        }
        if !self.target.holds(client | free) {
            return Ok(false);
        }
        if self.convention == Convention::WaiterClient && (free.count_ones() as usize) <= self.q {
            return Ok(false);
        }
        let key = self.key(client, waiter, free);
        if self.config.memo {
            if let Some(&v) = self.memo.get(&key) {
                return Ok(v);
            }
        }
        self.visited += 1;
        if self.memo.len() >= self.config.max_states {
            return Err(Error::Cap(format!("solver exceeded {} stored states", self.config.max_states)));
        }
        let v = match self.convention {
            // Waiter looks for an offer where every pick keeps the property
            Convention::WaiterClient => self.exists_offer(client, waiter, free, true)?,
            // Waiter looks for an offer where every pick loses it
            Convention::ClientWaiter => !self.exists_offer(client, waiter, free, false)?,
        };
        if self.config.memo {
            self.memo.insert(key, v);
        }
        Ok(v)
    }

    fn exists_offer(&mut self, client: Mask, waiter: Mask, free: Mask, want: bool) -> Result<bool> {
        for offer in self.offers(client, waiter, free) {
            let om = mask_of(&offer);
            let mut all = true;
            for p in self.picks(client, waiter, free, &offer) {
                if self.value(client | bit(p), waiter | (om & !bit(p)))? != want {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The lexicographically first optimal round from this position:
    /// Waiter's first offer that keeps the solved outcome, answered by
    /// Client's first pick that is best for Client.
    fn best_move(&mut self, client: Mask, waiter: Mask) -> Result<Option<LineRound>> {
        let free = self.all() & !(client | waiter);
        if free == 0 {
            return Ok(None);
        }
        let root = self.value(client, waiter)?;
        let client_wants = self.convention == Convention::ClientWaiter;
        for offer in self.offers(client, waiter, free) {
            if self.convention == Convention::WaiterClient && offer.len() <= self.q {
                return Ok(Some(LineRound { offer: Offer::new(offer)?, pick: None }));
            }
            let om = mask_of(&offer);
            let mut reply = None;
            for &p in &offer {
                let v = self.value(client | bit(p), waiter | (om & !bit(p)))?;
                if reply.is_none() {
                    reply = Some((p, v));
                }
                if v == client_wants {
                    reply = Some((p, v));
                    break;
                }
            }
            let (pick, v) = reply.expect("offers are non-empty");
            if v == root {
                return Ok(Some(LineRound { offer: Offer::new(offer)?, pick: Some(pick) }));
            }
        }
        Err(Error::Invariant("no offer realizes the solved value".into()))
    }

    pub fn solve(&mut self) -> Result<SolveResult> {
        let holds = self.value(0, 0)?;
        let wanted = Objective::wanted_by(self.convention);
        let winner = if holds { wanted } else { other(wanted) };
        let mut state = GameState::new(self.n, self.q, self.convention)?;
        let mut line = Vec::new();
        let (mut client, mut waiter) = (0, 0);
        while let Some(round) = self.best_move(client, waiter)? {
            let rec = state.resolve_round(round.offer.clone(), round.pick)?.clone();
            client |= mask_of(&rec.client);
            waiter |= mask_of(&rec.waiter);
            line.push(round);
        }
        if self.target.holds(client) != holds {
            return Err(Error::Invariant("principal line ends against the solved value".into()));
        }
        Ok(SolveResult { winner, principal_line: line, states_visited: self.visited })
    }

    pub fn states_visited(&self) -> u64 {
        self.visited
    }
}

fn other(s: Side) -> Side {
    match s {
        Side::Waiter => Side::Client,
        Side::Client => Side::Waiter,
    }
}

pub fn solve(objective: &Objective, q: usize, convention: Convention) -> Result<SolveResult> {
    Solver::new(objective, q, convention, SolverConfig::default())?.solve()
}

pub fn solve_with(objective: &Objective, q: usize, convention: Convention, config: SolverConfig) -> Result<SolveResult> {
    Solver::new(objective, q, convention, config)?.solve()
}

#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    /// WC: the least q at which Client wins. CW: the least q at which Waiter
    /// wins. `None` if the winner never flips up to `q_max`.
    pub bias: Option<usize>,
    pub outcomes: Vec<(usize, Side)>,
}

/// Solves q = 1..=q_max in parallel and checks that the winner flips at most once.
pub fn threshold_bias(objective: &Objective, convention: Convention, q_max: usize) -> Result<Threshold> {
    let outcomes: Vec<(usize, Side)> = (1..=q_max)
        .into_par_iter()
        .map(|q| solve(objective, q, convention).map(|r| (q, r.winner)))
        .collect::<Result<_>>()?;
    let flips_to = match convention {
        Convention::WaiterClient => Side::Client,
        Convention::ClientWaiter => Side::Waiter,
    };
    let bias = outcomes.iter().find(|&&(_, w)| w == flips_to).map(|&(q, _)| q);
    if let Some(b) = bias {
        if let Some(&(q, _)) = outcomes.iter().find(|&&(q, w)| q > b && w != flips_to) {
            return Err(Error::Invariant(format!(
                "bias monotonicity fails for {}: {flips_to} wins at q = {b} but not at q = {q}",
                objective.label()
            )));
        }
    }
    Ok(Threshold { bias, outcomes })
}

/// A strategy to certify.
pub enum Player<'a> {
    Waiter(&'a dyn WaiterStrategy),
    Client(&'a dyn ClientStrategy),
}

/// Whether `player` wins against every move of its opponent (which includes
/// every optimal one). Client strategies are queried with a fresh clone per
/// position and are assumed to depend on the position only, which lets
/// positions be memoized. Waiter strategies are replayed along each branch.
pub fn certify_strategy(player: Player<'_>, objective: &Objective, q: usize, convention: Convention) -> Result<bool> {
    let n = objective.board_size();
    if n > MAX_ELEMENTS.min(64) {
        return Err(Error::Cap(format!("board of {n} elements exceeds the solver cap of {MAX_ELEMENTS}")));
    }
    let target = Target::compile(objective)?;
    let state = GameState::new(n, q, convention)?;
    let wanted = Objective::wanted_by(convention);
    match player {
        Player::Client(c) => {
            let want = wanted == Side::Client;
            let mut memo = HashMap::new();
            certify_client(c, &target, &state, want, &mut memo)
        }
        Player::Waiter(w) => {
            let want = wanted == Side::Waiter;
            certify_waiter(w.box_clone(), &target, state, want)
        }
    }
}

fn masks(state: &GameState) -> (Mask, Mask) {
    (mask_of(&state.client_elements().collect::<Vec<_>>()), mask_of(&state.waiter_elements().collect::<Vec<_>>()))
}

/// Some(outcome) once the property is settled whatever happens next.
fn settled(target: &Target, state: &GameState) -> Option<bool> {
    let (client, waiter) = masks(state);
    let free = (!(client | waiter)) & if state.board_size() == 64 { Mask::MAX } else { (1 << state.board_size()) - 1 };
    if target.holds(client) {
        Some(true)
    } else if !target.holds(client | free) || state.is_terminal() {
        Some(false)
    } else {
        None
    }
}

fn certify_client(
    strategy: &dyn ClientStrategy,
    target: &Target,
    state: &GameState,
    want: bool,
    memo: &mut HashMap<(Mask, Mask), bool>,
) -> Result<bool> {
    if let Some(v) = settled(target, state) {
        return Ok(v == want);
    }
    let key = masks(state);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let free: Vec<ElementId> = state.free_elements().collect();
    let sizes: Vec<usize> = match state.convention() {
        Convention::WaiterClient => vec![state.required_wc_offer_size()],
        Convention::ClientWaiter => (1..=state.max_offer_size()).collect(),
    };
    let mut rng = rng_from_seed(0, 2);
    let mut ok = true;
    'sizes: for size in sizes {
        let mut offers = Vec::new();
        crate::families::for_each_combination(free.len(), size, |c| offers.push(c.iter().map(|&i| free[i]).collect()));
        for ids in offers {
            let offer = Offer::new(ids)?;
            let pick = if state.offer_needs_pick(&offer) {
                Some(strategy.box_clone().pick(state, &offer, &mut rng)?)
            } else {
                None
            };
            let mut next = state.clone();
            next.resolve_round(offer, pick)?;
            if !certify_client(strategy, target, &next, want, memo)? {
                ok = false;
                break 'sizes;
            }
        }
    }
    memo.insert(key, ok);
    Ok(ok)
}

fn certify_waiter(mut strategy: Box<dyn WaiterStrategy>, target: &Target, state: GameState, want: bool) -> Result<bool> {
    if let Some(v) = settled(target, &state) {
        return Ok(v == want);
    }
    let mut rng = rng_from_seed(0, 1);
    let offer = strategy.offer(&state, &mut rng)?;
    state.validate_offer(&offer)?;
    let picks: Vec<Option<ElementId>> = if state.offer_needs_pick(&offer) {
        offer.elements().iter().map(|&e| Some(e)).collect()
    } else {
        vec![None]
    };
    for pick in picks {
        let mut next = state.clone();
        let record = next.resolve_round(offer.clone(), pick)?.clone();
        let mut branch = strategy.box_clone();
        branch.observe(&next, &record);
        if !certify_waiter(branch, target, next, want)? {
            return Ok(false);
        }
    }
    Ok(true)
}
