//! Forcing a connected Client graph (Waiter-Client) and a spanning forest
//! (Client-Waiter).
//!
//! Star model: Client's graph is always one tree C (grown from vertex 0)
//! plus isolated vertices. The "age" of an isolated vertex v is the number of
//! free edges between v and C. Each round Waiter offers every free C-v edge
//! for a set S of isolated vertices whose ages sum to exactly m = q+1.
//! Whichever edge Client takes, its vertex joins C; the other vertices of S
//! lose their edges to C and are left with age 1 (the edge to the newcomer),
//! and every untouched vertex gains one. So the next age multiset does not
//! depend on Client's choice, and a plan is a fixed sequence of age
//! multisets, found by depth-first search ordered by a collision heuristic.
//!
//! For n = 2m this spends all m(2m-1) edges in exactly n-1 rounds, each
//! merging two components. Smaller q is handled by imagining the game at the
//! tight bias and offering the q+1 smallest edges of each imagined offer.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::{Convention, ElementId, GameRng, GameState, Offer, WaiterStrategy};

use super::{check_board, smallest_free_offer, Tracker};

/// Age multiset as sorted (age, count) pairs.
type Ages = Vec<(u32, u32)>;

/// A plan for the star model on K_{2m}: the age multiset offered each round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgePlan {
    pub m: usize,
    pub rounds: Vec<Ages>,
    /// Search nodes visited while building the plan.
    pub nodes: u64,
}

const NODE_BUDGET: u64 = 20_000_000;

fn sub_multisets(state: &Ages, m: u32) -> Vec<Ages> {
    fn rec(state: &Ages, i: usize, rem: u32, acc: &mut Ages, out: &mut Vec<Ages>) {
        if rem == 0 {
            out.push(acc.clone());
            return;
        }
        if i == state.len() {
            return;
        }
        let (age, count) = state[i];
        for t in (0..=count.min(rem / age)).rev() {
            if t > 0 {
                acc.push((age, t));
            }
            rec(state, i + 1, rem - age * t, acc, out);
            if t > 0 {
                acc.pop();
            }
        }
    }
    // larger ages first
    let desc: Ages = state.iter().rev().copied().collect();
    let mut out = Vec::new();
    rec(&desc, 0, m, &mut Vec::new(), &mut out);
    for s in &mut out {
        s.sort_unstable();
    }
    out
}

fn step(state: &Ages, offer: &Ages) -> Ages {
    let mut next: HashMap<u32, u32> = HashMap::new();
    let taken: HashMap<u32, u32> = offer.iter().copied().collect();
    for &(age, count) in state {
        let left = count - taken.get(&age).copied().unwrap_or(0);
        if left > 0 {
            *next.entry(age + 1).or_insert(0) += left;
        }
    }
    let s: u32 = offer.iter().map(|&(_, c)| c).sum();
    if s > 1 {
        *next.entry(1).or_insert(0) += s - 1;
    }
    let mut v: Ages = next.into_iter().collect();
    v.sort_unstable();
    v
}

fn collisions(state: &Ages) -> u64 {
    state.iter().map(|&(_, c)| c as u64 * (c as u64 - 1) / 2).sum()
}

fn search(state: Ages, m: u32, failed: &mut HashSet<Ages>, nodes: &mut u64, out: &mut Vec<Ages>) -> Result<bool> {
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(Error::Cap(format!("connectivity plan search for m = {m} exceeded {NODE_BUDGET} nodes")));
    }
    if state.is_empty() {
        return Ok(true);
    }
    if failed.contains(&state) {
        return Ok(false);
    }
    let mut options: Vec<(u64, u32, Ages, Ages)> = sub_multisets(&state, m)
        .into_iter()
        .map(|s| {
            let next = step(&state, &s);
            let max_age = s.iter().map(|&(a, _)| a).max().unwrap_or(0);
            (collisions(&next), u32::MAX - max_age, s, next)
        })
        .collect();
    // stable: equal keys keep the generation order (old vertices, large counts first)
    options.sort_by_key(|o| (o.0, o.1));
    for (_, _, s, next) in options {
        out.push(s);
        if search(next, m, failed, nodes, out)? {
            return Ok(true);
        }
        out.pop();
    }
    failed.insert(state);
    Ok(false)
}

/// The offer the search tries first: least collisions in the next state,
/// ties broken towards old vertices and large counts, found by a DP over
/// ages (oldest first) with the running offer size as extra state.
fn first_option(state: &Ages, m: u32) -> Option<Ages> {
    let desc: Ages = state.iter().rev().copied().collect();
    let (m, k) = (m as usize, desc.len());
    let pairs = |c: u32| c as u64 * (c as u64).saturating_sub(1) / 2;
    let idx = |i: usize, rem: usize, s: usize| (i * (m + 1) + rem) * (m + 1) + s;
    // cost[i][rem][s]: least collisions from ages i.. given `rem` still to
    // offer and `s` vertices offered so far
    let mut cost = vec![u64::MAX; (k + 1) * (m + 1) * (m + 1)];
    for s in 1..=m {
        cost[idx(k, 0, s)] = pairs(s as u32 - 1);
    }
    for i in (0..k).rev() {
        let (age, count) = desc[i];
        for rem in 0..=m {
            for s in 0..=m {
                let mut best = u64::MAX;
                for t in 0..=count.min(rem as u32 / age) {
                    if s + t as usize > m {
                        break;
                    }
                    let rest = cost[idx(i + 1, rem - (age * t) as usize, s + t as usize)];
                    if rest != u64::MAX {
                        best = best.min(rest + pairs(count - t));
                    }
                }
                cost[idx(i, rem, s)] = best;
            }
        }
    }
    if cost[idx(0, m, 0)] == u64::MAX {
        return None;
    }
    let (mut rem, mut s) = (m, 0);
    let mut offer = Ages::new();
    for (i, &(age, count)) in desc.iter().enumerate() {
        let target = cost[idx(i, rem, s)];
        let t = (0..=count.min(rem as u32 / age))
            .rev()
            .find(|&t| {
                let rest = cost[idx(i + 1, rem - (age * t) as usize, s + t as usize)];
                s + t as usize <= m && rest != u64::MAX && rest + pairs(count - t) == target
            })
            .expect("DP is consistent");
        if t > 0 {
            offer.push((age, t));
        }
        rem -= (age * t) as usize;
        s += t as usize;
    }
    offer.sort_unstable();
    Some(offer)
}

fn greedy_plan(m: u32) -> Option<Vec<Ages>> {
    let mut state = vec![(1u32, 2 * m - 1)];
    let mut rounds = Vec::new();
    while !state.is_empty() {
        let offer = first_option(&state, m)?;
        state = step(&state, &offer);
        rounds.push(offer);
    }
    Some(rounds)
}

fn compute_plan(m: usize) -> Result<AgePlan> {
    if m < 2 {
        return Err(Error::Parameter("star plan needs m >= 2".into()));
    }
    if let Some(rounds) = greedy_plan(m as u32) {
        return Ok(AgePlan { m, nodes: rounds.len() as u64, rounds });
    }
    let mut rounds = Vec::new();
    let mut nodes = 0;
    let start = vec![(1u32, 2 * m as u32 - 1)];
    if !search(start, m as u32, &mut HashSet::new(), &mut nodes, &mut rounds)? {
        return Err(Error::StrategyFailure(format!("no star plan exists for m = {m}")));
    }
    Ok(AgePlan { m, rounds, nodes })
}

/// The (cached) star plan for K_{2m}.
pub fn connectivity_plan(m: usize) -> Result<Arc<AgePlan>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<AgePlan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("plan cache").get(&m) {
        return Ok(p.clone());
    }
    let plan = Arc::new(compute_plan(m)?);
    cache.lock().expect("plan cache").insert(m, plan.clone());
    Ok(plan)
}

/// Vertex-level star game on K_{2m} following an [`AgePlan`].
#[derive(Debug, Clone)]
struct StarGame {
    plan: Arc<AgePlan>,
    in_c: Vec<bool>,
    /// For vertices outside C: the C-vertices joined to it by a free edge.
    to_c: Vec<Vec<usize>>,
    round: usize,
}

impl StarGame {
    fn new(plan: Arc<AgePlan>) -> Self {
        let n = 2 * plan.m;
        let mut in_c = vec![false; n];
        in_c[0] = true;
        let mut to_c = vec![vec![0]; n];
        to_c[0].clear();
        StarGame { plan, in_c, to_c, round: 0 }
    }

    fn finished(&self) -> bool {
        self.round == self.plan.rounds.len()
    }

    /// The vertices offered next and, per vertex, its edges to C.
    fn next(&self) -> Result<Vec<(usize, Vec<usize>)>> {
        let mut picked = Vec::new();
        for &(age, count) in &self.plan.rounds[self.round] {
            let vs: Vec<usize> = (0..self.in_c.len())
                .filter(|&v| !self.in_c[v] && self.to_c[v].len() == age as usize)
                .take(count as usize)
                .collect();
            if vs.len() != count as usize {
                return Err(Error::Invariant(format!("star game lost track of ages in round {}", self.round + 1)));
            }
            picked.extend(vs.into_iter().map(|v| (v, self.to_c[v].clone())));
        }
        picked.sort_unstable();
        Ok(picked)
    }

    fn apply(&mut self, offered: &[usize], chosen: usize) {
        for &w in offered {
            self.to_c[w].clear();
        }
        self.in_c[chosen] = true;
        for v in 0..self.in_c.len() {
            if !self.in_c[v] {
                self.to_c[v].push(chosen);
            }
        }
        self.round += 1;
    }
}

/// Imagined offers of the tight-bias connectivity strategy on K_n:
/// the star game on the first 2m vertices, then (n odd) the edges of the
/// last vertex in two blocks of m.
#[derive(Debug, Clone)]
struct Imagined {
    n: usize,
    star: StarGame,
    extra_round: usize,
}

impl Imagined {
    fn new(n: usize) -> Result<Self> {
        let m = n / 2;
        Ok(Imagined { n, star: StarGame::new(connectivity_plan(m)?), extra_round: 0 })
    }

    fn m(&self) -> usize {
        self.star.plan.m
    }

    fn finished(&self) -> bool {
        self.star.finished() && (self.n % 2 == 0 || self.extra_round == 2)
    }

    /// Next imagined offer as (u, v) pairs with u the vertex outside C.
    fn next(&self) -> Result<Vec<(usize, usize)>> {
        if !self.star.finished() {
            return Ok(self
                .star
                .next()?
                .into_iter()
                .flat_map(|(v, cs)| cs.into_iter().map(move |c| (v, c)))
                .collect());
        }
        let x = self.n - 1;
        let m = self.m();
        Ok((0..x).skip(self.extra_round * m).take(m).map(|v| (x, v)).collect())
    }

    /// Records that Client took (u, c) from the imagined offer.
    fn apply(&mut self, offer: &[(usize, usize)], pick: (usize, usize)) {
        if !self.star.finished() {
            let mut vs: Vec<usize> = offer.iter().map(|&(v, _)| v).collect();
            vs.dedup();
            self.star.apply(&vs, pick.0);
        } else {
            self.extra_round += 1;
        }
    }
}

fn oriented(pair: (usize, usize), offer: &[(usize, usize)]) -> Option<(usize, usize)> {
    offer.iter().copied().find(|&(a, b)| (a, b) == pair || (b, a) == pair)
}

/// Waiter-Client strategy forcing Client's graph to be connected, for
/// 1 <= q <= ⌊n/2⌋ - 1.
#[derive(Debug, Clone)]
pub struct ConnectivityWaiter {
    board: EdgeBoard,
    q: usize,
    imagined: Imagined,
    pending: Option<Vec<(usize, usize)>>,
    tracker: Tracker,
}

impl ConnectivityWaiter {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Parameter(format!("Waiter cannot force connectivity on K_{n} for any q >= 1")));
        }
        let tight = n / 2 - 1;
        if q == 0 || q > tight {
            return Err(Error::Parameter(format!(
                "connectivity is forceable only for 1 <= q <= ⌊n/2⌋-1 = {tight}, got q = {q}"
            )));
        }
        Ok(ConnectivityWaiter {
            board: EdgeBoard::new(n)?,
            q,
            imagined: Imagined::new(n)?,
            pending: None,
            tracker: Tracker::default(),
        })
    }

    fn catch_up(&mut self, state: &GameState) -> Result<()> {
        for record in self.tracker.new_records(state)? {
            let Some(offer) = self.pending.take() else { continue };
            let &[pick] = record.client.as_slice() else {
                return Err(Error::Invariant("connectivity round without a Client pick".into()));
            };
            let pair = oriented(self.board.ends(pick), &offer)
                .ok_or_else(|| Error::Invariant("Client pick is outside the imagined offer".into()))?;
            self.imagined.apply(&offer, pair);
        }
        Ok(())
    }
}

impl WaiterStrategy for ConnectivityWaiter {
    fn name(&self) -> String {
        "connectivity".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        check_board(&self.board, state)?;
        if state.q() != self.q || state.convention() != Convention::WaiterClient {
            return Err(Error::Parameter("connectivity strategy was built for another game".into()));
        }
        self.catch_up(state)?;
        if self.imagined.finished() {
            return smallest_free_offer(state);
        }
        let imagined = self.imagined.next()?;
        let mut ids: Vec<ElementId> = imagined.iter().map(|&(a, b)| self.board.id(a, b)).collect();
        ids.sort_unstable();
        ids.truncate(self.q + 1);
        let offer = Offer::new(ids)?;
        self.pending = Some(imagined);
        Ok(offer)
    }

    fn diagnostics(&self) -> Vec<String> {
        vec![format!("star plan for m = {} ({} search nodes)", self.imagined.m(), self.imagined.star.plan.nodes)]
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

/// Client-Waiter strategy keeping Client's graph a forest, for
/// q >= ⌈n/2⌉ - 1. Plays the star game at q' = ⌈n/2⌉ - 1; for odd n it
/// runs on K_{n+1} with an imaginary vertex n and drops imaginary edges.
#[derive(Debug, Clone)]
pub struct TreeForcingWaiter {
    board: EdgeBoard,
    star: StarGame,
    pending: Option<Vec<(usize, Vec<usize>)>>,
    self_resolved: usize,
    tracker: Tracker,
}

impl TreeForcingWaiter {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter("tree forcing needs n >= 3".into()));
        }
        let need = n.div_ceil(2) - 1;
        if q < need.max(1) {
            return Err(Error::Parameter(format!(
                "tree forcing needs q >= ⌈n/2⌉-1 = {need}, got q = {q}"
            )));
        }
        let star = StarGame::new(connectivity_plan(n.div_ceil(2))?);
        Ok(TreeForcingWaiter { board: EdgeBoard::new(n)?, star, pending: None, self_resolved: 0, tracker: Tracker::default() })
    }

    fn real(&self, v: usize, c: usize) -> bool {
        v < self.board.n() && c < self.board.n()
    }

    fn catch_up(&mut self, state: &GameState) -> Result<()> {
        for record in self.tracker.new_records(state)? {
            let Some(offer) = self.pending.take() else { continue };
            let &[pick] = record.client.as_slice() else {
                return Err(Error::Invariant("tree round without a Client pick".into()));
            };
            let (a, b) = self.board.ends(pick);
            let chosen = offer
                .iter()
                .find(|(v, cs)| (*v == a && cs.contains(&b)) || (*v == b && cs.contains(&a)))
                .map(|(v, _)| *v)
                .ok_or_else(|| Error::Invariant("Client pick is outside the star offer".into()))?;
            let vs: Vec<usize> = offer.iter().map(|(v, _)| *v).collect();
            self.star.apply(&vs, chosen);
        }
        Ok(())
    }

    /// Rounds the imaginary vertex settled without a real move.
    pub fn self_resolved_rounds(&self) -> usize {
        self.self_resolved
    }
}

impl WaiterStrategy for TreeForcingWaiter {
    fn name(&self) -> String {
        "tree".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut GameRng) -> Result<Offer> {
        check_board(&self.board, state)?;
        if state.convention() != Convention::ClientWaiter {
            return Err(Error::Parameter("tree forcing is a Client-Waiter strategy".into()));
        }
        self.catch_up(state)?;
        while !self.star.finished() {
            let next = self.star.next()?;
            let real: Vec<ElementId> = next
                .iter()
                .flat_map(|(v, cs)| cs.iter().filter(|&&c| self.real(*v, c)).map(|&c| self.board.id(*v, c)))
                .collect();
            if real.is_empty() {
                // only edges at the imaginary vertex: imagine Client takes the first
                let vs: Vec<usize> = next.iter().map(|(v, _)| *v).collect();
                self.star.apply(&vs, vs[0]);
                self.self_resolved += 1;
                continue;
            }
            // keep only the real part of each bundle
            let kept: Vec<(usize, Vec<usize>)> = next
                .into_iter()
                .map(|(v, cs)| {
                    let cs = cs.into_iter().filter(|&c| self.real(v, c)).collect();
                    (v, cs)
                })
                .collect();
            self.pending = Some(kept);
            return Offer::new(real);
        }
        smallest_free_offer(state)
    }

    fn diagnostics(&self) -> Vec<String> {
        vec![format!("{} imaginary rounds resolved without play", self.self_resolved)]
    }

    fn box_clone(&self) -> Box<dyn WaiterStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_matches_hand_computation() {
        // ages {1:3}, offer two age-1 vertices: one joins C, one restarts at 1, one ages to 2
        assert_eq!(step(&vec![(1, 3)], &vec![(1, 2)]), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn plans_exist_for_small_m() {
        for m in (2..=16).chain([40, 75]) {
            let p = connectivity_plan(m).unwrap();
            assert_eq!(p.rounds.len(), 2 * m - 1);
            for s in &p.rounds {
                assert_eq!(s.iter().map(|&(a, c)| (a * c) as usize).sum::<usize>(), m);
            }
        }
    }

    #[test]
    fn dp_choice_matches_first_search_branch() {
        for m in 2..=14u32 {
            let mut rounds = Vec::new();
            let mut nodes = 0;
            assert!(search(vec![(1, 2 * m - 1)], m, &mut HashSet::new(), &mut nodes, &mut rounds).unwrap());
            assert_eq!(Some(rounds), greedy_plan(m), "m = {m}");
        }
    }

    #[test]
    fn parameters_are_validated() {
        assert!(ConnectivityWaiter::new(5, 2).is_err());
        assert!(ConnectivityWaiter::new(3, 1).is_err());
        assert!(ConnectivityWaiter::new(6, 2).is_ok());
        assert!(TreeForcingWaiter::new(7, 2).is_err());
        assert!(TreeForcingWaiter::new(7, 3).is_ok());
    }
}
