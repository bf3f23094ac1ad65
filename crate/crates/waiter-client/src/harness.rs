//! Experiment harness: strategy and predicate specs, tournaments over a
//! (n, q) grid, empirical threshold scans and random graph baselines.
//!
//! Trial `i` of a cell always uses seed `seed + i`, so serial and parallel
//! runs produce the same rows.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::{edge_count, EdgeBoard};
use crate::client::{cycle_avoiding_client, minor_avoiding_client, DeanRandom, PotentialAvoid, TransversalHit, UniformRandom};
use crate::error::{Error, Result};
use crate::families::{enumerate, is_transversal, FamilySpec, WinningFamily};
use crate::game::{play_match, rng_from_seed, ClientStrategy, Convention, ElementId, GameState, MatchOutcome, Owner, WaiterStrategy};
use crate::graph::{dsatur_coloring, has_kt_minor, is_k_colorable, is_planar, GraphView};
use crate::waiter::{
    ColorabilityWaiter, ConnectivityWaiter, MinorForcingWaiter, MinorParams, OddCycleWaiter, PathForcingWaiter,
    PressureWaiter, TransversalHeuristicWaiter, TreeForcingWaiter, UniformRandomWaiter,
};

/// Splits `name(args)` into its parts; a bare `name` has empty args.
fn split_call(s: &str) -> Result<(&str, &str)> {
    let s = s.trim();
    match s.find('(') {
        None => Ok((s, "")),
        Some(i) if s.ends_with(')') => Ok((s[..i].trim(), &s[i + 1..s.len() - 1])),
        Some(_) => Err(Error::Parse(format!("`{s}` lacks a closing parenthesis"))),
    }
}

/// Parses `k=v,k=v` arguments, filling in defaults.
fn keyed(args: &str, allowed: &[(&str, f64)]) -> Result<Vec<f64>> {
    let mut vals: Vec<f64> = allowed.iter().map(|&(_, d)| d).collect();
    for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
        let i = allowed
            .iter()
            .position(|&(name, _)| name == k.trim())
            .ok_or_else(|| Error::Parse(format!("unknown argument `{k}`")))?;
        vals[i] = v.trim().parse().map_err(|_| Error::Parse(format!("`{v}` is not a number")))?;
    }
    Ok(vals)
}

fn no_args(name: &str, args: &str) -> Result<()> {
    if args.trim().is_empty() {
        Ok(())
    } else {
        Err(Error::Parse(format!("`{name}` takes no arguments")))
    }
}

fn family(spec: &FamilySpec) -> Result<Arc<WinningFamily>> {
    enumerate(spec).map(Arc::new)
}

#[derive(Debug, Clone, PartialEq)]
pub enum WaiterSpec {
    Random,
    Path,
    Connectivity,
    Tree,
    Minor { eps: f64, t: usize },
    Color { k: usize, eps: f64, alpha: f64 },
    OddCycle { delta: f64 },
    Pressure(FamilySpec),
    TransversalHeuristic(FamilySpec),
}

impl WaiterSpec {
    pub fn build(&self, n: usize, q: usize) -> Result<Box<dyn WaiterStrategy>> {
        Ok(match self {
            WaiterSpec::Random => Box::new(UniformRandomWaiter),
            WaiterSpec::Path => Box::new(PathForcingWaiter::new(n)?),
            WaiterSpec::Connectivity => Box::new(ConnectivityWaiter::new(n, q)?),
            WaiterSpec::Tree => Box::new(TreeForcingWaiter::new(n, q)?),
            &WaiterSpec::Minor { eps, t } => Box::new(MinorForcingWaiter::new(MinorParams { n, q, eps, t })?),
            &WaiterSpec::Color { k, eps, alpha } => Box::new(ColorabilityWaiter::new(n, k, q, eps, alpha)?),
            &WaiterSpec::OddCycle { delta } => Box::new(OddCycleWaiter::new(n, q, delta)?),
            WaiterSpec::Pressure(f) => Box::new(PressureWaiter::new(family(f)?)),
            WaiterSpec::TransversalHeuristic(f) => Box::new(TransversalHeuristicWaiter::new(family(f)?)),
        })
    }
}

impl FromStr for WaiterSpec {
    type Err = Error;

    /// `random`, `path`, `connectivity`, `tree`, `minor(eps=..,t=..)`,
    /// `color(k=..,eps=..,alpha=..)`, `odd-cycle(delta=..)`,
    /// `pressure(FAMILY)`, `transversal-heuristic(FAMILY)`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_call(s)?;
        Ok(match name {
            "random" | "path" | "connectivity" | "tree" => {
                no_args(name, args)?;
                match name {
                    "random" => WaiterSpec::Random,
                    "path" => WaiterSpec::Path,
                    "connectivity" => WaiterSpec::Connectivity,
                    _ => WaiterSpec::Tree,
                }
            }
            "minor" => {
                let v = keyed(args, &[("eps", 0.9), ("t", 4.0)])?;
                WaiterSpec::Minor { eps: v[0], t: v[1] as usize }
            }
            "color" => {
                let v = keyed(args, &[("k", 20.0), ("eps", 0.1), ("alpha", 0.0)])?;
                WaiterSpec::Color { k: v[0] as usize, eps: v[1], alpha: v[2] }
            }
            "odd-cycle" => WaiterSpec::OddCycle { delta: keyed(args, &[("delta", 0.0)])?[0] },
            "pressure" => WaiterSpec::Pressure(args.parse()?),
            "transversal-heuristic" => WaiterSpec::TransversalHeuristic(args.parse()?),
            _ => return Err(Error::Parse(format!("unknown Waiter strategy `{s}`"))),
        })
    }
}

impl fmt::Display for WaiterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaiterSpec::Random => f.write_str("random"),
            WaiterSpec::Path => f.write_str("path"),
            WaiterSpec::Connectivity => f.write_str("connectivity"),
            WaiterSpec::Tree => f.write_str("tree"),
            WaiterSpec::Minor { eps, t } => write!(f, "minor(eps={eps},t={t})"),
            WaiterSpec::Color { k, eps, alpha } => write!(f, "color(k={k},eps={eps},alpha={alpha})"),
            WaiterSpec::OddCycle { delta } => write!(f, "odd-cycle(delta={delta})"),
            WaiterSpec::Pressure(fam) => write!(f, "pressure({fam})"),
            WaiterSpec::TransversalHeuristic(fam) => write!(f, "transversal-heuristic({fam})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClientSpec {
    Random,
    Potential(FamilySpec),
    Transversal(FamilySpec),
    Dean(FamilySpec),
    MinorAvoid,
    CycleAvoid,
}

impl ClientSpec {
    pub fn build(&self, n: usize) -> Result<Box<dyn ClientStrategy>> {
        Ok(match self {
            ClientSpec::Random => Box::new(UniformRandom),
            ClientSpec::Potential(f) => Box::new(PotentialAvoid::new(family(f)?)),
            ClientSpec::Transversal(f) => Box::new(TransversalHit::new(family(f)?)),
            ClientSpec::Dean(f) => Box::new(DeanRandom::new(family(f)?)),
            ClientSpec::MinorAvoid => Box::new(minor_avoiding_client(n)?),
            ClientSpec::CycleAvoid => Box::new(cycle_avoiding_client(n)?),
        })
    }
}

impl FromStr for ClientSpec {
    type Err = Error;

    /// `random`, `potential(FAMILY)`, `transversal(FAMILY)`, `dean(FAMILY)`,
    /// `minor-avoid`, `cycle-avoid`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_call(s)?;
        Ok(match name {
            "random" => {
                no_args(name, args)?;
                ClientSpec::Random
            }
            "minor-avoid" => {
                no_args(name, args)?;
                ClientSpec::MinorAvoid
            }
            "cycle-avoid" => {
                no_args(name, args)?;
                ClientSpec::CycleAvoid
            }
            "potential" => ClientSpec::Potential(args.parse()?),
            "transversal" => ClientSpec::Transversal(args.parse()?),
            "dean" => ClientSpec::Dean(args.parse()?),
            _ => return Err(Error::Parse(format!("unknown Client strategy `{s}`"))),
        })
    }
}

impl fmt::Display for ClientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClientSpec::Random => f.write_str("random"),
            ClientSpec::Potential(fam) => write!(f, "potential({fam})"),
            ClientSpec::Transversal(fam) => write!(f, "transversal({fam})"),
            ClientSpec::Dean(fam) => write!(f, "dean({fam})"),
            ClientSpec::MinorAvoid => f.write_str("minor-avoid"),
            ClientSpec::CycleAvoid => f.write_str("cycle-avoid"),
        }
    }
}

/// Property of Client's final graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    KtMinor(usize),
    Planar,
    Connected,
    KColorable(usize),
    Bipartite,
    Forest,
    Transversal(FamilySpec),
}

impl Predicate {
    /// Evaluates the predicate on the graph of `client` edges of K_n.
    pub fn evaluate(&self, board: &EdgeBoard, client: &[ElementId]) -> Result<bool> {
        let g = || GraphView::from_element_ids(board, client.iter().copied());
        Ok(match self {
            &Predicate::KtMinor(t) => has_kt_minor(&g(), t)?.present,
            Predicate::Planar => is_planar(&g()),
            Predicate::Connected => g().is_connected(),
            &Predicate::KColorable(k) => {
                let g = g();
                let colors = dsatur_coloring(&g);
                colors.iter().max().map_or(0, |&c| c + 1) <= k || is_k_colorable(&g, k)?
            }
            Predicate::Bipartite => g().is_bipartite(),
            Predicate::Forest => g().is_forest(),
            Predicate::Transversal(spec) => {
                let fam = enumerate(spec)?;
                if fam.n_elements() != board.size() {
                    return Err(Error::Parameter(format!("family {spec} does not live on K_{}", board.n())));
                }
                is_transversal(client, &fam)
            }
        })
    }

    /// Whether adding edges can only turn the predicate from false to true.
    /// Such properties hold for small q; the others for large q.
    pub fn is_increasing(&self) -> bool {
        matches!(self, Predicate::KtMinor(_) | Predicate::Connected | Predicate::Transversal(_))
    }

    /// Evaluates the predicate on a final state, using the owner map only.
    pub fn evaluate_state(&self, board: &EdgeBoard, state: &GameState) -> Result<bool> {
        let client: Vec<ElementId> = state.client_elements().collect();
        self.evaluate(board, &client)
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_call(s)?;
        let int = |a: &str| a.trim().parse::<usize>().map_err(|_| Error::Parse(format!("`{a}` is not an integer")));
        Ok(match name {
            "kt_minor" => Predicate::KtMinor(int(args)?),
            "k_colorable" => Predicate::KColorable(int(args)?),
            "transversal" => Predicate::Transversal(args.parse()?),
            "planar" | "connected" | "bipartite" | "forest" => {
                no_args(name, args)?;
                match name {
                    "planar" => Predicate::Planar,
                    "connected" => Predicate::Connected,
                    "bipartite" => Predicate::Bipartite,
                    _ => Predicate::Forest,
                }
            }
            _ => return Err(Error::Parse(format!("unknown predicate `{s}`"))),
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::KtMinor(t) => write!(f, "kt_minor({t})"),
            Predicate::Planar => f.write_str("planar"),
            Predicate::Connected => f.write_str("connected"),
            Predicate::KColorable(k) => write!(f, "k_colorable({k})"),
            Predicate::Bipartite => f.write_str("bipartite"),
            Predicate::Forest => f.write_str("forest"),
            Predicate::Transversal(fam) => write!(f, "transversal({fam})"),
        }
    }
}

/// Experiment description; the strategy and predicate fields hold spec strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    pub q: Vec<usize>,
    /// When non-empty, the bias grid is q = n + η for each η instead of `q`.
    #[serde(default)]
    pub eta: Vec<i64>,
    pub convention: Convention,
    pub waiter: String,
    pub client: String,
    pub predicate: String,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    #[serde(default)]
    pub parallel: Option<usize>,
    /// Record wall-clock times. Off gives byte-identical reports.
    #[serde(default = "yes")]
    pub timing: bool,
    /// Success rate needed for "the strategy works" in scans.
    #[serde(default = "default_rate")]
    pub success_rate: f64,
}

fn yes() -> bool {
    true
}

fn default_rate() -> f64 {
    0.95
}

impl ExperimentConfig {
    pub fn new(n: usize, q: usize, convention: Convention, waiter: &str, client: &str, predicate: &str) -> Self {
        ExperimentConfig {
            n: vec![n],
            q: vec![q],
            eta: Vec::new(),
            convention,
            waiter: waiter.into(),
            client: client.into(),
            predicate: predicate.into(),
            trials: 1,
            seed: 0,
            parallel: None,
            timing: true,
            success_rate: default_rate(),
        }
    }

    /// The (n, q) grid in row order.
    pub fn grid(&self) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for &n in &self.n {
            if self.eta.is_empty() {
                cells.extend(self.q.iter().map(|&q| (n, q)));
            } else {
                cells.extend(self.eta.iter().filter_map(|&e| usize::try_from(n as i64 + e).ok()).map(|q| (n, q)));
            }
        }
        cells
    }

    fn parsed(&self) -> Result<(WaiterSpec, ClientSpec, Predicate)> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.grid().is_empty() {
            return Err(Error::Parameter("the (n, q) grid is empty".into()));
        }
        Ok((self.waiter.parse()?, self.client.parse()?, self.predicate.parse()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub q: usize,
    pub trials: usize,
    pub successes: usize,
    pub mean_rounds: f64,
    pub runtime_ms: u64,
    /// Trials that ended in a strategy error (counted as failures).
    pub errors: usize,
    /// Why the cell could not be run at all.
    pub skipped: Option<String>,
    /// Whether the skip was a size cap (as opposed to invalid parameters).
    pub capped: bool,
    pub notes: Vec<String>,
}

impl Row {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub convention: String,
    pub waiter: String,
    pub client: String,
    pub predicate: String,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

pub const CSV_HEADER: &str = "n,q,trials,successes,mean_rounds,runtime_ms";

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{:.4},{}\n", r.n, r.q, r.trials, r.successes, r.mean_rounds, r.runtime_ms));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn any_capped(&self) -> bool {
        self.rows.iter().any(|r| r.capped)
    }

    pub fn any_invalid(&self) -> bool {
        self.rows.iter().any(|r| r.skipped.is_some() && !r.capped)
    }
}

fn is_cap(e: &Error) -> bool {
    matches!(e, Error::Cap(_) | Error::InfeasibleEnumeration { .. })
}

fn skipped_row(n: usize, q: usize, e: &Error) -> Row {
    Row {
        n,
        q,
        trials: 0,
        successes: 0,
        mean_rounds: 0.0,
        runtime_ms: 0,
        errors: 0,
        skipped: Some(e.to_string()),
        capped: is_cap(e),
        notes: Vec::new(),
    }
}

/// Runs `f` on the configured pool.
fn in_pool<T: Send>(parallel: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match parallel {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Parameter(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Plays one match of the given specs on E(K_n).
pub fn play_one(
    n: usize,
    q: usize,
    convention: Convention,
    waiter: &WaiterSpec,
    client: &ClientSpec,
    seed: u64,
) -> Result<MatchOutcome> {
    let board = EdgeBoard::new(n)?;
    let state = GameState::new(board.size(), q, convention)?;
    play_match(waiter.build(n, q)?.as_mut(), client.build(n)?.as_mut(), state, seed)
}

fn run_cell(
    cfg: &ExperimentConfig,
    specs: &(WaiterSpec, ClientSpec, Predicate),
    n: usize,
    q: usize,
) -> Row {
    let start = Instant::now();
    let built = EdgeBoard::new(n).and_then(|b| Ok((b, specs.0.build(n, q)?, specs.1.build(n)?)));
    let (board, waiter, client) = match built {
        Ok(x) => x,
        Err(e) => return skipped_row(n, q, &e),
    };
    // strategies are Send but not Sync, so every trial gets its own clone up front
    let players: Vec<_> = (0..cfg.trials).map(|i| (i, waiter.box_clone(), client.box_clone())).collect();
    let results: Vec<Result<(bool, usize, Vec<String>)>> = players
        .into_par_iter()
        .map(|(i, mut w, mut c)| {
            let state = GameState::new(board.size(), q, cfg.convention)?;
            let out = play_match(w.as_mut(), c.as_mut(), state, cfg.seed + i as u64)?;
            let ok = specs.2.evaluate_state(&board, &out.state)?;
            Ok((ok, out.state.round(), if i == 0 { w.diagnostics() } else { Vec::new() }))
        })
        .collect();
    let mut row = Row {
        n,
        q,
        trials: cfg.trials,
        successes: 0,
        mean_rounds: 0.0,
        runtime_ms: 0,
        errors: 0,
        skipped: None,
        capped: false,
        notes: Vec::new(),
    };
    let mut rounds = 0usize;
    let mut done = 0usize;
    for r in results {
        match r {
            Ok((ok, k, notes)) => {
                row.successes += ok as usize;
                rounds += k;
                done += 1;
                row.notes.extend(notes);
            }
            Err(e) if is_cap(&e) => return skipped_row(n, q, &e),
            Err(e) => {
                row.errors += 1;
                if row.errors == 1 {
                    row.notes.push(format!("first error: {e}"));
                }
            }
        }
    }
    row.mean_rounds = if done == 0 { 0.0 } else { rounds as f64 / done as f64 };
    if cfg.timing {
        row.runtime_ms = start.elapsed().as_millis() as u64;
    }
    row
}

/// Plays `trials` matches per grid cell and evaluates the predicate on each
/// final Client graph. Cells that cannot be run are reported, not fatal.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let specs = cfg.parsed()?;
    let rows = in_pool(cfg.parallel, || cfg.grid().into_iter().map(|(n, q)| run_cell(cfg, &specs, n, q)).collect())?;
    Ok(Report {
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").into(),
            convention: cfg.convention.short().into(),
            waiter: specs.0.to_string(),
            client: specs.1.to_string(),
            predicate: specs.2.to_string(),
            seed: cfg.seed,
            trials: cfg.trials,
        },
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub n: usize,
    /// For increasing predicates the largest q whose success rate reaches
    /// the configured rate, for decreasing ones the smallest.
    pub flip: Option<usize>,
    /// True when the predicate is expected to hold for q <= flip.
    pub holds_below: bool,
    /// Biases on the working side of `flip` whose rate falls short.
    pub non_monotone: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub report: Report,
    pub scans: Vec<ScanResult>,
    /// Predicted window for the flip, if the caller supplied one.
    pub window: Option<(f64, f64)>,
}

/// Sweeps the bias grid and locates, per n, the last q (in the direction in
/// which the predicate gets harder to force) at which it still holds in the
/// configured share of trials. A single-q grid gets no flip estimate.
pub fn scan_threshold_empirical(cfg: &ExperimentConfig, window: Option<(f64, f64)>) -> Result<ScanReport> {
    let below = cfg.predicate.parse::<Predicate>()?.is_increasing();
    let report = run_experiment(cfg)?;
    let mut scans = Vec::new();
    for &n in &cfg.n {
        let rows: Vec<&Row> = report.rows.iter().filter(|r| r.n == n && r.skipped.is_none()).collect();
        let working = rows.iter().filter(|r| r.rate() >= cfg.success_rate).map(|r| r.q);
        let flip = if rows.len() < 2 {
            None
        } else if below {
            working.max()
        } else {
            working.min()
        };
        let inside = |q: usize, f: usize| if below { q < f } else { q > f };
        let non_monotone = flip.map_or(Vec::new(), |f| {
            rows.iter().filter(|r| inside(r.q, f) && r.rate() < cfg.success_rate).map(|r| r.q).collect()
        });
        scans.push(ScanResult { n, flip, holds_below: below, non_monotone });
    }
    Ok(ScanReport { report, scans, window })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Density {
    /// Uniform G(n, m).
    Edges(usize),
    /// Binomial G(n, p).
    Prob(f64),
}

impl Density {
    /// The bias of the game that gives Client about as many edges:
    /// ⌈C(n,2)/m⌉ - 1, with m the expected edge count (0 if there are none).
    pub fn equivalent_bias(&self, n: usize) -> usize {
        let total = edge_count(n) as f64;
        let m = match *self {
            Density::Edges(m) => m as f64,
            Density::Prob(p) => p * total,
        };
        if m <= 0.0 {
            0
        } else {
            ((total / m).ceil() as usize).saturating_sub(1)
        }
    }
}

/// Edge ids of one random graph on K_n.
pub fn sample_random_graph(n: usize, density: Density, seed: u64) -> Result<Vec<ElementId>> {
    let total = edge_count(n);
    let mut rng = rng_from_seed(seed, 3);
    match density {
        Density::Edges(m) => {
            if m > total {
                return Err(Error::Parameter(format!("m = {m} exceeds C({n},2) = {total}")));
            }
            let mut ids: Vec<ElementId> = sample(&mut rng, total, m).into_iter().map(ElementId::from).collect();
            ids.sort_unstable();
            Ok(ids)
        }
        Density::Prob(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Parameter(format!("p = {p} must lie in [0, 1]")));
            }
            if p == 0.0 {
                return Ok(Vec::new());
            }
            if p == 1.0 {
                return Ok((0..total).map(ElementId::from).collect());
            }
            // geometric skips between successive present edges
            let log_q = (1.0 - p).ln();
            let mut ids = Vec::new();
            let mut i: f64 = -1.0;
            loop {
                let u: f64 = 1.0 - rng.random::<f64>();
                i += 1.0 + (u.ln() / log_q).floor();
                if i >= total as f64 {
                    break;
                }
                ids.push(ElementId(i as u32));
            }
            Ok(ids)
        }
    }
}

/// Samples random graphs and reports how often the predicate holds. Rows use
/// the equivalent bias for `q` and the mean edge count (Client's round count
/// in the equivalent game) for `mean_rounds`.
pub fn random_graph_baseline(
    n: usize,
    density: Density,
    predicate: &Predicate,
    trials: usize,
    seed: u64,
    timing: bool,
) -> Result<Report> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let board = EdgeBoard::new(n)?;
    let results: Vec<Result<(bool, usize)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ids = sample_random_graph(n, density, seed + i as u64)?;
            Ok((predicate.evaluate(&board, &ids)?, ids.len()))
        })
        .collect();
    let q = density.equivalent_bias(n);
    let mut row = Row {
        n,
        q,
        trials,
        successes: 0,
        mean_rounds: 0.0,
        runtime_ms: 0,
        errors: 0,
        skipped: None,
        capped: false,
        notes: vec![match density {
            Density::Edges(m) => format!("G(n,m) with m = {m}"),
            Density::Prob(p) => format!("G(n,p) with p = {p}"),
        }],
    };
    let mut edges = 0;
    for r in results {
        match r {
            Ok((ok, m)) => {
                row.successes += ok as usize;
                edges += m;
            }
            Err(e) if is_cap(&e) => {
                let mut s = skipped_row(n, q, &e);
                s.notes = row.notes;
                return Ok(baseline_report(predicate, seed, trials, s));
            }
            Err(e) => return Err(e),
        }
    }
    row.mean_rounds = edges as f64 / trials as f64;
    if timing {
        row.runtime_ms = start.elapsed().as_millis() as u64;
    }
    Ok(baseline_report(predicate, seed, trials, row))
}

fn baseline_report(predicate: &Predicate, seed: u64, trials: usize, row: Row) -> Report {
    Report {
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").into(),
            convention: "random-graph".into(),
            waiter: "-".into(),
            client: "-".into(),
            predicate: predicate.to_string(),
            seed,
            trials,
        },
        rows: vec![row],
    }
}

/// Client's final graph from a transcript, by replay.
pub fn replay_client_graph(transcript: &crate::game::Transcript) -> Result<(EdgeBoard, Vec<ElementId>)> {
    let state = transcript.replay()?;
    let n = EdgeBoard::n_for_size(state.board_size())
        .ok_or_else(|| Error::Parameter(format!("board of {} elements is not an edge board", state.board_size())))?;
    let board = EdgeBoard::new(n)?;
    let client = state.owners().iter().enumerate().filter(|(_, &o)| o == Owner::Client).map(|(i, _)| ElementId::from(i)).collect();
    Ok((board, client))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_round_trip() {
        for s in ["random", "minor(eps=0.9,t=4)", "color(k=20,eps=0.1,alpha=0)", "pressure(cycles(6,3,6))", "tree"] {
            let w: WaiterSpec = s.parse().unwrap();
            assert_eq!(w.to_string().parse::<WaiterSpec>().unwrap(), w);
        }
        for s in ["random", "potential(cycles(6,3,6))", "minor-avoid", "dean(cliques(5,3))"] {
            let c: ClientSpec = s.parse().unwrap();
            assert_eq!(c.to_string().parse::<ClientSpec>().unwrap(), c);
        }
        for s in ["kt_minor(4)", "planar", "k_colorable(3)", "transversal(cliques(4,3))"] {
            let p: Predicate = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("minor(eps=0.9,x=1)".parse::<WaiterSpec>().is_err());
        assert!("random(3)".parse::<ClientSpec>().is_err());
    }

    #[test]
    fn grid_uses_eta_offsets() {
        let mut cfg = ExperimentConfig::new(10, 1, Convention::WaiterClient, "random", "random", "forest");
        cfg.n = vec![10, 20];
        cfg.eta = vec![-15, 0, 2];
        assert_eq!(cfg.grid(), vec![(10, 10), (10, 12), (20, 5), (20, 20), (20, 22)]);
    }

    #[test]
    fn sampled_graph_sizes() {
        assert_eq!(sample_random_graph(10, Density::Edges(45), 1).unwrap().len(), 45);
        assert!(sample_random_graph(10, Density::Prob(0.0), 1).unwrap().is_empty());
        let g = sample_random_graph(200, Density::Prob(0.1), 4).unwrap();
        let expect = 0.1 * edge_count(200) as f64;
        assert!((g.len() as f64 - expect).abs() < 5.0 * expect.sqrt());
    }
}
