//! Command-line front end: play, solve, threshold, scan, baseline, verify, phi.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use waiter_client::board::EdgeBoard;
use waiter_client::families::{
    bednarska_sum, enumerate, phi_cw, phi_formula_colorability, phi_formula_cycles_tail, phi_wc, ColorabilityFamily,
    FamilySpec,
};
use waiter_client::game::{Convention, Transcript};
use waiter_client::graph::{girth, is_planar, parse_edge_list, GraphView};
use waiter_client::harness::{
    play_one, random_graph_baseline, replay_client_graph, scan_threshold_empirical, ClientSpec, Density,
    ExperimentConfig, Predicate, Report, WaiterSpec,
};
use waiter_client::solver::{solve, threshold_bias, Objective};
use waiter_client::{Error, Result};

#[derive(Parser)]
#[command(name = "wcgame", version, about = "Biased Waiter-Client and Client-Waiter games on K_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[arg(long, global = true)]
    csv_out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,
    /// Worker threads for trial-level parallelism.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// Write runtime_ms = 0 so repeated runs give identical reports.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Play one match on E(K_n) and print the outcome.
    Play {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value = "wc")]
        convention: Convention,
        #[arg(long, default_value = "random")]
        waiter: String,
        #[arg(long, default_value = "random")]
        client: String,
        /// Predicates to evaluate on Client's final graph.
        #[arg(long)]
        predicate: Vec<String>,
    },
    /// Solve a small game exactly.
    Solve {
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value = "wc")]
        convention: Convention,
    },
    /// Exact threshold bias by solving q = 1..=q-max.
    Threshold {
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long, default_value = "wc")]
        convention: Convention,
        #[arg(long)]
        q_max: usize,
    },
    /// Tournament over an (n, q) grid with an empirical flip estimate.
    Scan {
        /// Experiment config as JSON; replaces the grid and strategy flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Inclusive bias range `a..b` or a comma list.
        #[arg(long)]
        q: Option<String>,
        /// Offsets η for q = n + η, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eta: Vec<i64>,
        #[arg(long, default_value = "wc")]
        convention: Convention,
        #[arg(long, default_value = "random")]
        waiter: String,
        #[arg(long, default_value = "random")]
        client: String,
        #[arg(long, default_value = "connected")]
        predicate: String,
        /// Predicted flip window `lo,hi`.
        #[arg(long, value_delimiter = ',')]
        window: Vec<f64>,
    },
    /// Random graph frequencies of a predicate.
    Baseline {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "p")]
        m: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        predicate: String,
    },
    /// Evaluate predicates on an edge list or a replayed transcript.
    Verify {
        #[arg(long, conflicts_with = "transcript")]
        edges: Option<PathBuf>,
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Vertex count for edge lists (default: largest vertex + 1).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        predicate: Vec<String>,
    },
    /// Potentials of a family, or the closed-form bounds.
    Phi {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        q: usize,
        /// Closed-form cycle tail: needs --n and --lmin.
        #[arg(long)]
        cycles_tail: bool,
        /// Colorability family bound (f1, f2, f3, small_k): needs --n and --k.
        #[arg(long)]
        colorability: Option<ColorabilityFamily>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        lmin: Option<usize>,
    },
}

#[derive(Args)]
struct ObjectiveArgs {
    /// Winning family, e.g. `cycles(4,3,4)` or `explicit(3;0 1)`.
    #[arg(long)]
    family: Option<String>,
    /// Ask for a transversal of the family instead of a full set.
    #[arg(long)]
    transversal: bool,
    /// Connectivity on K_n instead of a family.
    #[arg(long, conflicts_with = "family")]
    connected: Option<usize>,
}

impl ObjectiveArgs {
    fn objective(&self) -> Result<Objective> {
        match (&self.family, self.connected) {
            (_, Some(n)) => Ok(Objective::Connected { n }),
            (Some(f), None) => {
                let fam = Arc::new(enumerate(&f.parse::<FamilySpec>()?)?);
                Ok(if self.transversal { Objective::Transversal(fam) } else { Objective::ClaimsSome(fam) })
            }
            (None, None) => Err(Error::Parameter("give --family or --connected".into())),
        }
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text)?;
    }
    Ok(())
}

fn parse_q(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("bad bias range `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn print_report(report: &Report) {
    print!("{}", report.to_csv());
    for r in &report.rows {
        if let Some(why) = &r.skipped {
            eprintln!("n={} q={}: skipped ({why})", r.n, r.q);
        }
        if r.errors > 0 {
            eprintln!("n={} q={}: {} trials ended in an error", r.n, r.q, r.errors);
        }
    }
}

fn report_code(report: &Report) -> ExitCode {
    if report.any_invalid() {
        ExitCode::from(1)
    } else if report.any_capped() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Play { n, q, convention, waiter, client, predicate } => {
            let w: WaiterSpec = waiter.parse()?;
            let c: ClientSpec = client.parse()?;
            let preds = predicate.iter().map(|p| p.parse()).collect::<Result<Vec<Predicate>>>()?;
            let out = play_one(n, q, convention, &w, &c, cli.seed)?;
            let board = EdgeBoard::new(n)?;
            println!("rounds: {}", out.state.round());
            println!("client edges: {}", out.state.client_count());
            for p in &preds {
                println!("{p}: {}", p.evaluate_state(&board, &out.state)?);
            }
            write_out(&cli.json_out, &out.transcript.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { objective, q, convention } => {
            let r = solve(&objective.objective()?, q, convention)?;
            let json = r.to_json();
            println!("{json}");
            write_out(&cli.json_out, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Threshold { objective, convention, q_max } => {
            let t = threshold_bias(&objective.objective()?, convention, q_max)?;
            let json = serde_json::to_string(&t)?;
            println!("{json}");
            write_out(&cli.json_out, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { config, n, q, eta, convention, waiter, client, predicate, window } => {
            let cfg = match config {
                Some(path) => serde_json::from_str::<ExperimentConfig>(&fs::read_to_string(path)?)?,
                None => {
                    if n.is_empty() {
                        return Err(Error::Parameter("give --n or --config".into()));
                    }
                    let mut cfg = ExperimentConfig::new(0, 0, convention, &waiter, &client, &predicate);
                    cfg.n = n;
                    cfg.q = match q {
                        Some(s) => parse_q(&s)?,
                        None if eta.is_empty() => return Err(Error::Parameter("give --q or --eta".into())),
                        None => Vec::new(),
                    };
                    cfg.eta = eta;
                    cfg.trials = cli.trials;
                    cfg.seed = cli.seed;
                    cfg.parallel = cli.parallel;
                    cfg.timing = !cli.no_timing;
                    cfg
                }
            };
            let window = match window.as_slice() {
                [] => None,
                &[lo, hi] => Some((lo, hi)),
                _ => return Err(Error::Parse("--window takes `lo,hi`".into())),
            };
            let scan = scan_threshold_empirical(&cfg, window)?;
            print_report(&scan.report);
            for s in &scan.scans {
                match s.flip {
                    Some(f) if s.holds_below => println!("n={}: holds up to q={f}", s.n),
                    Some(f) => println!("n={}: holds from q={f}", s.n),
                    None => println!("n={}: no flip estimate", s.n),
                }
                if !s.non_monotone.is_empty() {
                    println!("n={}: non-monotone at q={:?}", s.n, s.non_monotone);
                }
            }
            if let Some((lo, hi)) = window {
                println!("predicted window: [{lo}, {hi}]");
            }
            write_out(&cli.csv_out, &scan.report.to_csv())?;
            write_out(&cli.json_out, &serde_json::to_string_pretty(&scan)?)?;
            Ok(report_code(&scan.report))
        }
        Command::Baseline { n, m, p, predicate } => {
            let density = match (m, p) {
                (Some(m), _) => Density::Edges(m),
                (None, Some(p)) => Density::Prob(p),
                (None, None) => return Err(Error::Parameter("give --m or --p".into())),
            };
            let pred: Predicate = predicate.parse()?;
            let report = random_graph_baseline(n, density, &pred, cli.trials, cli.seed, !cli.no_timing)?;
            print_report(&report);
            write_out(&cli.csv_out, &report.to_csv())?;
            write_out(&cli.json_out, &report.to_json())?;
            Ok(report_code(&report))
        }
        Command::Verify { edges, transcript, n, predicate } => {
            let (board, client) = match (edges, transcript) {
                (Some(path), _) => {
                    let g = parse_edge_list(&fs::read_to_string(path)?, n)?;
                    let board = EdgeBoard::new(g.n().max(2))?;
                    let ids = g.edges().map(|(u, v)| board.id(u, v)).collect::<Vec<_>>();
                    (board, ids)
                }
                (None, Some(path)) => replay_client_graph(&Transcript::from_json(&fs::read_to_string(path)?)?)?,
                (None, None) => return Err(Error::Parameter("give --edges or --transcript".into())),
            };
            let g = GraphView::from_element_ids(&board, client.iter().copied());
            println!("vertices: {}, edges: {}, components: {}", g.n(), g.edge_count(), g.component_count());
            println!("girth: {}", girth(&g).map_or("none".to_string(), |x| x.to_string()));
            println!("planar: {}", is_planar(&g));
            for p in &predicate {
                let p: Predicate = p.parse()?;
                println!("{p}: {}", p.evaluate(&board, &client)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Phi { family, q, cycles_tail, colorability, n, k, lmin } => {
            let need = |x: Option<usize>, name: &str| x.ok_or_else(|| Error::Parameter(format!("--{name} is required")));
            let json = if let Some(f) = family {
                let fam = enumerate(&f.parse::<FamilySpec>()?)?;
                serde_json::json!({
                    "family": fam.label(),
                    "sets": fam.len(),
                    "q": q,
                    "phi_wc": phi_wc(&fam, q),
                    "phi_cw": phi_cw(&fam, q),
                    "bednarska_sum": bednarska_sum(&fam, q),
                })
            } else if cycles_tail {
                let (n, lmin) = (need(n, "n")?, need(lmin, "lmin")?);
                serde_json::json!({ "n": n, "q": q, "lmin": lmin, "phi_cycles_tail": phi_formula_cycles_tail(n, q, lmin) })
            } else if let Some(which) = colorability {
                let (n, k) = (need(n, "n")?, need(k, "k")?);
                let v = phi_formula_colorability(n, k, q, which)?;
                serde_json::json!({ "n": n, "k": k, "q": q, "family": format!("{which:?}"), "value": v.value, "degenerate": v.degenerate })
            } else {
                return Err(Error::Parameter("give --family, --cycles-tail or --colorability".into()));
            };
            let text = serde_json::to_string_pretty(&json)?;
            println!("{text}");
            write_out(&cli.json_out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Cap(_) | Error::InfeasibleEnumeration { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
