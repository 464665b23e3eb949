//! The `ricci` command line.
//!
//! Exit codes: 0 ok, 1 semantic failure (not a solution, no convergence,
//! failed reproduction row), 2 unreadable or malformed input, 3 invariant
//! violation raised by a computation.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::action::{
    action_ghy, action_plain, action_region_plain, bound_upper_global, partial_action_complete, ratio_bounds,
    tree_action_hex,
};
use crate::curvature::{kappa, kappa_t};
use crate::error::Error;
use crate::generators::{
    ball_region, find_perfect_matching, gen_complete, gen_cycle, gen_hex_region, gen_tree, geometric_half_half,
    matching_setting, ratio_chain_path, two_progression_setting, HexRegionSpec,
};
use crate::graph::{PartialSetting, Region, Setting, WeightedGraph};
use crate::io::{
    graph_to_json, load_graph, load_region_json, load_setting_json, partial_from_json, region_from_json,
    region_to_json, setting_from_json, setting_to_json, Bundle, IoError,
};
use crate::reproduce::{self, ReproduceOptions};
use crate::search::{extremize_action, newton_restarts, ExtremizeOptions, NewtonOptions, Objective, INIT_SPREAD};
use crate::tree::{two_progression_x, verify_solution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ricci", version, about = "Ricci curvature, actions and tree equations on weighted graphs")]
pub struct Cli {
    /// Idleness parameter; curvature is reported at this t as well as in the limit.
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Short-edge length for matching settings.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub eps: f64,
    /// Residual tolerance for equation checks and Newton.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a generated graph with its setting (and region, where natural).
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Curvature of every edge.
    Curvature {
        graph: PathBuf,
        #[arg(long)]
        setting: Option<PathBuf>,
    },
    Action {
        graph: PathBuf,
        #[arg(long)]
        setting: Option<PathBuf>,
        #[arg(long)]
        region: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "plain")]
        variant: VariantArg,
    },
    /// Tree equation residuals; exit 1 unless every interior edge is solved.
    VerifyEom {
        graph: PathBuf,
        #[arg(long)]
        setting: Option<PathBuf>,
    },
    /// Newton solve for the free edges given fixed boundary lengths.
    SolveEom {
        graph: PathBuf,
        /// Fixed lengths; defaults to the graph's leaf edges.
        #[arg(long)]
        fixed: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    /// Extremize the action over the free edges.
    Search {
        graph: PathBuf,
        #[arg(long)]
        fixed: Option<PathBuf>,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    /// Global bounds and per-vertex ratio checks; exit 3 if one fails.
    Bounds {
        graph: PathBuf,
        #[arg(long)]
        setting: Option<PathBuf>,
    },
    /// Recompute the reference values; exit 1 if any row fails.
    Reproduce,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    Tree {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        depth: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Hex {
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Complete graph with a perfect matching of length --eps.
    Matching {
        #[arg(long)]
        n: usize,
    },
    /// Path whose successive length ratios are given.
    Chain {
        #[arg(long, value_delimiter = ',', required = true)]
        ratios: Vec<f64>,
    },
    HalfHalf {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        ratio: f64,
    },
    TwoProgression {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        depth: usize,
        /// Root to use; defaults to the smallest positive one.
        #[arg(long)]
        x: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Plain,
    Ghy,
    RegionPlain,
    TreeAction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ObjectiveArg {
    Min,
    Max,
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Invariant(Error),
    Semantic(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(m) => Failure::Semantic(format!("no convergence: {m}")),
            other => Failure::Invariant(other),
        }
    }
}

/// Output plus the exit code to report after writing it.
struct Outcome {
    json: serde_json::Value,
    code: i32,
}

impl Outcome {
    fn ok(value: impl Serialize) -> Result<Self, Failure> {
        Ok(Outcome {
            json: serde_json::to_value(value).map_err(|e| Failure::Parse(e.to_string()))?,
            code: EXIT_OK,
        })
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(outcome) => match emit(&cli.out, &outcome.json) {
            Ok(()) => outcome.code,
            Err(msg) => {
                eprintln!("error: {msg}");
                EXIT_FAILURE
            }
        },
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            EXIT_PARSE
        }
        Err(Failure::Invariant(e)) => {
            eprintln!("error: {e}");
            EXIT_INVARIANT
        }
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            EXIT_FAILURE
        }
    }
}

fn emit(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())? + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse_err(e: Error) -> Failure {
    Failure::Parse(e.to_string())
}

/// The graph, with lengths replaced by a full setting when one is given.
/// A bundle's own setting is used when no separate file is passed.
fn load_weighted(graph: &Path, setting: &Option<PathBuf>) -> Result<WeightedGraph, Failure> {
    let text = read(graph)?;
    let g = load_graph(&text)?;
    let json = match setting {
        Some(p) => load_setting_json(&read(p)?)?,
        None => load_setting_json(&text)?,
    };
    match json {
        Some(s) => {
            let s = setting_from_json(&g, &s).map_err(parse_err)?;
            g.apply(&s).map_err(parse_err)
        }
        None => Ok(g),
    }
}

fn load_region(g: &WeightedGraph, graph: &Path, region: &Option<PathBuf>) -> Result<Region, Failure> {
    let json = match region {
        Some(p) => load_region_json(&read(p)?)?,
        None => load_region_json(&read(graph)?)?,
    };
    let json = json.ok_or_else(|| Failure::Parse("this variant needs a region (--region or a bundle)".into()))?;
    region_from_json(g, &json).map_err(|e| match e {
        Error::UnknownVertex(_) => parse_err(e),
        other => Failure::Invariant(other),
    })
}

fn load_fixed(g: &WeightedGraph, fixed: &Option<PathBuf>) -> Result<PartialSetting, Failure> {
    match fixed {
        Some(p) => {
            let json = load_setting_json(&read(p)?)?.ok_or_else(|| Failure::Parse("no setting in fixed file".into()))?;
            partial_from_json(g, &json).map_err(parse_err)
        }
        None => Ok(g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| g.degree(u) == 1 || g.degree(v) == 1)
            .map(|(e, _)| (e, g.length(e)))
            .collect()),
    }
}

fn bundle(g: &WeightedGraph, s: &Setting, region: Option<&Region>) -> Bundle {
    Bundle {
        graph: graph_to_json(g),
        setting: Some(setting_to_json(g, s)),
        region: region.map(|r| region_to_json(g, r)),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(t) = cli.t {
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::Parse(format!("--t must lie in (0, 1), got {t}")));
        }
    }
    match &cli.command {
        Command::Gen { family } => gen(cli, family),
        Command::Curvature { graph, setting } => {
            let g = load_weighted(graph, setting)?;
            let geo = g.geodesics();
            let mut edges = Vec::new();
            let mut total = 0.0;
            for &(u, v) in g.edges() {
                let k = kappa(&g, &geo, u, v)?;
                total += k;
                let mut row = json!({"u": g.name(u), "v": g.name(v), "kappa": k});
                if let Some(t) = cli.t {
                    row["t"] = json!(t);
                    row["kappa_t"] = json!(kappa_t(&g, &geo, u, v, t)?);
                }
                edges.push(row);
            }
            Outcome::ok(json!({"edges": edges, "action": total}))
        }
        Command::Action {
            graph,
            setting,
            region,
            variant,
        } => {
            let g = load_weighted(graph, setting)?;
            let report = match variant {
                VariantArg::Plain => {
                    let all: Vec<usize> = (0..g.edge_count()).collect();
                    action_plain(&g, &g.geodesics(), &all)?
                }
                VariantArg::Ghy => action_ghy(&g, &load_region(&g, graph, region)?)?,
                VariantArg::RegionPlain => action_region_plain(&g, &load_region(&g, graph, region)?)?,
                VariantArg::TreeAction => tree_action_hex(&g, &load_region(&g, graph, region)?)?,
            };
            Outcome::ok(report)
        }
        Command::VerifyEom { graph, setting } => {
            let g = load_weighted(graph, setting)?;
            let report = verify_solution(&g, &Setting::of(&g), cli.tol)?;
            let code = if report.is_solution { EXIT_OK } else { EXIT_FAILURE };
            let mut out = Outcome::ok(&report)?;
            out.code = code;
            Ok(out)
        }
        Command::SolveEom { graph, fixed, restarts } => {
            let g = load_weighted(graph, &None)?;
            let boundary = load_fixed(&g, fixed)?;
            let opts = NewtonOptions {
                tol: cli.tol,
                ..NewtonOptions::default()
            };
            let runs = newton_restarts(&g, &boundary, (*restarts).max(1), cli.seed, INIT_SPREAD, &opts);
            let mut last_err = None;
            for (k, run) in runs.into_iter().enumerate() {
                match run {
                    Ok(mut r) => {
                        r.restarts_used = k + 1;
                        let solved = g.apply(&r.setting)?;
                        return Outcome::ok(json!({
                            "result": r,
                            "solution": bundle(&solved, &r.setting, None),
                        }));
                    }
                    Err(e @ Error::NoConvergence(_)) => last_err = Some(e),
                    Err(e) => return Err(e.into()),
                }
            }
            Err(last_err.unwrap_or_else(|| Error::NoConvergence("no restarts".into())).into())
        }
        Command::Search {
            graph,
            fixed,
            objective,
            restarts,
        } => {
            let g = load_weighted(graph, &None)?;
            let fixed = match fixed {
                Some(_) => load_fixed(&g, fixed)?,
                None => PartialSetting::new(),
            };
            let objective = match objective {
                ObjectiveArg::Min => Objective::Min,
                ObjectiveArg::Max => Objective::Max,
            };
            let opts = ExtremizeOptions {
                restarts: (*restarts).max(1),
                seed: cli.seed,
                ..ExtremizeOptions::default()
            };
            let r = extremize_action(&g, &fixed, objective, &opts)?;
            let best = g.apply(&r.setting)?;
            Outcome::ok(json!({
                "objective": objective,
                "result": r,
                "best": bundle(&best, &r.setting, None),
            }))
        }
        Command::Bounds { graph, setting } => {
            let g = load_weighted(graph, setting)?;
            let geo = g.geodesics();
            let all: Vec<usize> = (0..g.edge_count()).collect();
            let action = action_plain(&g, &geo, &all)?.total;
            let upper = bound_upper_global(&g);
            let vertices: Vec<_> = (0..g.vertex_count())
                .map(|v| {
                    let r = ratio_bounds(&g, &geo, v);
                    json!({"vertex": g.name(v), "ratio": r.ratio, "lower_ok": r.lower_ok,
                           "upper_ok": r.upper_ok, "equal_lengths": r.equal_lengths})
                })
                .collect();
            let mut ok = action <= upper + 1e-9 && (0..g.vertex_count()).all(|v| {
                let r = ratio_bounds(&g, &geo, v);
                r.lower_ok && r.upper_ok
            });
            let mut out = json!({"action": action, "bound_upper": upper, "vertices": vertices});
            if g.is_complete() {
                let n = g.vertex_count() as f64;
                let partial = partial_action_complete(&g)?;
                ok &= action <= n * n / 2.0 + 1e-9;
                out["complete_bound"] = json!(n * n / 2.0);
                out["partial_action"] = json!(partial);
            }
            out["ok"] = json!(ok);
            let mut outcome = Outcome::ok(out)?;
            if !ok {
                outcome.code = EXIT_INVARIANT;
            }
            Ok(outcome)
        }
        Command::Reproduce => {
            let rows = reproduce::run(&ReproduceOptions {
                eps: cli.eps,
                seed: cli.seed,
            });
            for r in &rows {
                eprintln!("[{}] {:>2} {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name);
            }
            let all = rows.iter().all(|r| r.pass);
            let mut out = Outcome::ok(json!({"rows": rows, "all_pass": all}))?;
            out.code = if all { EXIT_OK } else { EXIT_FAILURE };
            Ok(out)
        }
    }
}

fn gen(cli: &Cli, family: &Family) -> Result<Outcome, Failure> {
    // Bad generator parameters are input errors, not computation failures.
    let bad = parse_err;
    let b = match family {
        Family::Tree { q, depth } => {
            let g = gen_tree(*q, *depth).map_err(bad)?;
            let region = if *depth >= 2 {
                Some(ball_region(&g, 0, depth - 1).map_err(bad)?)
            } else {
                None
            };
            bundle(&g, &Setting::of(&g), region.as_ref())
        }
        Family::Complete { n } => {
            let g = gen_complete(*n).map_err(bad)?;
            bundle(&g, &Setting::of(&g), None)
        }
        Family::Cycle { n } => {
            let g = gen_cycle(*n).map_err(bad)?;
            bundle(&g, &Setting::of(&g), None)
        }
        Family::Hex { radius } => {
            let (g, region) = gen_hex_region(&HexRegionSpec::new(*radius)).map_err(bad)?;
            bundle(&g, &Setting::of(&g), Some(&region))
        }
        Family::Matching { n } => {
            let g = gen_complete(*n).map_err(bad)?;
            let m = find_perfect_matching(&g).map_err(bad)?.ok_or_else(|| bad(Error::NotPerfect))?;
            let s = matching_setting(&g, &m, cli.eps, None).map_err(bad)?;
            bundle(&g.apply(&s).map_err(bad)?, &s, None)
        }
        Family::Chain { ratios } => {
            let g = ratio_chain_path(ratios).map_err(bad)?;
            bundle(&g, &Setting::of(&g), None)
        }
        Family::HalfHalf { q, depth, ratio } => {
            let (g, s) = geometric_half_half(*q, *depth, *ratio).map_err(bad)?;
            bundle(&g.apply(&s).map_err(bad)?, &s, None)
        }
        Family::TwoProgression {
            q,
            m,
            s,
            alpha,
            y,
            depth,
            x,
        } => {
            let x = match x {
                Some(x) => *x,
                None => two_progression_x(*alpha, *y)
                    .map_err(bad)?
                    .into_iter()
                    .filter(|&r| r > 0.0)
                    .min_by(f64::total_cmp)
                    .ok_or_else(|| Failure::Parse("no positive root for these parameters".into()))?,
            };
            let (g, st) = two_progression_setting(*q, *m, *s, *alpha, x, *y, *depth).map_err(bad)?;
            bundle(&g.apply(&st).map_err(bad)?, &st, None)
        }
    };
    Outcome::ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(run(["ricci", "no-such-command"]), EXIT_PARSE);
        assert_eq!(run(["ricci", "curvature", "/nonexistent/graph.json"]), EXIT_PARSE);
        assert_eq!(run(["ricci", "--t", "1.5", "reproduce"]), EXIT_PARSE);
    }

    #[test]
    fn gen_rejects_bad_parameters() {
        assert_eq!(run(["ricci", "gen", "cycle", "--n", "2"]), EXIT_PARSE);
    }
}
