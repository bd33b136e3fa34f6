use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tripartite::bounds::{threshold_csv, ThresholdReport};
use tripartite::constructions::{
    audit_with, construction1, construction2, generalized_construction, Construction2Params, Variant,
};
use tripartite::finder::{run_pipeline, DEFAULT_EPS};
use tripartite::graph::{
    decode_bg2, decode_tg3, encode_bg2, encode_tg3, find_k2s, find_k3s_with, Parallelism, TripartiteGraph,
};
use tripartite::plane::ProjectivePlane;
use tripartite::search::{brute_force_zarankiewicz, extremal_min_degree, local_search_lower_bound, ExtremalResult};
use tripartite::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "tripartite", version, about = "K3(s)-free tripartite constructions, detectors and bounds")]
struct Cli {
    /// Single-worker search everywhere.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Append-only JSON-lines file for search results.
    #[arg(long, global = true)]
    results: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Tg3,
    Bg2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Forbid {
    K2s,
    K3s,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Proof,
    Exact,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build PG(2, q) and check it.
    Plane {
        #[arg(long)]
        q: u64,
    },
    /// Build a K3(s)-free tripartite graph.
    Construct {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variant: u8,
        #[arg(long, conflicts_with = "base", required_unless_present = "base")]
        q: Option<u64>,
        /// BG2 file holding a square K2(s)-free base graph.
        #[arg(long, requires = "s")]
        base: Option<PathBuf>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        x2: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seed for placing the base graph on the blocks; defaults to `--seed`.
        #[arg(long)]
        base_seed: Option<u64>,
    },
    /// Exhaustively search a graph for K2(s) (BG2 input) or K3(s) (TG3 input).
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        forbid: Forbid,
        #[arg(long)]
        s: usize,
    },
    /// Minimum degree, triangles, freeness and bound comparisons of a TG3 graph.
    Audit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Threshold formulas over a range of n.
    Bounds {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Find a K3(s) in a TG3 graph; exits with 2 when there is none.
    Find {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Method::Proof)]
        method: Method,
    },
    /// Exact Zarankiewicz number z(n, s).
    Zarankiewicz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Lift the default size limit.
        #[arg(long)]
        force: bool,
    },
    /// Largest minimum degree of a K3(s)-free tripartite graph.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        force: bool,
    },
}

enum Outcome {
    Done(String),
    NotFound(String),
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::BadArgs(format!("cannot read {}: {e}", path.display())))
}

fn read_tg3(path: &Path) -> Result<TripartiteGraph> {
    decode_tg3(&read(path)?)
}

/// The subcommand's format, or its default when none was given.
fn pick(format: Option<Format>, allowed: &[Format]) -> Result<Format> {
    match format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Error::BadArgs(format!("format {f:?} is not available for this subcommand").to_lowercase())),
    }
}

fn append_result(path: &Path, r: &ExtremalResult) -> Result<()> {
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::BadArgs(format!("cannot open {}: {e}", path.display())))?;
    writeln!(file, "{}", r.to_json()).map_err(|e| Error::BadArgs(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let par = if cli.deterministic { Parallelism::Single } else { Parallelism::Multi };
    let fmt = cli.format;
    let out = match &cli.command {
        Command::Plane { q } => {
            let f = pick(fmt, &[Format::Json, Format::Bg2])?;
            let plane = ProjectivePlane::new(*q)?;
            let g = plane.incidence_graph();
            if f == Format::Bg2 {
                encode_bg2(&g)
            } else {
                let field = plane.field();
                pretty(&json!({
                    "q": q,
                    "characteristic": field.characteristic(),
                    "degree": field.degree(),
                    "modulus": field.modulus(),
                    "points": plane.size(),
                    "edges": g.edge_count(),
                    "regularity": g.min_degree(),
                    "axioms_hold": plane.check_axioms().is_ok(),
                    "k2_2_free": find_k2s(&g, 2)?.is_free(),
                }))
            }
        }
        Command::Construct { variant, q, base, s, x2, seed, base_seed } => {
            let f = pick(fmt, &[Format::Tg3, Format::Json])?;
            let bseed = base_seed.unwrap_or(*seed);
            let g = match (q, base) {
                (Some(q), _) if *variant == 1 => construction1(*q)?,
                (Some(q), _) => {
                    let n = (q * q + q + 1) as usize;
                    let x2_size = x2.unwrap_or_else(|| tripartite::constructions::ceil_sqrt(n as u64) as usize);
                    construction2(&Construction2Params {
                        q: *q,
                        x2_size,
                        partition_seed: *seed,
                        base_assignment_seed: bseed,
                    })?
                }
                (None, Some(path)) => {
                    let b = decode_bg2(&read(path)?)?;
                    let s = s.expect("clap requires --s with --base");
                    let v = if *variant == 1 {
                        Variant::One
                    } else {
                        Variant::Two {
                            x2_size: x2.unwrap_or_else(|| b.min_degree().max(1)),
                            partition_seed: *seed,
                            base_assignment_seed: bseed,
                        }
                    };
                    generalized_construction(&b, s, v)?
                }
                (None, None) => unreachable!("clap requires --q or --base"),
            };
            if f == Format::Tg3 {
                encode_tg3(&g)
            } else {
                pretty(&json!({
                    "variant": variant,
                    "n": g.n(),
                    "edges": g.edge_count(),
                    "min_degree": g.min_degree(),
                    "graph": encode_tg3(&g),
                }))
            }
        }
        Command::Verify { input, forbid, s } => {
            pick(fmt, &[Format::Json])?;
            let report = match forbid {
                Forbid::K2s => find_k2s(&decode_bg2(&read(input)?)?, *s)?,
                Forbid::K3s => find_k3s_with(&read_tg3(input)?, *s, par)?,
            };
            pretty(&json!({
                "result": if report.is_free() { "free" } else { "contains" },
                "report": report,
            }))
        }
        Command::Audit { input, s } => {
            pick(fmt, &[Format::Json])?;
            pretty(&audit_with(&read_tg3(input)?, *s, par)?)
        }
        Command::Bounds { s, eps, n_from, n_to, csv } => {
            let f = if *csv { Format::Csv } else { pick(fmt, &[Format::Json, Format::Csv])? };
            if f == Format::Csv {
                threshold_csv(*s, *eps, *n_from, *n_to)?
            } else {
                if n_from > n_to {
                    return Err(Error::BadArgs(format!("empty range {n_from}..={n_to}")));
                }
                let rows = (*n_from..=*n_to).map(|n| ThresholdReport::new(n, *s, *eps)).collect::<Result<Vec<_>>>()?;
                pretty(&rows)
            }
        }
        Command::Find { input, s, eps, method } => {
            pick(fmt, &[Format::Json])?;
            let g = read_tg3(input)?;
            let (found, text) = match method {
                Method::Proof => {
                    let trace = run_pipeline(&g, *s, *eps, par)?;
                    (trace.certificate.is_some(), pretty(&trace))
                }
                Method::Exact => {
                    let report = find_k3s_with(&g, *s, par)?;
                    (report.witness.is_some(), pretty(&report))
                }
            };
            return Ok(if found { Outcome::Done(text) } else { Outcome::NotFound(text) });
        }
        Command::Zarankiewicz { n, s, force } => {
            pick(fmt, &[Format::Json])?;
            let r = brute_force_zarankiewicz(*n, *s, *force)?;
            if let Some(path) = &cli.results {
                append_result(path, &r)?;
            }
            pretty(&r.record())
        }
        Command::Extremal { n, s, heuristic, budget, seed, force } => {
            pick(fmt, &[Format::Json])?;
            let r = if *heuristic {
                local_search_lower_bound(*n, *s, *seed, *budget)?
            } else {
                extremal_min_degree(*n, *s, *force)?
            };
            if let Some(path) = &cli.results {
                append_result(path, &r)?;
            }
            pretty(&r.record())
        }
    };
    Ok(Outcome::Done(out))
}

fn emit(cli: &Cli, text: &str) -> std::result::Result<(), String> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (text, code) = match run(&cli) {
        Ok(Outcome::Done(t)) => (t, 0),
        Ok(Outcome::NotFound(t)) => (t, 2),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
