//! `cryvol`: exact flow-polytope volumes and identity verification from the
//! command line.  Every number printed is an exact integer or a reduced
//! fraction; exit codes are 0 (all pass), 1 (any failure or runtime error),
//! 2 (usage error).

mod named;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cryvol_core::ct::{iterated_ct, parse_ct_expression};
use cryvol_core::dynflow::{kdyn, volume_via_dynamic_kpf};
use cryvol_core::graphs::{
    apex_netflow, complete_type_a, complete_type_c, complete_type_d, source_sink_netflow,
    staircase_netflow, LoopRange, SignedGraph,
};
use cryvol_core::kostant::{kpf, normalized_volume_ehrhart};
use cryvol_core::reduce::volume_via_reduction;

#[derive(Parser)]
#[command(
    name = "cryvol",
    version,
    about = "Exact volumes of flow polytopes of signed graphs and the identities behind them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Flow polytope of the complete graph, netflow (1, 0, ..., 0, -1).
    Cry,
    /// Complete signed graph without loops, netflow (2, 0, ..., 0).
    Cryd,
    /// Complete signed graph with loops, netflow (2, 0, ..., 0).
    Cryc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Lattice-point interpolation of dilations.
    Ehrhart,
    /// Recursive subdivision by reduction rules.
    Reduction,
    /// Dynamic Kostant partition count.
    Dynamic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LoopRangeArg {
    /// Loops at every vertex.
    All,
    /// Loops at every vertex except the last.
    FirstN,
}

impl From<LoopRangeArg> for LoopRange {
    fn from(v: LoopRangeArg) -> Self {
        match v {
            LoopRangeArg::All => LoopRange::AllVertices,
            LoopRangeArg::FirstN => LoopRange::FirstN,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountKind {
    /// Integer flows (static Kostant partition function).
    Kpf,
    /// Integer dynamic flows.
    Kdyn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "thm-cry")]
    ThmCry,
    #[value(name = "conj-cryd")]
    ConjCryd,
    #[value(name = "conj-cryc")]
    ConjCryc,
    #[value(name = "thm-volD")]
    ThmVolD,
    #[value(name = "thm-decomp")]
    ThmDecomp,
    #[value(name = "thm-bijection")]
    ThmBijection,
    #[value(name = "morris")]
    Morris,
    #[value(name = "thmC")]
    ThmC,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normalized volume of a flow polytope.
    Volume {
        /// Built-in polytope family (needs --n).
        #[arg(long, value_enum)]
        family: Option<Family>,
        /// Family index, e.g. 4 for CRY_4 or CRYC_5.
        #[arg(long)]
        n: Option<usize>,
        /// Graph by name (fig1, fig2, counterexample-volD, family-g:A,...,
        /// cry:N, cryd:N, cryc:N) or a JSON file path.
        #[arg(long)]
        graph: Option<String>,
        /// Comma-separated netflow, e.g. 2,0,0.
        #[arg(long)]
        netflow: Option<String>,
        #[arg(long, value_enum, default_value = "ehrhart")]
        method: Method,
        /// Loop placement for type C graphs.
        #[arg(long, value_enum, default_value = "all")]
        loop_range: LoopRangeArg,
    },
    /// Print an exact flow count.
    Count {
        #[arg(value_enum)]
        kind: CountKind,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        netflow: String,
        #[arg(long, value_enum, default_value = "all")]
        loop_range: LoopRangeArg,
    },
    /// Run a verification suite and report each claim.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Upper bound on the suite's size parameter.
        #[arg(long)]
        n: Option<usize>,
        /// Corpus selector for thm-volD (only "loopless" exists).
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        /// Worker threads for independent claims.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Evaluate a constant-term expression, e.g.
    /// `CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1`.
    Ct { expr: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Volume {
            family,
            n,
            graph,
            netflow,
            method,
            loop_range,
        } => {
            let (g, a, is_cryc) = resolve_target(family, n, graph, netflow, loop_range.into())?;
            let volume = match method {
                Method::Ehrhart => {
                    normalized_volume_ehrhart(&g, &a).map_err(|e| e.to_string())?
                }
                Method::Reduction => volume_via_reduction(&g, &a).map_err(|e| e.to_string())?,
                Method::Dynamic => {
                    if a != apex_netflow(g.vertex_count()) {
                        return Err(
                            "the dynamic method applies to the netflow (2, 0, ..., 0)".into()
                        );
                    }
                    if is_cryc {
                        // Loops rule out the direct dynamic route; the family
                        // decomposition gives the volume as the dynamic count
                        // at the staircase netflow.
                        kdyn(&g, &staircase_netflow(g.vertex_count()))
                    } else {
                        volume_via_dynamic_kpf(&g).map_err(|e| e.to_string())?
                    }
                }
            };
            println!("{volume}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Count {
            kind,
            graph,
            netflow,
            loop_range,
        } => {
            let g = named::load_graph(&graph, loop_range.into())?;
            let a = named::parse_netflow(&netflow)?;
            if a.len() != g.vertex_count() {
                return Err(format!(
                    "netflow length {} does not match vertex count {}",
                    a.len(),
                    g.vertex_count()
                ));
            }
            let count = match kind {
                CountKind::Kpf => kpf(&g, &a),
                CountKind::Kdyn => kdyn(&g, &a),
            };
            println!("{count}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            corpus,
            format,
            jobs,
        } => {
            if let Some(corpus) = &corpus {
                if corpus != "loopless" {
                    return Err(format!("unknown corpus {corpus:?}; only \"loopless\" exists"));
                }
            }
            let reports = verify::run_suite(suite, n, jobs.max(1));
            let all_ok = reports.iter().all(|r| r.ok());
            match format {
                Format::Tsv => {
                    println!("{}", verify::HEADER_TSV);
                    for r in &reports {
                        println!("{}", r.to_tsv());
                    }
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&reports).expect("report serialization")
                    );
                }
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Ct { expr } => {
            let parsed = parse_ct_expression(&expr).map_err(|e| e.to_string())?;
            let value = iterated_ct(&parsed).map_err(|e| e.to_string())?;
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Builds the (graph, netflow) pair from either a family or an explicit
/// graph spec; the flag says whether it is the loop family, whose dynamic
/// route goes through the staircase count.
fn resolve_target(
    family: Option<Family>,
    n: Option<usize>,
    graph: Option<String>,
    netflow: Option<String>,
    loops: LoopRange,
) -> Result<(SignedGraph, Vec<i64>, bool), String> {
    match (family, graph) {
        (Some(fam), None) => {
            let n = n.ok_or("--family needs --n")?;
            if n < 1 {
                return Err("--n must be at least 1".into());
            }
            let m = n + 1;
            let err = |e: cryvol_core::Error| e.to_string();
            Ok(match fam {
                Family::Cry => (
                    complete_type_a(m).map_err(err)?,
                    source_sink_netflow(m),
                    false,
                ),
                Family::Cryd => (complete_type_d(m).map_err(err)?, apex_netflow(m), false),
                Family::Cryc => (
                    complete_type_c(m, loops).map_err(err)?,
                    apex_netflow(m),
                    true,
                ),
            })
        }
        (None, Some(spec)) => {
            let g = named::load_graph(&spec, loops)?;
            let a = match netflow {
                Some(s) => named::parse_netflow(&s)?,
                None => return Err("--graph needs --netflow".into()),
            };
            if a.len() != g.vertex_count() {
                return Err(format!(
                    "netflow length {} does not match vertex count {}",
                    a.len(),
                    g.vertex_count()
                ));
            }
            let is_cryc = spec.starts_with("cryc");
            Ok((g, a, is_cryc))
        }
        (Some(_), Some(_)) => Err("give either --family or --graph, not both".into()),
        (None, None) => Err("give either --family or --graph".into()),
    }
}
