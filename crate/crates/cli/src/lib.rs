//! The `pclf` command line: loads graphs and matrix sets from JSON, runs an
//! analysis and writes a report.
//!
//! Exit codes: 0 on success, 1 when the analysis answers negatively (a graph
//! that is not path-complete, a failed simulation), 2 on input errors.

mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use pclf_core::graph::{
    check_assumption_minimal, find_simulation, is_path_complete, path_complete_components,
    strongly_connected_components, LabeledGraph,
};
use pclf_core::io::{graph_from_json, matrices_from_json};
use pclf_core::jsr::{brute_force_bounds, hierarchy_with, HierarchyConfig, DEFAULT_MAX_NODES};
use pclf_core::lifts::de_bruijn;
use pclf_core::lp::rho_bound;
use pclf_core::{Flavor, LiftKind, MatrixSet};

pub use render::{render_report, sig6, BoundReport, CheckReport, Format, OracleReport, Report, UnsupportedFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "pclf", version, about = "Path-complete Lyapunov graphs and copositive JSR bounds")]
struct Cli {
    /// Output format: text, json or csv (hierarchy defaults to csv).
    #[arg(long, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Path-completeness, completeness flags, components and minimality.
    Check { graph: PathBuf },
    /// Apply a lift: sum:T, max, min, comp, backcomp or debruijn:M,l.
    Lift {
        /// Input graph; not needed for debruijn.
        graph: Option<PathBuf>,
        #[arg(long)]
        kind: String,
    },
    /// Search for a simulation of H by G.
    Simulate { g: PathBuf, h: PathBuf },
    /// Bisection bound on the decay rate for one template.
    Bound {
        graph: PathBuf,
        matrices: PathBuf,
        #[arg(long)]
        flavor: Flavor,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// De Bruijn hierarchy of primal and dual bounds.
    Hierarchy {
        matrices: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
        #[arg(long, default_value_t = 8)]
        lmax: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Largest De Bruijn graph allowed.
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
    },
    /// Bounds from all matrix products up to a given length.
    Oracle {
        matrices: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    graph_from_json(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_matrices(path: &Path) -> Result<MatrixSet, Failure> {
    matrices_from_json(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Parses `debruijn:M,l`.
fn parse_de_bruijn(kind: &str) -> Option<Result<(u32, usize), Failure>> {
    let rest = kind.strip_prefix("debruijn:")?;
    let parsed = rest
        .split_once(',')
        .and_then(|(m, l)| Some((m.trim().parse().ok()?, l.trim().parse().ok()?)))
        .ok_or_else(|| Failure(format!("bad lift kind `{kind}`; expected debruijn:M,l")));
    Some(parsed)
}

fn run(command: Command, err: &mut dyn Write) -> Result<(Report, i32), Failure> {
    match command {
        Command::Check { graph } => {
            let g = load_graph(&graph)?;
            let path_complete = is_path_complete(&g);
            let (complete, co_complete) = g.completeness_flags();
            let components = strongly_connected_components(&g)
                .into_iter()
                .map(|c| c.into_iter().map(|i| g.nodes()[i].clone()).collect())
                .collect();
            let path_complete_components =
                path_complete_components(&g).into_iter().map(|c| c.nodes().to_vec()).collect();
            let report = CheckReport {
                path_complete,
                complete,
                co_complete,
                components,
                path_complete_components,
                minimality: check_assumption_minimal(&g),
            };
            let code = if path_complete { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((Report::Check(report), code))
        }
        Command::Lift { graph, kind } => {
            let lifted = match parse_de_bruijn(&kind) {
                Some(params) => {
                    let (m, l) = params?;
                    if graph.is_some() {
                        let _ = writeln!(err, "note: the input graph is not used by the De Bruijn construction");
                    }
                    de_bruijn(m, l)?
                }
                None => {
                    let kind: LiftKind = kind.parse()?;
                    let path = graph.ok_or_else(|| Failure(format!("the {kind} lift needs an input graph")))?;
                    let g = load_graph(&path)?;
                    if !is_path_complete(&g) {
                        let _ = writeln!(err, "warning: input graph is not path-complete");
                    }
                    kind.apply(&g)?
                }
            };
            Ok((Report::Graph(lifted), EXIT_OK))
        }
        Command::Simulate { g, h } => {
            let (g, h) = (load_graph(&g)?, load_graph(&h)?);
            let sim = find_simulation(&g, &h)?;
            let code = if sim.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((Report::Simulation(sim), code))
        }
        Command::Bound { graph, matrices, flavor, tol } => {
            let g = load_graph(&graph)?;
            let a = load_matrices(&matrices)?;
            let path_complete = is_path_complete(&g);
            if !path_complete {
                let _ = writeln!(err, "warning: graph is not path-complete; the bound does not certify the JSR");
            }
            let bound = rho_bound(&g, &a, flavor, tol)?;
            let code = if path_complete { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((Report::Bound(BoundReport { flavor, tol, path_complete, bound }), code))
        }
        Command::Hierarchy { matrices, eps, lmax, tol, max_nodes } => {
            let a = load_matrices(&matrices)?;
            let report = hierarchy_with(&a, eps, lmax, HierarchyConfig { tol, max_nodes })?;
            Ok((Report::Hierarchy(report), EXIT_OK))
        }
        Command::Oracle { matrices, depth } => {
            let a = load_matrices(&matrices)?;
            let (lower, upper) = brute_force_bounds(&a, depth)?;
            Ok((Report::Oracle(OracleReport { depth, lower, upper }), EXIT_OK))
        }
    }
}

/// Runs one command line. Reports go to `out`, diagnostics to `err`; the
/// return value is the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let default_format = match cli.command {
        Command::Hierarchy { .. } => Format::Csv,
        _ => Format::Text,
    };
    let format = cli.format.unwrap_or(default_format);
    match run(cli.command, err) {
        Ok((report, code)) => match render_report(&report, format) {
            Ok(text) => {
                if let Err(e) = out.write_all(text.as_bytes()) {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_INPUT;
                }
                code
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_INPUT
            }
        },
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
