//! Command implementations behind the `braess` binary.
//!
//! Each command returns the text for stdout or a [`CliError`] that carries
//! its exit code: 2 for bad input or usage, 3 for a broken internal
//! invariant, 4 when an exhaustive routine hits its guard.

use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::detector::{is_vulnerable_with_bound, Verdict, DEFAULT_WITNESS_BOUND};
use crate::error::{DetectError, OracleError, ParseError};
use crate::net::{Edge, Net, NodeId};
use crate::netfile::{emit, parse_file, to_dot};
use crate::oracle;
use crate::parallel;
use crate::wardrop::{build_latencies, equilibrium, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "braess",
    version,
    about = "Decide Braess-paradox vulnerability of st-nets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide vulnerability of the net in FILE.
    Check {
        file: PathBuf,
        /// Also search for a witness when the net reduces to an acyclic one.
        #[arg(long)]
        witness: bool,
        /// Attach the equilibrium latencies at demand 1 for the witness.
        #[arg(long)]
        demo: bool,
        /// Print a Graphviz rendering instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Check every ordered pair of distinct nodes as terminals.
    AllPairs { file: PathBuf },
    /// Run an exhaustive reference routine.
    Oracle {
        #[arg(value_enum)]
        query: OracleQuery,
        file: PathBuf,
    },
    /// Print the two-copy irredundancy gadget for EDGE.
    Gadget { file: PathBuf, edge: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleQuery {
    Paths,
    Irr,
    Mis,
    Wembed,
    Vulnerable,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Invariant(#[from] crate::error::InvariantError),
    #[error(transparent)]
    Oracle(OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Oracle(OracleError::ForbiddenGadgetEdge { .. } | OracleError::Net(_)) => 2,
            CliError::Oracle(_) => 4,
        }
    }
}

impl From<DetectError> for CliError {
    fn from(e: DetectError) -> Self {
        match e {
            DetectError::Invariant(i) => CliError::Invariant(i),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Oracle(e)
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &FsPath) -> Result<Net, CliError> {
    let text = read(path)?;
    let parse_err = |source| CliError::Parse {
        path: path.display().to_string(),
        source,
    };
    parse_file(&text)
        .and_then(|f| f.to_net())
        .map_err(parse_err)
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Check {
            file,
            witness,
            demo,
            dot,
        } => cmd_check(&load(file)?, *witness, *demo, *dot),
        Command::AllPairs { file } => {
            let text = read(file)?;
            let f = parse_file(&text).map_err(|source| CliError::Parse {
                path: file.display().to_string(),
                source,
            })?;
            let nodes: Vec<NodeId> = f.nodes.iter().copied().collect();
            let base = match (f.source, f.target) {
                (Some(s), Some(t)) => f.to_net_with(s, t),
                _ if nodes.len() >= 2 => f.to_net_with(nodes[0], nodes[1]),
                _ => return Ok(pretty(&all_pairs_report(&[], None))),
            }
            .map_err(|source| CliError::Parse {
                path: file.display().to_string(),
                source,
            })?;
            cmd_check_all_pairs(&base)
        }
        Command::Oracle { query, file } => cmd_oracle(&load(file)?, *query),
        Command::Gadget { file, edge } => cmd_gadget(&load(file)?, *edge),
    }
}

/// JSON verdict for one net; `--demo` adds the equilibrium at demand 1.
pub fn cmd_check(net: &Net, witness: bool, demo: bool, dot: bool) -> Result<String, CliError> {
    let bound = if witness || demo || dot {
        DEFAULT_WITNESS_BOUND
    } else {
        0
    };
    let verdict = is_vulnerable_with_bound(net, bound)?;
    if dot {
        return Ok(to_dot(net, verdict.witness.as_ref()));
    }
    let mut out = serde_json::to_value(&verdict).expect("serializable");
    if demo {
        let report = match &verdict.witness {
            Some(w) => {
                let lat = build_latencies(net, w).map_err(|e| CliError::Usage(e.to_string()))?;
                let r =
                    equilibrium(net, w, &lat, Rational::from_integer(1)).map_err(|e| match e {
                        crate::error::WardropError::Invariant(i) => CliError::Invariant(i),
                        other => CliError::Usage(other.to_string()),
                    })?;
                json!({ "latencies": lat, "report": r })
            }
            None => Value::Null,
        };
        out["equilibrium"] = report;
    }
    Ok(pretty(&out))
}

fn all_pairs_report(results: &[((NodeId, NodeId), Verdict)], first: Option<usize>) -> Value {
    let found = first.map(|i| &results[i]);
    json!({
        "any_vulnerable": found.is_some(),
        "pair": found.map(|((s, t), _)| json!({ "s": s, "t": t })),
        "witness": found.and_then(|(_, v)| v.witness.as_ref()),
        "pairs_checked": results.len(),
        "vulnerable_pairs": results
            .iter()
            .filter(|(_, v)| v.vulnerable)
            .map(|((s, t), _)| json!([s, t]))
            .collect::<Vec<_>>(),
    })
}

/// Runs the detector for every ordered pair of distinct nodes of `net`.
pub fn cmd_check_all_pairs(net: &Net) -> Result<String, CliError> {
    let nodes: Vec<NodeId> = net.nodes().collect();
    let pairs: Vec<(NodeId, NodeId)> = nodes
        .iter()
        .flat_map(|&s| nodes.iter().filter(move |&&t| t != s).map(move |&t| (s, t)))
        .collect();
    let verdicts = parallel::map(&pairs, |&(s, t)| {
        let g = net.with_terminals(s, t).map_err(DetectError::from)?;
        is_vulnerable_with_bound(&g, DEFAULT_WITNESS_BOUND)
    });
    let mut results = Vec::with_capacity(pairs.len());
    for (pair, v) in pairs.into_iter().zip(verdicts) {
        results.push((pair, v?));
    }
    let first = results.iter().position(|(_, v)| v.vulnerable);
    Ok(pretty(&all_pairs_report(&results, first)))
}

fn edge_list(net: &Net) -> Vec<Edge> {
    net.edges().collect()
}

pub fn cmd_oracle(net: &Net, query: OracleQuery) -> Result<String, CliError> {
    let out = match query {
        OracleQuery::Paths => {
            let paths = oracle::enumerate_simple_st_paths(net)?;
            json!({
                "count": paths.len(),
                "paths": paths.iter().map(|p| p.edges().to_vec()).collect::<Vec<_>>(),
            })
        }
        OracleQuery::Irr => {
            let irr = oracle::irredundant_edges(net)?;
            let redundant: Vec<usize> = net
                .edges()
                .map(|e| e.id)
                .filter(|e| !irr.contains(e))
                .collect();
            json!({
                "irredundant": redundant.is_empty(),
                "irredundant_edges": irr,
                "redundant_edges": redundant,
            })
        }
        OracleQuery::Mis => {
            let m = oracle::mis(net)?;
            json!({
                "nodes": m.nodes().collect::<Vec<_>>(),
                "edges": edge_list(&m),
            })
        }
        OracleQuery::Wembed => {
            let w = oracle::has_w_embedding(&crate::net::make_st_connected(net))?;
            json!({ "embedding": w })
        }
        OracleQuery::Vulnerable => json!({ "vulnerable": oracle::brute_force_vulnerable(net)? }),
    };
    Ok(pretty(&out))
}

pub fn cmd_gadget(net: &Net, edge: usize) -> Result<String, CliError> {
    let (g, lay) = oracle::gadget_gstar(net, edge)?;
    let e = net.edge(edge).expect("checked by gadget_gstar");
    let n = lay.n;
    let header = vec![
        format!(
            "irredundancy gadget for edge {edge} ({} -> {})",
            e.tail, e.head
        ),
        format!("first copy x' = x, second copy x'' = {n} + x"),
        format!(
            "s* = {}, z' = {}, z'' = {}, a' = {}, a'' = {}, r' = {}, r'' = {}, t* = {}",
            lay.s_star(),
            lay.z_prime(),
            lay.z_double_prime(),
            lay.a_prime(),
            lay.a_double_prime(),
            lay.r_prime(),
            lay.r_double_prime(),
            lay.t_star()
        ),
    ];
    Ok(emit(&g, &header))
}
