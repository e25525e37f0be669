//! Braess-paradox vulnerability of directed multigraphs.
//!
//! A net `(G, s, t)` is vulnerable when some demand, latency function and
//! subnet make the equilibrium latency drop after edges are removed. This
//! crate decides vulnerability in polynomial time by searching for an
//! st-embedding of the Wheatstone graph, using cycle analysis to discard
//! edges that lie on no simple st-path and series-parallel recognition once
//! the net is acyclic.
//!
//! Alongside the decision procedure it ships exhaustive reference routines
//! ([`oracle`]), a witness latency assignment with exact equilibrium
//! latencies ([`wardrop`]), and a text format for nets ([`netfile`]).

pub mod cli;
pub mod cycle_analysis;
pub mod detector;
pub mod error;
pub mod net;
pub mod netfile;
pub mod oracle;
pub mod parallel;
pub mod random;
pub mod ttsp;
pub mod wardrop;

pub use detector::{is_vulnerable, validate_embedding, Verdict, WEmbedding};
pub use net::{Cycle, Edge, EdgeId, Net, NodeId, Path};
