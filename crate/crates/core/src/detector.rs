//! The vulnerability decision procedure.
//!
//! While the pruned net has a cycle, an s-minimal cycle is analysed until it
//! yields redundant edges (deleted, then the net is pruned again) or an
//! embedding of the Wheatstone graph. An acyclic net is vulnerable iff it is
//! not series-parallel.

use serde::Serialize;

use crate::cycle_analysis::{analyze, s_minimal_cycle, Classification, CycleContext, CycleOutcome};
use crate::error::{DetectError, InvariantError};
use crate::net::{make_st_connected, st_reachable, EdgeId, Net, NodeId, Path};
use crate::oracle::has_w_embedding_bounded;
use crate::ttsp::is_ttsp;

pub const DEFAULT_WITNESS_BOUND: usize = 16;

/// An st-embedding of the Wheatstone graph `a->b, a->c, b->c, b->d, c->d`:
/// branch nodes, one path per pattern edge, and the tails `s ~> a`, `d ~> t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WEmbedding {
    pub a: NodeId,
    pub b: NodeId,
    pub c: NodeId,
    pub d: NodeId,
    pub ab: Path,
    pub ac: Path,
    pub bc: Path,
    pub bd: Path,
    pub cd: Path,
    pub source_tail: Path,
    pub target_tail: Path,
}

impl WEmbedding {
    /// The seven paths with their required endpoints.
    pub fn paths(&self) -> [(&Path, NodeId, NodeId); 7] {
        [
            (&self.ab, self.a, self.b),
            (&self.ac, self.a, self.c),
            (&self.bc, self.b, self.c),
            (&self.bd, self.b, self.d),
            (&self.cd, self.c, self.d),
            (&self.source_tail, self.source_tail.start(), self.a),
            (&self.target_tail, self.d, self.target_tail.end()),
        ]
    }
}

/// Checks an embedding against `net` edge by edge.
pub fn validate_embedding(net: &Net, w: &WEmbedding) -> bool {
    let (s, t) = (net.source(), net.target());
    if w.source_tail.start() != s || w.target_tail.end() != t {
        return false;
    }
    let branch = [w.a, w.b, w.c, w.d];
    for i in 0..4 {
        for j in i + 1..4 {
            if branch[i] == branch[j] {
                return false;
            }
        }
    }
    if [w.b, w.c, w.d].contains(&s) || [w.a, w.b, w.c].contains(&t) {
        return false;
    }
    let mut seen = vec![false; net.node_capacity()];
    for v in [w.a, w.b, w.c, w.d, s, t] {
        if !net.has_node(v) {
            return false;
        }
        seen[v] = true;
    }
    for (p, from, to) in w.paths() {
        if !p.is_valid_in(net) || !p.is_simple() || p.start() != from || p.end() != to {
            return false;
        }
        for &v in p.interior() {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    // A branch path may not be empty, except that the tails may be.
    [&w.ab, &w.ac, &w.bc, &w.bd, &w.cd]
        .iter()
        .all(|p| !p.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeletedEdge {
    pub iteration: usize,
    pub edge: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
}

/// Counters describing one run of the procedure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Cycles analysed from scratch (outer loop).
    pub outer: usize,
    /// Cycle analyses in total (inner loop).
    pub inner: usize,
    /// Longest run of consecutive analyses on shrinking cycles.
    pub max_inner: usize,
    pub one_entry_or_exit: usize,
    pub splittable: usize,
    pub non_splittable: usize,
    pub smaller_cycles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub vulnerable: bool,
    pub witness: Option<WEmbedding>,
    pub deleted_edges: Vec<DeletedEdge>,
    pub iterations: Stats,
}

/// Decides whether `net` is vulnerable to the Braess paradox.
pub fn is_vulnerable(net: &Net) -> Result<Verdict, DetectError> {
    is_vulnerable_with_bound(net, DEFAULT_WITNESS_BOUND)
}

/// As [`is_vulnerable`]; a witness for an acyclic non-series-parallel
/// remainder is searched only when it has at most `witness_bound` nodes.
pub fn is_vulnerable_with_bound(net: &Net, witness_bound: usize) -> Result<Verdict, DetectError> {
    let mut stats = Stats::default();
    let mut deleted = Vec::new();
    let mut g = make_st_connected(net);
    if !st_reachable(&g) {
        return Ok(Verdict {
            vulnerable: false,
            witness: None,
            deleted_edges: deleted,
            iterations: stats,
        });
    }
    let edge_budget = net.edge_count() + 1;
    while let Some((cycle, eps_star)) = s_minimal_cycle(&g) {
        stats.outer += 1;
        if stats.outer > edge_budget {
            return Err(
                InvariantError("outer loop ran more often than there are edges".into()).into(),
            );
        }
        let mut ctx = CycleContext::new(&g, cycle, eps_star)?;
        let mut run = 0;
        let removed = loop {
            run += 1;
            stats.inner += 1;
            stats.max_inner = stats.max_inner.max(run);
            if run > g.node_count() + 1 {
                return Err(InvariantError("cycle analysis did not converge".into()).into());
            }
            let (class, outcome) = analyze(&g, &ctx)?;
            match class {
                Classification::OneEntry(_) | Classification::OneExit(_) => {
                    stats.one_entry_or_exit += 1
                }
                Classification::Splittable(_) => stats.splittable += 1,
                Classification::NonSplittable => stats.non_splittable += 1,
            }
            match outcome {
                CycleOutcome::RedundantEdges(edges) => break edges,
                CycleOutcome::Embedding(w) => {
                    return Ok(Verdict {
                        vulnerable: true,
                        witness: Some(*w),
                        deleted_edges: deleted,
                        iterations: stats,
                    });
                }
                CycleOutcome::SmallerCycle(c) => {
                    stats.smaller_cycles += 1;
                    ctx = CycleContext::new(&g, c, eps_star)?;
                }
            }
        };
        if removed.is_empty() {
            return Err(InvariantError("cycle analysis returned no redundant edge".into()).into());
        }
        for &e in &removed {
            let edge = g
                .edge(e)
                .ok_or(InvariantError(format!("edge {e} already deleted")))?;
            deleted.push(DeletedEdge {
                iteration: stats.outer,
                edge: e,
                tail: edge.tail,
                head: edge.head,
            });
        }
        g = make_st_connected(&g.without_edges(removed));
    }
    let vulnerable = !is_ttsp(&g)?;
    let witness = if vulnerable {
        find_witness_acyclic_bounded(&g, witness_bound)
    } else {
        None
    };
    Ok(Verdict {
        vulnerable,
        witness,
        deleted_edges: deleted,
        iterations: stats,
    })
}

/// A witness for an acyclic, st-connected, non-series-parallel net, found by
/// exhaustive search when the net has at most [`DEFAULT_WITNESS_BOUND`] nodes.
pub fn find_witness_acyclic(net: &Net) -> Option<WEmbedding> {
    find_witness_acyclic_bounded(net, DEFAULT_WITNESS_BOUND)
}

pub fn find_witness_acyclic_bounded(net: &Net, bound: usize) -> Option<WEmbedding> {
    has_w_embedding_bounded(net, bound).ok().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::*;

    fn identity() -> WEmbedding {
        let net = wheatstone();
        let p = |e: EdgeId| Path::from_edges(&net, net.tail(e), &[e]).unwrap();
        WEmbedding {
            a: 0,
            b: 1,
            c: 2,
            d: 3,
            ab: p(0),
            ac: p(1),
            bc: p(2),
            bd: p(3),
            cd: p(4),
            source_tail: Path::trivial(0),
            target_tail: Path::trivial(3),
        }
    }

    #[test]
    fn identity_embedding_validates() {
        assert!(validate_embedding(&wheatstone(), &identity()));
    }

    #[test]
    fn shared_interior_rejected() {
        // ab and cd both routed through x = 4.
        let net = Net::from_edges(
            5,
            [(0, 4), (4, 1), (0, 2), (1, 2), (1, 3), (2, 4), (4, 3)],
            0,
            3,
        )
        .unwrap();
        let p = |start, es: &[EdgeId]| Path::from_edges(&net, start, es).unwrap();
        let w = WEmbedding {
            a: 0,
            b: 1,
            c: 2,
            d: 3,
            ab: p(0, &[0, 1]),
            ac: p(0, &[2]),
            bc: p(1, &[3]),
            bd: p(1, &[4]),
            cd: p(2, &[5, 6]),
            source_tail: Path::trivial(0),
            target_tail: Path::trivial(3),
        };
        assert!(!validate_embedding(&net, &w));
    }

    #[test]
    fn fixture_verdicts() {
        assert!(is_vulnerable(&wheatstone()).unwrap().vulnerable);
        for net in [diamond(), series2(), fig6a(), fig6b(), fig6c()] {
            let v = is_vulnerable(&net).unwrap();
            assert!(!v.vulnerable, "{net:?}");
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn wheatstone_with_back_edge() {
        let net =
            Net::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)], 0, 3).unwrap();
        let v = is_vulnerable(&net).unwrap();
        assert!(v.vulnerable);
        assert!(validate_embedding(&net, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn acyclic_witness() {
        let w = find_witness_acyclic(&wheatstone()).unwrap();
        assert_eq!(w, identity());
        // b -> d subdivided through node 4.
        let net =
            Net::from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 4), (4, 3), (2, 3)], 0, 3).unwrap();
        let w = find_witness_acyclic(&net).unwrap();
        assert_eq!(w.bd.len(), 2);
    }

    #[test]
    fn no_st_path() {
        let net = Net::from_edges(3, [(1, 0), (0, 2), (2, 0)], 0, 1).unwrap();
        let v = is_vulnerable(&net).unwrap();
        assert!(!v.vulnerable && v.deleted_edges.is_empty());
    }

    #[test]
    fn fig6_deletions() {
        let v = is_vulnerable(&fig6a()).unwrap();
        assert_eq!(v.deleted_edges.len(), 1);
        assert_eq!(v.deleted_edges[0].edge, 3);
    }

    #[test]
    fn edge_splitter_endpoint_is_not_a_chord_target() {
        let net = Net::from_edges(
            8,
            [
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 1),
                (2, 4),
                (0, 1),
                (0, 2),
                (4, 7),
                (5, 7),
            ],
            0,
            7,
        )
        .unwrap();
        assert!(!crate::oracle::brute_force_vulnerable(&net).unwrap());
        assert!(!is_vulnerable(&net).unwrap().vulnerable);
    }

    // Seeds whose nets reach the rarely taken crossing branches of the
    // cycle analysis.
    #[test]
    fn rare_branches_run_clean() {
        use crate::random::{random_cyclic_net, rng};
        for (seed, nodes, edges) in [
            (102550, 14, 30),
            (134029, 14, 30),
            (164594, 14, 30),
            (185025, 14, 30),
            (11800, 20, 40),
            (118525, 20, 40),
            (161587, 20, 40),
        ] {
            let net = random_cyclic_net(&mut rng(seed), nodes, edges);
            let v = is_vulnerable(&net).unwrap();
            if let Some(w) = &v.witness {
                assert!(validate_embedding(&net, w));
            }
        }
    }
}
