//! Exhaustive reference procedures for small nets.
//!
//! Everything here is exponential and guarded: path enumeration stops at a
//! path-count cap and the embedding search refuses nets above a node bound.
//! The module also builds the two-copy gadget that reduces single-edge
//! irredundancy to whole-net irredundancy.

use std::collections::BTreeSet;

use crate::detector::WEmbedding;
use crate::error::OracleError;
use crate::net::{make_st_connected, EdgeId, Net, NodeId, Path};

pub const DEFAULT_PATH_CAP: usize = 1_000_000;
pub const DEFAULT_EMBEDDING_BOUND: usize = 10;

/// Every simple st-path, as found by depth-first backtracking.
pub fn enumerate_simple_st_paths(net: &Net) -> Result<Vec<Path>, OracleError> {
    enumerate_simple_st_paths_capped(net, DEFAULT_PATH_CAP)
}

pub fn enumerate_simple_st_paths_capped(net: &Net, cap: usize) -> Result<Vec<Path>, OracleError> {
    let mut out = Vec::new();
    let mut on_path = vec![false; net.node_capacity()];
    let mut cur = Path::trivial(net.source());
    on_path[net.source()] = true;
    let mut visit = |p: &Path| -> Result<(), OracleError> {
        if out.len() >= cap {
            return Err(OracleError::PathExplosion { cap });
        }
        out.push(p.clone());
        Ok(())
    };
    dfs_paths(net, net.target(), &mut cur, &mut on_path, &mut visit)?;
    Ok(out)
}

fn dfs_paths<F>(
    net: &Net,
    target: NodeId,
    cur: &mut Path,
    on_path: &mut [bool],
    visit: &mut F,
) -> Result<(), OracleError>
where
    F: FnMut(&Path) -> Result<(), OracleError>,
{
    let u = cur.end();
    if u == target {
        return visit(cur);
    }
    for &e in net.out_edges(u) {
        let v = net.head(e);
        if on_path[v] {
            continue;
        }
        on_path[v] = true;
        let mut next = cur.clone();
        next.push(e, v);
        let r = dfs_paths(net, target, &mut next, on_path, visit);
        on_path[v] = false;
        r?;
    }
    Ok(())
}

/// Edges lying on at least one simple st-path.
pub fn irredundant_edges(net: &Net) -> Result<BTreeSet<EdgeId>, OracleError> {
    Ok(enumerate_simple_st_paths(net)?
        .iter()
        .flat_map(|p| p.edges().iter().copied())
        .collect())
}

/// The maximal irredundant subnet: redundant edges removed, then nodes left
/// without incident edges dropped.
pub fn mis(net: &Net) -> Result<Net, OracleError> {
    let keep = irredundant_edges(net)?;
    Ok(net
        .retain_edges(|e| keep.contains(&e.id))
        .without_isolated_nodes())
}

/// Decides irredundancy of one edge `u -> v` by searching for node-disjoint
/// paths `s ~> u` and `v ~> t`, without enumerating st-paths.
pub fn edge_irredundant_by_disjoint_paths(net: &Net, edge: EdgeId) -> Result<bool, OracleError> {
    let e = net
        .edge(edge)
        .ok_or(crate::error::NetError::UnknownEdge(edge))?;
    let (s, t) = (net.source(), net.target());
    if e.tail == e.head || e.head == s || e.tail == t {
        return Ok(false);
    }
    let mut used = vec![false; net.node_capacity()];
    used[s] = true;
    Ok(extend_prefix(net, s, e.tail, e.head, t, &mut used))
}

// Grows a simple path from `cur` towards `goal` that avoids `t`; at
// `goal`, checks that `resume` reaches `t` avoiding the prefix.
fn extend_prefix(
    net: &Net,
    cur: NodeId,
    goal: NodeId,
    resume: NodeId,
    t: NodeId,
    used: &mut [bool],
) -> bool {
    if cur == goal {
        return !used[resume] && reaches_avoiding(net, resume, t, used);
    }
    if !reaches_avoiding_from(net, cur, goal, used) || !reaches_avoiding(net, resume, t, used) {
        return false;
    }
    for &e in net.out_edges(cur) {
        let v = net.head(e);
        // A simple st-path meets t only at its end.
        if used[v] || v == t {
            continue;
        }
        used[v] = true;
        let found = extend_prefix(net, v, goal, resume, t, used);
        used[v] = false;
        if found {
            return true;
        }
    }
    false
}

fn reaches_avoiding(net: &Net, from: NodeId, to: NodeId, used: &[bool]) -> bool {
    if used[from] {
        return false;
    }
    reaches_avoiding_from(net, from, to, used)
}

// `from` itself may be marked; every other visited node must be unmarked.
fn reaches_avoiding_from(net: &Net, from: NodeId, to: NodeId, used: &[bool]) -> bool {
    if from == to {
        return true;
    }
    let mut seen = vec![false; net.node_capacity()];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &e in net.out_edges(u) {
            let v = net.head(e);
            if v == to {
                return true;
            }
            if !seen[v] && !used[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

/// True iff every edge lies on a simple st-path, checked edge by edge.
pub fn is_irredundant(net: &Net) -> Result<bool, OracleError> {
    for e in net.edges() {
        if !edge_irredundant_by_disjoint_paths(net, e.id)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive search for an st-embedding of the Wheatstone graph, refusing
/// nets with more than [`DEFAULT_EMBEDDING_BOUND`] nodes.
pub fn has_w_embedding(net: &Net) -> Result<Option<WEmbedding>, OracleError> {
    has_w_embedding_bounded(net, DEFAULT_EMBEDDING_BOUND)
}

pub fn has_w_embedding_bounded(net: &Net, bound: usize) -> Result<Option<WEmbedding>, OracleError> {
    let nodes: Vec<NodeId> = net.nodes().collect();
    if nodes.len() > bound {
        return Err(OracleError::TooManyNodes {
            nodes: nodes.len(),
            bound,
        });
    }
    let (s, t) = (net.source(), net.target());
    let closure = reachability(net);
    for &a in &nodes {
        if a == t || !closure[s][a] {
            continue;
        }
        for &d in &nodes {
            if d == s || d == a || !closure[d][t] || !closure[a][d] {
                continue;
            }
            for &b in &nodes {
                if [a, d, s, t].contains(&b) || !closure[a][b] || !closure[b][d] {
                    continue;
                }
                for &c in &nodes {
                    if [a, b, d, s, t].contains(&c)
                        || !closure[b][c]
                        || !closure[c][d]
                        || !closure[a][c]
                    {
                        continue;
                    }
                    if let Some(w) = embed_at(net, [a, b, c, d]) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn reachability(net: &Net) -> Vec<Vec<bool>> {
    let n = net.node_capacity();
    let mut closure = vec![vec![false; n]; n];
    for v in net.nodes() {
        closure[v][v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &e in net.out_edges(u) {
                let w = net.head(e);
                if !closure[v][w] {
                    closure[v][w] = true;
                    stack.push(w);
                }
            }
        }
    }
    closure
}

fn embed_at(net: &Net, [a, b, c, d]: [NodeId; 4]) -> Option<WEmbedding> {
    let (s, t) = (net.source(), net.target());
    let mut used = vec![false; net.node_capacity()];
    for v in [a, b, c, d, s, t] {
        used[v] = true;
    }
    let mut segments = vec![(a, b), (b, c), (c, d), (a, c), (b, d)];
    if s != a {
        segments.push((s, a));
    }
    if d != t {
        segments.push((d, t));
    }
    let mut found = Vec::with_capacity(segments.len());
    if !route_all(net, &segments, &mut used, &mut found) {
        return None;
    }
    let mut it = found.into_iter();
    let ab = it.next()?;
    let bc = it.next()?;
    let cd = it.next()?;
    let ac = it.next()?;
    let bd = it.next()?;
    let source_tail = if s != a { it.next()? } else { Path::trivial(s) };
    let target_tail = if d != t { it.next()? } else { Path::trivial(t) };
    Some(WEmbedding {
        a,
        b,
        c,
        d,
        ab,
        ac,
        bc,
        bd,
        cd,
        source_tail,
        target_tail,
    })
}

fn route_all(
    net: &Net,
    segments: &[(NodeId, NodeId)],
    used: &mut [bool],
    found: &mut Vec<Path>,
) -> bool {
    let Some(&(from, to)) = segments.get(found.len()) else {
        return true;
    };
    let mut cur = Path::trivial(from);
    route_one(net, to, &mut cur, used, &mut |used, p| {
        found.push(p.clone());
        if route_all(net, segments, used, found) {
            return true;
        }
        found.pop();
        false
    })
}

// Enumerates simple paths from `cur.end()` to `to` whose interior avoids
// `used`, marking interiors while the continuation runs.
fn route_one(
    net: &Net,
    to: NodeId,
    cur: &mut Path,
    used: &mut [bool],
    cont: &mut dyn FnMut(&mut [bool], &Path) -> bool,
) -> bool {
    let u = cur.end();
    for &e in net.out_edges(u) {
        let v = net.head(e);
        if v == to {
            let mut p = cur.clone();
            p.push(e, v);
            if cont(used, &p) {
                return true;
            }
        } else if !used[v] {
            used[v] = true;
            let mut p = cur.clone();
            p.push(e, v);
            let ok = route_one(net, to, &mut p, used, cont);
            used[v] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Ground truth for vulnerability: an st-embedding exists in the
/// st-connected part of the net.
pub fn brute_force_vulnerable(net: &Net) -> Result<bool, OracleError> {
    brute_force_vulnerable_bounded(net, DEFAULT_EMBEDDING_BOUND)
}

pub fn brute_force_vulnerable_bounded(net: &Net, bound: usize) -> Result<bool, OracleError> {
    let pruned = make_st_connected(net);
    Ok(has_w_embedding_bounded(&pruned, bound)?.is_some())
}

/// Node numbering of the two-copy gadget for an input whose node ids are
/// below `n`: `x' = x`, `x'' = n + x`, then the eight hub nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLayout {
    pub n: usize,
}

impl GadgetLayout {
    pub fn prime(&self, x: NodeId) -> NodeId {
        x
    }
    pub fn double_prime(&self, x: NodeId) -> NodeId {
        self.n + x
    }
    pub fn s_star(&self) -> NodeId {
        2 * self.n
    }
    pub fn z_prime(&self) -> NodeId {
        2 * self.n + 1
    }
    pub fn z_double_prime(&self) -> NodeId {
        2 * self.n + 2
    }
    pub fn a_prime(&self) -> NodeId {
        2 * self.n + 3
    }
    pub fn a_double_prime(&self) -> NodeId {
        2 * self.n + 4
    }
    pub fn r_prime(&self) -> NodeId {
        2 * self.n + 5
    }
    pub fn r_double_prime(&self) -> NodeId {
        2 * self.n + 6
    }
    pub fn t_star(&self) -> NodeId {
        2 * self.n + 7
    }
}

/// Builds `(G*, s*, t*)`, which is irredundant exactly when `edge` is
/// irredundant in `net`.
///
/// Self-loops and edges entering `s` or leaving `t` lie on no simple path,
/// so they are dropped from both copies.
pub fn gadget_gstar(net: &Net, edge: EdgeId) -> Result<(Net, GadgetLayout), OracleError> {
    let e = net
        .edge(edge)
        .ok_or(crate::error::NetError::UnknownEdge(edge))?;
    let (s, t) = (net.source(), net.target());
    if e.head == s {
        return Err(OracleError::ForbiddenGadgetEdge {
            edge,
            reason: "edge enters the source",
        });
    }
    if e.tail == t {
        return Err(OracleError::ForbiddenGadgetEdge {
            edge,
            reason: "edge leaves the target",
        });
    }
    if e.tail == e.head {
        return Err(OracleError::ForbiddenGadgetEdge {
            edge,
            reason: "edge is a self-loop",
        });
    }
    let n = net.node_capacity();
    let lay = GadgetLayout { n };
    let mut present = vec![false; 2 * n + 8];
    for v in net.nodes() {
        present[lay.prime(v)] = true;
        present[lay.double_prime(v)] = true;
    }
    for p in present.iter_mut().skip(2 * n) {
        *p = true;
    }
    let kept: Vec<_> = net
        .edges()
        .filter(|x| x.head != s && x.tail != t && x.tail != x.head)
        .collect();
    let mut edges: Vec<Option<(NodeId, NodeId)>> = Vec::new();
    for x in &kept {
        edges.push(Some((lay.prime(x.tail), lay.prime(x.head))));
    }
    for x in &kept {
        edges.push(Some((lay.double_prime(x.tail), lay.double_prime(x.head))));
    }
    let (sp, tp) = (lay.prime(s), lay.prime(t));
    let (spp, tpp) = (lay.double_prime(s), lay.double_prime(t));
    let hubs = [
        (lay.s_star(), lay.z_prime()),
        (lay.z_prime(), lay.r_prime()),
        (lay.r_prime(), sp),
        (tp, lay.a_double_prime()),
        (lay.a_double_prime(), lay.z_double_prime()),
        (lay.z_double_prime(), lay.t_star()),
        (lay.s_star(), lay.z_double_prime()),
        (lay.z_double_prime(), lay.r_double_prime()),
        (lay.r_double_prime(), spp),
        (tpp, lay.a_prime()),
        (lay.a_prime(), lay.z_prime()),
        (lay.z_prime(), lay.t_star()),
    ];
    edges.extend(hubs.into_iter().map(Some));
    edges.push(Some((lay.prime(e.tail), lay.a_prime())));
    edges.push(Some((lay.r_double_prime(), lay.prime(e.head))));
    for x in net.nodes() {
        edges.push(Some((lay.a_prime(), lay.double_prime(x))));
        edges.push(Some((lay.double_prime(x), lay.r_double_prime())));
    }
    edges.push(Some((lay.double_prime(e.tail), lay.a_double_prime())));
    edges.push(Some((lay.r_prime(), lay.double_prime(e.head))));
    for x in net.nodes() {
        edges.push(Some((lay.a_double_prime(), lay.prime(x))));
        edges.push(Some((lay.prime(x), lay.r_prime())));
    }
    let g = Net::from_parts(present, edges, lay.s_star(), lay.t_star())?;
    Ok((g, lay))
}
