//! Analysis of one cycle of an st-connected net.
//!
//! Given an s-minimal cycle, the analysis either finds redundant cycle edges,
//! builds an st-embedding of the Wheatstone graph, or returns another
//! s-minimal cycle strictly closer to the target. Every embedding and every
//! replacement cycle is checked before it is returned, so a broken case
//! surfaces as an [`InvariantError`] instead of a wrong verdict.

use std::collections::BTreeMap;

use crate::detector::{validate_embedding, WEmbedding};
use crate::error::InvariantError;
use crate::net::{
    bfs_shortest, on_cycle_flags, shortest_cycle_through, Cycle, Direction, EdgeId, Net, NodeId,
    Path,
};

/// A cycle together with its entry and exit paths.
#[derive(Debug, Clone)]
pub struct CycleContext {
    pub cycle: Cycle,
    /// Entry node closest to `s`.
    pub eps_star: NodeId,
    pub entry_paths: BTreeMap<NodeId, Path>,
    pub exit_paths: BTreeMap<NodeId, Path>,
    /// Exit node closest to `t`.
    pub xi_star: NodeId,
    index: Vec<Option<usize>>,
    dist_to_target: Vec<Option<usize>>,
}

impl CycleContext {
    pub fn new(net: &Net, cycle: Cycle, eps_star: NodeId) -> Result<Self, InvariantError> {
        let entry_paths = entry_nodes(net, &cycle);
        let exit_paths = exit_nodes(net, &cycle);
        if !entry_paths.contains_key(&eps_star) {
            return Err(InvariantError(format!(
                "node {eps_star} is not an entry of its cycle"
            )));
        }
        let mut index = vec![None; net.node_capacity()];
        for (i, &v) in cycle.nodes().iter().enumerate() {
            index[v] = Some(i);
        }
        let k = cycle.len();
        let start = index[eps_star].expect("eps_star on cycle");
        let xi_star = *exit_paths
            .iter()
            .min_by_key(|(v, p)| {
                (
                    p.len(),
                    (index[**v].expect("exit on cycle") + k - start) % k,
                )
            })
            .ok_or_else(|| InvariantError("cycle without exit nodes".into()))?
            .0;
        let back = bfs_shortest(net, &[net.target()], |_| false, Direction::Backward);
        let dist_to_target = (0..net.node_capacity()).map(|v| back.distance(v)).collect();
        Ok(CycleContext {
            cycle,
            eps_star,
            entry_paths,
            exit_paths,
            xi_star,
            index,
            dist_to_target,
        })
    }

    /// Position of `v` on the cycle.
    fn pos(&self, v: NodeId) -> usize {
        self.index[v].expect("node on cycle")
    }

    /// Forward walk along the cycle from `u` to `v`.
    fn arc(&self, u: NodeId, v: NodeId) -> Path {
        self.cycle.arc(self.pos(u), self.pos(v))
    }

    /// Distance from the cycle to `t` in the whole net.
    pub fn target_distance(&self) -> usize {
        self.cycle
            .nodes()
            .iter()
            .filter_map(|&v| self.dist_to_target[v])
            .min()
            .unwrap_or(usize::MAX)
    }
}

/// The cycle's entry region, exit region and neutral region, with the cycle
/// ordered from its first entry `eps1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regions {
    pub order: Vec<NodeId>,
    pub eps1: NodeId,
    pub eps_hat: NodeId,
    pub xi1: NodeId,
    pub xi_hat: NodeId,
    pub entry_region: Vec<NodeId>,
    pub exit_region: Vec<NodeId>,
    pub neutral_region: Vec<NodeId>,
    pub splitter: Splitter,
    rank: BTreeMap<NodeId, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitter {
    Edge(EdgeId),
    Node(NodeId),
}

impl Regions {
    /// Position of a cycle node in the order rooted at `eps1`.
    pub fn rank(&self, v: NodeId) -> Option<usize> {
        self.rank.get(&v).copied()
    }

    pub fn in_entry_region(&self, v: NodeId) -> bool {
        self.rank(v).is_some_and(|r| r < self.rank[&self.xi1])
    }

    pub fn in_exit_region(&self, v: NodeId) -> bool {
        let lo = self.rank[&self.xi1] + usize::from(self.xi1 == self.eps_hat);
        self.rank(v)
            .is_some_and(|r| lo <= r && r <= self.rank[&self.xi_hat])
    }

    pub fn in_neutral_region(&self, v: NodeId) -> bool {
        self.rank(v).is_some_and(|r| r > self.rank[&self.xi_hat])
    }

    /// Exit-region nodes a hyper-chord may end in. With an edge splitter the
    /// first exit is left out: a hyper-chord ending there leaves no exit
    /// strictly between its endpoints.
    fn is_chord_target(&self, v: NodeId) -> bool {
        self.in_exit_region(v) && !(matches!(self.splitter, Splitter::Edge(_)) && v == self.xi1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    OneEntry(NodeId),
    OneExit(NodeId),
    Splittable(Regions),
    NonSplittable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleOutcome {
    RedundantEdges(Vec<EdgeId>),
    Embedding(Box<WEmbedding>),
    SmallerCycle(Cycle),
}

/// A node shared by two paths, with its position on each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Intersection {
    pub node: NodeId,
    pub pos_p: usize,
    pub pos_q: usize,
}

/// An s-minimal cycle and the entry node realising its distance from `s`:
/// the first node in BFS order from `s` that lies on a cycle, with a
/// shortest cycle through it.
pub fn s_minimal_cycle(net: &Net) -> Option<(Cycle, NodeId)> {
    let flags = on_cycle_flags(net);
    let bfs = bfs_shortest(net, &[net.source()], |_| false, Direction::Forward);
    let eps = bfs.order().iter().copied().find(|&v| flags[v])?;
    let c = shortest_cycle_through(net, eps)?;
    let at = c.nodes().iter().position(|&v| v == eps)?;
    Some((c.rotated(at), eps))
}

fn cycle_flags(net: &Net, cycle: &Cycle) -> Vec<bool> {
    let mut on = vec![false; net.node_capacity()];
    for &v in cycle.nodes() {
        on[v] = true;
    }
    on
}

/// Entry nodes with one shortest entry path each, all taken from a single
/// BFS forest rooted at `s` that never leaves the cycle.
pub fn entry_nodes(net: &Net, cycle: &Cycle) -> BTreeMap<NodeId, Path> {
    let on = cycle_flags(net, cycle);
    let bfs = bfs_shortest(
        net,
        &[net.source()],
        |e| on[net.tail(e)],
        Direction::Forward,
    );
    cycle
        .nodes()
        .iter()
        .filter_map(|&v| bfs.path(net, v).map(|p| (v, p)))
        .collect()
}

/// Exit nodes with one shortest exit path each, from a single backward BFS
/// forest rooted at `t` that never enters the cycle.
pub fn exit_nodes(net: &Net, cycle: &Cycle) -> BTreeMap<NodeId, Path> {
    let on = cycle_flags(net, cycle);
    let bfs = bfs_shortest(
        net,
        &[net.target()],
        |e| on[net.head(e)],
        Direction::Backward,
    );
    cycle
        .nodes()
        .iter()
        .filter_map(|&v| bfs.path(net, v).map(|p| (v, p)))
        .collect()
}

/// Sorts the cycle into one of the four kinds, in a single pass over it.
pub fn classify(
    cycle: &Cycle,
    entries: &BTreeMap<NodeId, Path>,
    exits: &BTreeMap<NodeId, Path>,
) -> Classification {
    if entries.len() == 1 {
        return Classification::OneEntry(*entries.keys().next().expect("one entry"));
    }
    if exits.len() == 1 {
        return Classification::OneExit(*exits.keys().next().expect("one exit"));
    }
    // Spell the cycle as a cyclic word over {E, X}, a node that is both
    // contributing "EX". Splittable iff the word has exactly one X -> E step.
    let mut letters: Vec<(bool, usize)> = Vec::new();
    for (i, v) in cycle.nodes().iter().enumerate() {
        if entries.contains_key(v) {
            letters.push((true, i));
        }
        if exits.contains_key(v) {
            letters.push((false, i));
        }
    }
    let n = letters.len();
    let steps: Vec<usize> = (0..n)
        .filter(|&j| !letters[j].0 && letters[(j + 1) % n].0)
        .collect();
    if steps.len() != 1 {
        return Classification::NonSplittable;
    }
    let first = (steps[0] + 1) % n;
    let nodes = cycle.nodes();
    let k = nodes.len();
    let start = letters[first].1;
    let order: Vec<NodeId> = (0..k).map(|i| nodes[(start + i) % k]).collect();
    let rank: BTreeMap<NodeId, usize> = order.iter().enumerate().map(|(r, &v)| (v, r)).collect();
    let word: Vec<(bool, NodeId)> = (0..n)
        .map(|j| {
            let (is_entry, i) = letters[(first + j) % n];
            (is_entry, nodes[i])
        })
        .collect();
    let n_entries = word.iter().take_while(|l| l.0).count();
    let eps1 = word[0].1;
    let eps_hat = word[n_entries - 1].1;
    let xi1 = word[n_entries].1;
    let xi_hat = word[n - 1].1;
    let splitter = if xi1 == eps_hat {
        Splitter::Node(xi1)
    } else {
        Splitter::Edge(cycle.edges()[(start + rank[&xi1] + k - 1) % k])
    };
    let mut regions = Regions {
        order,
        eps1,
        eps_hat,
        xi1,
        xi_hat,
        entry_region: Vec::new(),
        exit_region: Vec::new(),
        neutral_region: Vec::new(),
        splitter,
        rank,
    };
    for &v in &regions.order {
        if regions.in_entry_region(v) {
            regions.entry_region.push(v);
        } else if regions.in_exit_region(v) {
            regions.exit_region.push(v);
        } else if regions.in_neutral_region(v) {
            regions.neutral_region.push(v);
        }
    }
    Classification::Splittable(regions)
}

/// The cycle edge entering the only entry, or leaving the only exit.
pub fn one_entry_exit_redundant(cycle: &Cycle, class: &Classification) -> Vec<EdgeId> {
    let k = cycle.len();
    let at = |v: NodeId| {
        cycle
            .nodes()
            .iter()
            .position(|&x| x == v)
            .expect("node on cycle")
    };
    match *class {
        Classification::OneEntry(v) => vec![cycle.edges()[(at(v) + k - 1) % k]],
        Classification::OneExit(v) => vec![cycle.edges()[at(v)]],
        _ => Vec::new(),
    }
}

/// Entry-region nodes that start a neutral hyper-chord into the exit region,
/// each with one witness hyper-chord, in cycle order.
pub fn neutral_hyperchord_sources(
    net: &Net,
    cycle: &Cycle,
    regions: &Regions,
) -> Vec<(NodeId, Path)> {
    let on = cycle_flags(net, cycle);
    let interior = |v: NodeId| !on[v] || regions.in_neutral_region(v);
    let roots: Vec<NodeId> = regions
        .exit_region
        .iter()
        .copied()
        .filter(|&v| regions.is_chord_target(v))
        .collect();
    let bfs = bfs_shortest(
        net,
        &roots,
        |e| {
            let (x, u) = (net.tail(e), net.head(e));
            let expandable = regions.is_chord_target(u) || interior(u);
            !expandable || !(interior(x) || regions.in_entry_region(x))
        },
        Direction::Backward,
    );
    regions
        .entry_region
        .iter()
        .filter_map(|&w| bfs.path(net, w).map(|p| (w, p)))
        .collect()
}

/// Cycle edges from `l_NX` to `f_EN`; all redundant when no neutral
/// hyper-chord joins the entry region to the exit region.
pub fn redundant_band(
    net: &Net,
    cycle: &Cycle,
    regions: &Regions,
) -> Result<Vec<EdgeId>, InvariantError> {
    let on = cycle_flags(net, cycle);
    let interior = |v: NodeId| !on[v] || regions.in_neutral_region(v);
    let k = regions.order.len();
    let from_entry = bfs_shortest(
        net,
        &regions.entry_region,
        |e| {
            let (u, x) = (net.tail(e), net.head(e));
            !(regions.in_entry_region(u) || interior(u)) || !interior(x)
        },
        Direction::Forward,
    );
    let f = regions
        .neutral_region
        .iter()
        .filter(|&&v| from_entry.reached(v))
        .map(|&v| regions.rank[&v])
        .min()
        .unwrap_or(k);
    let roots: Vec<NodeId> = regions
        .exit_region
        .iter()
        .copied()
        .filter(|&v| regions.is_chord_target(v))
        .collect();
    let to_exit = bfs_shortest(
        net,
        &roots,
        |e| {
            let (x, u) = (net.tail(e), net.head(e));
            !(regions.is_chord_target(u) || interior(u)) || !interior(x)
        },
        Direction::Backward,
    );
    let l = regions
        .neutral_region
        .iter()
        .filter(|&&v| to_exit.reached(v))
        .map(|&v| regions.rank[&v])
        .max()
        .unwrap_or(regions.rank[&regions.xi_hat]);
    if l >= f {
        return Err(InvariantError(format!(
            "empty redundant band (l = {l}, f = {f}) without a neutral hyper-chord"
        )));
    }
    let start = cycle
        .nodes()
        .iter()
        .position(|&v| v == regions.eps1)
        .expect("eps1 on cycle");
    Ok((l..f).map(|r| cycle.edges()[(start + r) % k]).collect())
}

/// Common nodes of `p` and `q`, in order along `p`, found through a
/// position index of `q` in time linear in both lengths.
pub fn path_intersections(p: &Path, q: &Path) -> Vec<Intersection> {
    let max = p
        .nodes()
        .iter()
        .chain(q.nodes())
        .copied()
        .max()
        .unwrap_or(0);
    let mut at_q = vec![None; max + 1];
    for (j, &v) in q.nodes().iter().enumerate() {
        at_q[v] = Some(j);
    }
    p.nodes()
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| {
            at_q[v].map(|j| Intersection {
                node: v,
                pos_p: i,
                pos_q: j,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    First,
    Second,
    Shared,
}

#[derive(Debug, Clone, Copy)]
struct Touch {
    node: NodeId,
    /// Position on the entry path.
    at: usize,
    side: Side,
    /// Position on the exit path of `side` (the first one when shared).
    on_exit: usize,
}

/// Two exit paths from one BFS forest, merging at `t'`.
struct ExitPair<'a> {
    xi1: NodeId,
    xi2: NodeId,
    x1: &'a Path,
    x2: &'a Path,
    j1: usize,
    j2: usize,
}

impl<'a> ExitPair<'a> {
    fn new(ctx: &'a CycleContext, xi1: NodeId, xi2: NodeId) -> Result<Self, InvariantError> {
        let x1 = &ctx.exit_paths[&xi1];
        let x2 = &ctx.exit_paths[&xi2];
        let meet = path_intersections(x1, x2)
            .into_iter()
            .next()
            .ok_or_else(|| InvariantError("exit paths do not meet".into()))?;
        if x1.nodes()[meet.pos_p..] != x2.nodes()[meet.pos_q..] {
            return Err(InvariantError(
                "exit paths do not merge after meeting".into(),
            ));
        }
        Ok(ExitPair {
            xi1,
            xi2,
            x1,
            x2,
            j1: meet.pos_p,
            j2: meet.pos_q,
        })
    }

    fn t_prime(&self) -> NodeId {
        self.x1.nodes()[self.j1]
    }

    /// `x1` from `from` up to `t'`.
    fn first_to_merge(&self, from: usize) -> Path {
        self.x1.slice(from, self.j1)
    }

    fn second_to_merge(&self, from: usize) -> Path {
        self.x2.slice(from, self.j2)
    }

    fn merged_tail(&self) -> Path {
        self.x1.slice(self.j1, self.x1.len())
    }

    /// Nodes of `p` lying on either exit path, in order along `p`. The last
    /// node of `p` is on the cycle and never counts.
    fn touches(&self, p: &Path) -> Vec<Touch> {
        let body = p.slice(0, p.len().saturating_sub(1));
        let mut out: Vec<Touch> = path_intersections(&body, self.x1)
            .into_iter()
            .map(|i| Touch {
                node: i.node,
                at: i.pos_p,
                side: if i.pos_q >= self.j1 {
                    Side::Shared
                } else {
                    Side::First
                },
                on_exit: i.pos_q,
            })
            .collect();
        out.extend(
            path_intersections(&body, self.x2)
                .into_iter()
                .filter(|i| i.pos_q < self.j2)
                .map(|i| Touch {
                    node: i.node,
                    at: i.pos_p,
                    side: Side::Second,
                    on_exit: i.pos_q,
                }),
        );
        out.sort_by_key(|t| t.at);
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn embedding(
    net: &Net,
    [a, b, c, d]: [NodeId; 4],
    [ab, ac, bc, bd, cd]: [Path; 5],
    source_tail: Path,
    target_tail: Path,
    case: &str,
) -> Result<CycleOutcome, InvariantError> {
    let w = WEmbedding {
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
    };
    if !validate_embedding(net, &w) {
        return Err(InvariantError(format!(
            "{case}: constructed embedding is invalid"
        )));
    }
    Ok(CycleOutcome::Embedding(Box::new(w)))
}

fn smaller_cycle(
    ctx: &CycleContext,
    net: &Net,
    closed: Path,
    case: &str,
) -> Result<CycleOutcome, InvariantError> {
    let c = Cycle::from_closed_path(&closed)
        .ok_or_else(|| InvariantError(format!("{case}: replacement cycle is not simple")))?;
    if !c.is_valid_in(net) || !c.contains(ctx.eps_star) {
        return Err(InvariantError(format!(
            "{case}: replacement cycle misses the closest entry"
        )));
    }
    let new_dt = c
        .nodes()
        .iter()
        .filter_map(|&v| ctx.dist_to_target[v])
        .min()
        .unwrap_or(usize::MAX);
    if new_dt >= ctx.target_distance() {
        return Err(InvariantError(format!(
            "{case}: replacement cycle is not closer to t"
        )));
    }
    let at = c
        .nodes()
        .iter()
        .position(|&v| v == ctx.eps_star)
        .expect("contains eps_star");
    Ok(CycleOutcome::SmallerCycle(c.rotated(at)))
}

/// Last node shared by the entry paths of `p` and `q`.
fn branch_point(p: &Path, q: &Path) -> usize {
    p.nodes()
        .iter()
        .zip(q.nodes())
        .take_while(|(x, y)| x == y)
        .count()
        - 1
}

// Embedding through two consecutive touches on different exit paths:
// a = xi', b and c the touches, d = t'.
fn crossing(
    net: &Net,
    ctx: &CycleContext,
    exits: &ExitPair,
    entry: &Path,
    u: Touch,
    v: Touch,
    case: &str,
) -> Result<CycleOutcome, InvariantError> {
    let route = |t: Touch| match t.side {
        Side::First => exits.x1.slice(0, t.on_exit),
        _ => ctx
            .arc(exits.xi1, exits.xi2)
            .concat(&exits.x2.slice(0, t.on_exit)),
    };
    let to_merge = |t: Touch| match t.side {
        Side::First => exits.first_to_merge(t.on_exit),
        _ => exits.second_to_merge(t.on_exit),
    };
    let source_tail = ctx.entry_paths[&ctx.eps_star]
        .clone()
        .concat(&ctx.arc(ctx.eps_star, exits.xi1));
    embedding(
        net,
        [exits.xi1, u.node, v.node, exits.t_prime()],
        [
            route(u),
            route(v),
            entry.slice(u.at, v.at),
            to_merge(u),
            to_merge(v),
        ],
        source_tail,
        exits.merged_tail(),
        case,
    )
}

fn open_crossing(touches: &[Touch]) -> Option<(Touch, Touch)> {
    touches.windows(2).find_map(|w| {
        let (u, v) = (w[0], w[1]);
        let open = |t: Touch| t.side != Side::Shared;
        (open(u) && open(v) && u.side != v.side).then_some((u, v))
    })
}

/// Case analysis for a splittable s-minimal cycle with at least two entries
/// and two exits.
pub fn splittable_analysis(
    net: &Net,
    ctx: &CycleContext,
    regions: &Regions,
) -> Result<CycleOutcome, InvariantError> {
    let sources = neutral_hyperchord_sources(net, &ctx.cycle, regions);
    let Some((w, h)) = sources.last() else {
        return redundant_band(net, &ctx.cycle, regions).map(CycleOutcome::RedundantEdges);
    };
    let w = *w;
    let z = h.end();
    let rank = |v: NodeId| regions.rank[&v];
    let mut exits: Vec<NodeId> = ctx.exit_paths.keys().copied().collect();
    exits.sort_by_key(|&v| rank(v));
    let (xi1, xi2) = if rank(ctx.xi_star) < rank(z) {
        let second = exits.iter().copied().find(|&v| rank(v) >= rank(z));
        (Some(ctx.xi_star), second)
    } else {
        let first = exits.iter().copied().find(|&v| rank(v) > rank(w));
        (first, Some(ctx.xi_star))
    };
    let (Some(xi1), Some(xi2)) = (xi1, xi2) else {
        return Err(InvariantError("no exits around the hyper-chord".into()));
    };
    if !(rank(w) < rank(xi1) && rank(xi1) < rank(z) && rank(z) <= rank(xi2)) {
        return Err(InvariantError(
            "exits do not straddle the hyper-chord".into(),
        ));
    }
    let pair = ExitPair::new(ctx, xi1, xi2)?;
    let t1 = pair.t_prime();
    let star_first = rank(ctx.eps_star) <= rank(w);
    let eps1 = if star_first {
        ctx.eps_star
    } else {
        regions.eps1
    };
    let entry = &ctx.entry_paths[&eps1];
    let touches = pair.touches(entry);

    if touches.is_empty() {
        return embedding(
            net,
            [w, xi1, z, t1],
            [
                ctx.arc(w, xi1),
                h.clone(),
                ctx.arc(xi1, z),
                pair.first_to_merge(0),
                ctx.arc(z, xi2).concat(&pair.second_to_merge(0)),
            ],
            entry.clone().concat(&ctx.arc(eps1, w)),
            pair.merged_tail(),
            "splittable, disjoint entry path",
        );
    }
    if star_first {
        return Err(InvariantError(
            "shortest entry path touches an exit path".into(),
        ));
    }

    let star_path = &ctx.entry_paths[&ctx.eps_star];
    let sp = branch_point(star_path, entry);
    let s1 = entry.nodes()[sp];

    if touches.iter().any(|t| t.side == Side::Shared) {
        let x_star = &ctx.exit_paths[&ctx.xi_star];
        let hits = path_intersections(&entry.slice(0, entry.len() - 1), x_star);
        let omega = hits
            .last()
            .ok_or_else(|| InvariantError("shared touch missing from exit path".into()))?;
        let closed = entry
            .slice(omega.pos_p, entry.len())
            .concat(&ctx.arc(eps1, ctx.xi_star))
            .concat(&x_star.slice(0, omega.pos_q));
        return smaller_cycle(ctx, net, closed, "splittable, touch after merge");
    }

    let only = |s: Side| touches.iter().all(|t| t.side == s);
    if only(Side::First) || only(Side::Second) {
        let side = touches[0].side;
        let omega = *touches.iter().max_by_key(|t| t.on_exit).expect("nonempty");
        let (bd, cd) = if side == Side::First {
            (
                pair.first_to_merge(omega.on_exit),
                ctx.arc(ctx.eps_star, xi2).concat(&pair.second_to_merge(0)),
            )
        } else {
            (
                pair.second_to_merge(omega.on_exit),
                ctx.arc(ctx.eps_star, xi1).concat(&pair.first_to_merge(0)),
            )
        };
        return embedding(
            net,
            [s1, omega.node, ctx.eps_star, t1],
            [
                entry.slice(sp, omega.at),
                star_path.slice(sp, star_path.len()),
                entry
                    .slice(omega.at, entry.len())
                    .concat(&ctx.arc(eps1, ctx.eps_star)),
                bd,
                cd,
            ],
            star_path.slice(0, sp),
            pair.merged_tail(),
            "splittable, touches on one exit path",
        );
    }

    let (u, v) = open_crossing(&touches)
        .ok_or_else(|| InvariantError("no crossing between the two exit paths".into()))?;
    crossing(net, ctx, &pair, entry, u, v, "splittable, crossing")
}

/// Picks `(xi', eps, xi'')` around a non-splittable cycle read from `eps*`,
/// with one of the two exits equal to `xi*`.
fn non_splittable_roles(ctx: &CycleContext) -> Option<(NodeId, NodeId, NodeId)> {
    let k = ctx.cycle.len();
    let start = ctx.pos(ctx.eps_star);
    let rel = |v: NodeId| (ctx.pos(v) + k - start) % k;
    let mut entries: Vec<NodeId> = ctx.entry_paths.keys().copied().collect();
    let mut exits: Vec<NodeId> = ctx.exit_paths.keys().copied().collect();
    entries.sort_by_key(|&v| rel(v));
    exits.sort_by_key(|&v| rel(v));
    let x = rel(ctx.xi_star);
    let after = entries.iter().copied().find(|&e| rel(e) > x).and_then(|e| {
        let second = exits.iter().copied().find(|&v| rel(v) >= rel(e))?;
        Some((ctx.xi_star, e, second))
    });
    if after.is_some() {
        return after;
    }
    let first = *exits.first()?;
    let eps = entries
        .iter()
        .copied()
        .rev()
        .find(|&e| rel(e) > rel(first) && rel(e) <= x)?;
    Some((first, eps, ctx.xi_star))
}

/// Case analysis for a non-splittable s-minimal cycle with at least two
/// entries and two exits.
pub fn non_splittable_analysis(
    net: &Net,
    ctx: &CycleContext,
) -> Result<CycleOutcome, InvariantError> {
    let (xi1, eps, xi2) = non_splittable_roles(ctx)
        .ok_or_else(|| InvariantError("no exit-entry-exit pattern on cycle".into()))?;
    if xi2 == ctx.eps_star || xi1 == eps {
        return Err(InvariantError("degenerate exit-entry-exit pattern".into()));
    }
    let pair = ExitPair::new(ctx, xi1, xi2)?;
    let t1 = pair.t_prime();
    let star_path = &ctx.entry_paths[&ctx.eps_star];
    let entry = &ctx.entry_paths[&eps];
    let sp = branch_point(star_path, entry);
    let s1 = entry.nodes()[sp];
    let touches = pair.touches(entry);
    let end = entry.len();
    let ab_from_s1 = || {
        star_path
            .slice(sp, star_path.len())
            .concat(&ctx.arc(ctx.eps_star, xi1))
    };

    let Some(&alpha) = touches.first() else {
        return embedding(
            net,
            [s1, xi1, eps, t1],
            [
                ab_from_s1(),
                entry.slice(sp, end),
                ctx.arc(xi1, eps),
                pair.first_to_merge(0),
                ctx.arc(eps, xi2).concat(&pair.second_to_merge(0)),
            ],
            star_path.slice(0, sp),
            pair.merged_tail(),
            "non-splittable, disjoint entry path",
        );
    };
    let omega = *touches.last().expect("nonempty");

    match alpha.side {
        Side::First => {
            return embedding(
                net,
                [s1, xi1, alpha.node, t1],
                [
                    ab_from_s1(),
                    entry.slice(sp, alpha.at),
                    pair.x1.slice(0, alpha.on_exit),
                    ctx.arc(xi1, xi2).concat(&pair.second_to_merge(0)),
                    pair.first_to_merge(alpha.on_exit),
                ],
                star_path.slice(0, sp),
                pair.merged_tail(),
                "non-splittable, first touch on first exit path",
            );
        }
        Side::Second => {
            return embedding(
                net,
                [s1, xi1, alpha.node, t1],
                [
                    ab_from_s1(),
                    entry.slice(sp, alpha.at),
                    ctx.arc(xi1, xi2).concat(&pair.x2.slice(0, alpha.on_exit)),
                    pair.first_to_merge(0),
                    pair.second_to_merge(alpha.on_exit),
                ],
                star_path.slice(0, sp),
                pair.merged_tail(),
                "non-splittable, first touch on second exit path",
            );
        }
        Side::Shared => {}
    }

    // Cycle through a node `x` of the first exit path:
    // x ~> eps along the entry path, around the cycle to xi', then back to x.
    let around = |at: usize, on_exit: usize, case: &str| {
        let closed = entry
            .slice(at, end)
            .concat(&ctx.arc(eps, xi1))
            .concat(&pair.x1.slice(0, on_exit));
        smaller_cycle(ctx, net, closed, case)
    };

    match omega.side {
        Side::First => {
            let source_tail = star_path.clone().concat(&ctx.arc(ctx.eps_star, xi1));
            return embedding(
                net,
                [xi1, omega.node, eps, t1],
                [
                    pair.x1.slice(0, omega.on_exit),
                    ctx.arc(xi1, eps),
                    entry.slice(omega.at, end),
                    pair.first_to_merge(omega.on_exit),
                    ctx.arc(eps, xi2).concat(&pair.second_to_merge(0)),
                ],
                source_tail,
                pair.merged_tail(),
                "non-splittable, last touch on first exit path",
            );
        }
        Side::Shared => {
            return around(
                omega.at,
                omega.on_exit,
                "non-splittable, last touch after merge",
            )
        }
        Side::Second => {}
    }

    // First touch after the merge, last touch on the second exit path.
    let between = &touches[..];
    let on_first: Vec<Touch> = between
        .iter()
        .copied()
        .filter(|t| t.side == Side::First)
        .collect();
    if on_first.is_empty() {
        let t_star = between
            .iter()
            .copied()
            .filter(|t| t.side == Side::Shared)
            .min_by_key(|t| t.on_exit)
            .expect("first touch is shared");
        return around(
            t_star.at,
            t_star.on_exit,
            "non-splittable, merge touch before second path",
        );
    }
    if let Some((u, v)) = open_crossing(&touches) {
        return crossing(net, ctx, &pair, entry, u, v, "non-splittable, crossing");
    }
    let beta = on_first
        .iter()
        .copied()
        .min_by_key(|t| t.on_exit)
        .expect("nonempty");
    around(
        beta.at,
        beta.on_exit,
        "non-splittable, first-path touch before merge touch",
    )
}

/// Runs the analysis matching the cycle's kind.
pub fn analyze(
    net: &Net,
    ctx: &CycleContext,
) -> Result<(Classification, CycleOutcome), InvariantError> {
    let class = classify(&ctx.cycle, &ctx.entry_paths, &ctx.exit_paths);
    let outcome = match &class {
        Classification::OneEntry(_) | Classification::OneExit(_) => {
            CycleOutcome::RedundantEdges(one_entry_exit_redundant(&ctx.cycle, &class))
        }
        Classification::Splittable(r) => splittable_analysis(net, ctx, r)?,
        Classification::NonSplittable => non_splittable_analysis(net, ctx)?,
    };
    Ok((class, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::*;

    fn keys(m: &BTreeMap<NodeId, Path>) -> Vec<NodeId> {
        m.keys().copied().collect()
    }

    // v1..v4 = 1..4 on a 4-cycle; entries v1, v2 from s = 0, exits v3, v4 to t = 5.
    fn four_cycle(extra: &[(NodeId, NodeId)]) -> Net {
        let mut edges = vec![
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 1),
            (0, 1),
            (0, 2),
            (3, 5),
            (4, 5),
        ];
        edges.extend_from_slice(extra);
        Net::from_edges(6, edges, 0, 5).unwrap()
    }

    #[test]
    fn s_minimal_examples() {
        assert!(s_minimal_cycle(&wheatstone()).is_none());
        let (c, e) = s_minimal_cycle(&fig6a()).unwrap();
        assert_eq!((c.nodes(), e), (&[1, 2][..], 1));
        let (c, e) = s_minimal_cycle(&fig6c()).unwrap();
        assert_eq!((c.nodes(), e), (&[4, 5][..], 4));
    }

    #[test]
    fn entries_and_exits() {
        let (c, _) = s_minimal_cycle(&fig6a()).unwrap();
        let en = entry_nodes(&fig6a(), &c);
        assert_eq!(keys(&en), vec![1]);
        assert_eq!(en[&1].nodes(), &[0, 1]);
        let ex = exit_nodes(&fig6a(), &c);
        assert_eq!(keys(&ex), vec![1]);
        assert_eq!(ex[&1].nodes(), &[1, 3]);

        let (c, _) = s_minimal_cycle(&fig6b()).unwrap();
        assert_eq!(keys(&exit_nodes(&fig6b(), &c)), vec![2]);

        let (c, _) = s_minimal_cycle(&fig6c()).unwrap();
        assert_eq!(entry_nodes(&fig6c(), &c)[&4].nodes(), &[0, 1, 4]);
        assert_eq!(exit_nodes(&fig6c(), &c)[&5].nodes(), &[5, 2, 3]);
    }

    #[test]
    fn source_on_cycle_has_trivial_entry() {
        let net = Net::from_edges(3, [(0, 1), (1, 0), (1, 2)], 0, 2).unwrap();
        let (c, e) = s_minimal_cycle(&net).unwrap();
        assert_eq!(e, 0);
        let en = entry_nodes(&net, &c);
        assert_eq!(keys(&en), vec![0]);
        assert!(en[&0].is_empty());
    }

    #[test]
    fn one_entry_edges() {
        let (c, _) = s_minimal_cycle(&fig6a()).unwrap();
        let class = classify(&c, &entry_nodes(&fig6a(), &c), &exit_nodes(&fig6a(), &c));
        assert_eq!(class, Classification::OneEntry(1));
        assert_eq!(one_entry_exit_redundant(&c, &class), vec![3]);

        let (c, _) = s_minimal_cycle(&fig6b()).unwrap();
        let class = classify(&c, &entry_nodes(&fig6b(), &c), &exit_nodes(&fig6b(), &c));
        assert_eq!(one_entry_exit_redundant(&c, &class), vec![2]);

        let looped = Net::from_edges(3, [(0, 1), (1, 1), (1, 2)], 0, 2).unwrap();
        let (c, _) = s_minimal_cycle(&looped).unwrap();
        let class = classify(&c, &entry_nodes(&looped, &c), &exit_nodes(&looped, &c));
        assert_eq!(one_entry_exit_redundant(&c, &class), vec![1]);
    }

    // The cycle made of the first `k` edges, which must close up from node 1.
    fn leading_cycle(net: &Net, k: usize) -> Cycle {
        let ids: Vec<EdgeId> = (0..k).collect();
        Cycle::from_closed_path(&Path::from_edges(net, 1, &ids).unwrap()).unwrap()
    }

    fn regions_of(net: &Net, k: usize) -> (Cycle, Regions) {
        let c = leading_cycle(net, k);
        match classify(&c, &entry_nodes(net, &c), &exit_nodes(net, &c)) {
            Classification::Splittable(r) => (c, r),
            other => panic!("expected splittable, got {other:?}"),
        }
    }

    #[test]
    fn four_cycle_is_splittable() {
        let net = four_cycle(&[]);
        let (_, r) = regions_of(&net, 4);
        assert_eq!(r.entry_region, vec![1, 2]);
        assert_eq!(r.exit_region, vec![3, 4]);
        assert!(r.neutral_region.is_empty());
        assert_eq!(r.splitter, Splitter::Edge(1));
    }

    #[test]
    fn chordless_band() {
        let net = four_cycle(&[]);
        let (c, r) = regions_of(&net, 4);
        assert!(neutral_hyperchord_sources(&net, &c, &r).is_empty());
        assert_eq!(redundant_band(&net, &c, &r).unwrap(), vec![3]);
    }

    #[test]
    fn chord_is_hyperchord() {
        let net = four_cycle(&[(1, 4)]);
        let (c, r) = regions_of(&net, 4);
        let w = neutral_hyperchord_sources(&net, &c, &r);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0, 1);
        assert_eq!(w[0].1.nodes(), &[1, 4]);
    }

    #[test]
    fn six_cycle_band() {
        // e1=1 e2=2 x1=3 x2=4 n1=5 n2=6
        let edges = [
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 1),
            (0, 1),
            (0, 2),
            (3, 7),
            (4, 7),
        ];
        let net = Net::from_edges(8, edges, 0, 7).unwrap();
        let (c, r) = regions_of(&net, 6);
        assert_eq!(r.neutral_region, vec![5, 6]);
        assert_eq!(redundant_band(&net, &c, &r).unwrap(), vec![3, 4, 5]);
    }

    #[test]
    fn six_cycle_hyperchord_through_neutral() {
        // chords e1 -> n1 and n2 -> x2
        let edges = [
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 1),
            (0, 1),
            (0, 2),
            (3, 7),
            (4, 7),
            (1, 5),
            (6, 4),
        ];
        let net = Net::from_edges(8, edges, 0, 7).unwrap();
        let (c, r) = regions_of(&net, 6);
        let w = neutral_hyperchord_sources(&net, &c, &r);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].1.nodes(), &[1, 5, 6, 4]);
    }

    #[test]
    fn intersections() {
        let p = Path::from_edges(&wheatstone(), 0, &[0, 2, 4]).unwrap();
        let q = Path::from_edges(&wheatstone(), 1, &[3]).unwrap();
        let i = path_intersections(&p, &q);
        assert_eq!(
            i,
            vec![
                Intersection {
                    node: 1,
                    pos_p: 1,
                    pos_q: 0
                },
                Intersection {
                    node: 3,
                    pos_p: 3,
                    pos_q: 1
                }
            ]
        );
        assert_eq!(path_intersections(&p, &p).len(), 4);
        let r = Path::trivial(2);
        assert!(path_intersections(&q, &r).is_empty());
    }

    #[test]
    fn splittable_with_chord_embeds() {
        let net = four_cycle(&[(1, 4)]);
        let ctx = CycleContext::new(&net, leading_cycle(&net, 4), 1).unwrap();
        let (_, out) = analyze(&net, &ctx).unwrap();
        assert!(matches!(out, CycleOutcome::Embedding(_)));
    }
}
