//! Directed multigraphs with a distinguished source and target.
//!
//! Node and edge ids are dense integers. Removing edges or nodes never
//! renumbers the survivors, so an id means the same thing across every
//! subnet derived from one parsed input.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::NetError;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
}

/// A net `(G, s, t)`: a directed multigraph plus source and target.
///
/// Parallel edges and self-loops are allowed. A `Net` is immutable once
/// built; the operations that shrink it return a new value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    present: Vec<bool>,
    edges: Vec<Option<(NodeId, NodeId)>>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    source: NodeId,
    target: NodeId,
}

impl Net {
    /// Builds a net on nodes `0..node_count` with edge ids assigned in
    /// iteration order.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        source: NodeId,
        target: NodeId,
    ) -> Result<Self, NetError> {
        let present = vec![true; node_count];
        let edges = edges.into_iter().map(Some).collect();
        Self::from_parts(present, edges, source, target)
    }

    /// Builds a net from an explicit node mask and an edge table in which
    /// `None` marks a deleted id.
    pub fn from_parts(
        present: Vec<bool>,
        edges: Vec<Option<(NodeId, NodeId)>>,
        source: NodeId,
        target: NodeId,
    ) -> Result<Self, NetError> {
        let n = present.len();
        let has = |v: NodeId| v < n && present[v];
        if !has(source) {
            return Err(NetError::UnknownNode(source));
        }
        if !has(target) {
            return Err(NetError::UnknownNode(target));
        }
        if source == target {
            return Err(NetError::SourceEqualsTarget(source));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if let Some((u, v)) = *e {
                if !has(u) {
                    return Err(NetError::UnknownNode(u));
                }
                if !has(v) {
                    return Err(NetError::UnknownNode(v));
                }
                out_adj[u].push(id);
                in_adj[v].push(id);
            }
        }
        Ok(Net {
            present,
            edges,
            out_adj,
            in_adj,
            source,
            target,
        })
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    /// One past the largest node id this net can hold.
    pub fn node_capacity(&self) -> usize {
        self.present.len()
    }

    /// One past the largest edge id ever assigned.
    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn has_node(&self, v: NodeId) -> bool {
        v < self.present.len() && self.present[v]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(v, &p)| p.then_some(v))
    }

    pub fn edge(&self, id: EdgeId) -> Option<Edge> {
        self.edges
            .get(id)
            .copied()
            .flatten()
            .map(|(tail, head)| Edge { id, tail, head })
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(id, e)| e.map(|(tail, head)| Edge { id, tail, head }))
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_adj[v]
    }

    pub fn tail(&self, id: EdgeId) -> NodeId {
        self.edges[id].expect("live edge").0
    }

    pub fn head(&self, id: EdgeId) -> NodeId {
        self.edges[id].expect("live edge").1
    }

    /// Same graph with different terminals.
    pub fn with_terminals(&self, source: NodeId, target: NodeId) -> Result<Net, NetError> {
        Net::from_parts(self.present.clone(), self.edges.clone(), source, target)
    }

    /// Removes the given edges; ids of the remaining edges are unchanged.
    pub fn without_edges(&self, removed: impl IntoIterator<Item = EdgeId>) -> Net {
        let mut edges = self.edges.clone();
        for id in removed {
            if let Some(e) = edges.get_mut(id) {
                *e = None;
            }
        }
        Net::from_parts(self.present.clone(), edges, self.source, self.target)
            .expect("subnet of a valid net")
    }

    /// Keeps only the edges for which `keep` holds.
    pub fn retain_edges(&self, keep: impl Fn(Edge) -> bool) -> Net {
        let removed: Vec<EdgeId> = self.edges().filter(|&e| !keep(e)).map(|e| e.id).collect();
        self.without_edges(removed)
    }

    /// Keeps the nodes flagged in `keep` (source and target always stay) and
    /// the edges between them.
    pub fn induced(&self, keep: &[bool]) -> Net {
        let mut present = self.present.clone();
        for (v, p) in present.iter_mut().enumerate() {
            *p = *p && (keep[v] || v == self.source || v == self.target);
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.filter(|&(u, v)| present[u] && present[v]))
            .collect();
        Net::from_parts(present, edges, self.source, self.target).expect("induced subnet")
    }

    /// Drops every node other than the terminals that has no incident edge.
    pub fn without_isolated_nodes(&self) -> Net {
        let keep: Vec<bool> = (0..self.node_capacity())
            .map(|v| {
                self.has_node(v) && (!self.out_adj[v].is_empty() || !self.in_adj[v].is_empty())
            })
            .collect();
        self.induced(&keep)
    }
}

/// An alternating node/edge sequence `u1 e1 u2 ... e(n-1) un`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Path {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: NodeId) -> Self {
        Path {
            nodes: vec![v],
            edges: Vec::new(),
        }
    }

    /// Builds a path from an edge sequence starting at `start`.
    pub fn from_edges(net: &Net, start: NodeId, edges: &[EdgeId]) -> Option<Self> {
        let mut p = Path::trivial(start);
        for &e in edges {
            let edge = net.edge(e)?;
            if edge.tail != p.end() {
                return None;
            }
            p.push(e, edge.head);
        }
        Some(p)
    }

    pub fn push(&mut self, edge: EdgeId, head: NodeId) {
        self.edges.push(edge);
        self.nodes.push(head);
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("paths are nonempty")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn interior(&self) -> &[NodeId] {
        if self.nodes.len() <= 2 {
            &[]
        } else {
            &self.nodes[1..self.nodes.len() - 1]
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.nodes.len());
        self.nodes.iter().all(|v| seen.insert(*v))
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(mut self, other: &Path) -> Path {
        assert_eq!(self.end(), other.start(), "paths do not meet");
        self.nodes.extend_from_slice(&other.nodes[1..]);
        self.edges.extend_from_slice(&other.edges);
        self
    }

    /// The sub-path between node positions `from..=to`.
    pub fn slice(&self, from: usize, to: usize) -> Path {
        assert!(from <= to && to < self.nodes.len());
        Path {
            nodes: self.nodes[from..=to].to_vec(),
            edges: self.edges[from..to].to_vec(),
        }
    }

    pub fn position(&self, v: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&x| x == v)
    }

    /// Checks that every edge exists in `net` and links consecutive nodes.
    pub fn is_valid_in(&self, net: &Net) -> bool {
        if self.nodes.len() != self.edges.len() + 1 || !net.has_node(self.start()) {
            return false;
        }
        self.edges.iter().enumerate().all(|(i, &e)| {
            net.edge(e)
                .is_some_and(|edge| edge.tail == self.nodes[i] && edge.head == self.nodes[i + 1])
        })
    }
}

/// A simple directed cycle `v0 e0 v1 ... v(k-1) e(k-1) v0`, `k >= 1`.
///
/// Edge `i` goes from `nodes[i]` to `nodes[(i + 1) % k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl Cycle {
    /// Closes a path whose last node equals its first.
    pub fn from_closed_path(p: &Path) -> Option<Cycle> {
        if p.is_empty() || p.start() != p.end() {
            return None;
        }
        let nodes = p.nodes()[..p.len()].to_vec();
        let c = Cycle {
            nodes,
            edges: p.edges().to_vec(),
        };
        let mut seen = std::collections::HashSet::new();
        c.nodes.iter().all(|v| seen.insert(*v)).then_some(c)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }

    /// Same cycle listed from the node at index `start`.
    pub fn rotated(&self, start: usize) -> Cycle {
        let k = self.len();
        Cycle {
            nodes: (0..k).map(|i| self.nodes[(start + i) % k]).collect(),
            edges: (0..k).map(|i| self.edges[(start + i) % k]).collect(),
        }
    }

    /// Walks forward along the cycle from index `from` to index `to`.
    pub fn arc(&self, from: usize, to: usize) -> Path {
        let k = self.len();
        let mut p = Path::trivial(self.nodes[from]);
        let mut i = from;
        while i != to {
            p.push(self.edges[i], self.nodes[(i + 1) % k]);
            i = (i + 1) % k;
        }
        p
    }

    pub fn is_valid_in(&self, net: &Net) -> bool {
        let k = self.len();
        k > 0
            && self.edges.iter().enumerate().all(|(i, &e)| {
                net.edge(e).is_some_and(|edge| {
                    edge.tail == self.nodes[i] && edge.head == self.nodes[(i + 1) % k]
                })
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Result of a breadth-first search: hop distances and a shortest-path forest.
#[derive(Debug, Clone)]
pub struct Bfs {
    direction: Direction,
    dist: Vec<Option<usize>>,
    parent: Vec<Option<EdgeId>>,
    order: Vec<NodeId>,
}

impl Bfs {
    pub fn distance(&self, v: NodeId) -> Option<usize> {
        self.dist.get(v).copied().flatten()
    }

    pub fn reached(&self, v: NodeId) -> bool {
        self.distance(v).is_some()
    }

    pub fn parent_edge(&self, v: NodeId) -> Option<EdgeId> {
        self.parent[v]
    }

    /// Nodes in the order they were discovered.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// The tree path, oriented along the edges: root to `v` for a forward
    /// search, `v` to root for a backward one.
    pub fn path(&self, net: &Net, v: NodeId) -> Option<Path> {
        self.distance(v)?;
        let mut nodes = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some(e) = self.parent[cur] {
            edges.push(e);
            cur = match self.direction {
                Direction::Forward => net.tail(e),
                Direction::Backward => net.head(e),
            };
            nodes.push(cur);
        }
        if self.direction == Direction::Forward {
            nodes.reverse();
            edges.reverse();
        }
        Some(Path { nodes, edges })
    }
}

/// Breadth-first search from `roots`, never traversing an edge for which
/// `forbidden` holds. A backward search follows edges from head to tail.
pub fn bfs_shortest(
    net: &Net,
    roots: &[NodeId],
    forbidden: impl Fn(EdgeId) -> bool,
    direction: Direction,
) -> Bfs {
    let n = net.node_capacity();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for &r in roots {
        if net.has_node(r) && dist[r].is_none() {
            dist[r] = Some(0);
            order.push(r);
            queue.push_back(r);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have a distance");
        let adj = match direction {
            Direction::Forward => net.out_edges(u),
            Direction::Backward => net.in_edges(u),
        };
        for &e in adj {
            if forbidden(e) {
                continue;
            }
            let v = match direction {
                Direction::Forward => net.head(e),
                Direction::Backward => net.tail(e),
            };
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                parent[v] = Some(e);
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    Bfs {
        direction,
        dist,
        parent,
        order,
    }
}

fn reach(net: &Net, root: NodeId, direction: Direction) -> Vec<bool> {
    let bfs = bfs_shortest(net, &[root], |_| false, direction);
    (0..net.node_capacity()).map(|v| bfs.reached(v)).collect()
}

/// The maximal subnet whose nodes are all reachable from `s` and reach `t`.
///
/// When `s` cannot reach `t` the result has only the two terminals.
pub fn make_st_connected(net: &Net) -> Net {
    let from_s = reach(net, net.source(), Direction::Forward);
    let to_t = reach(net, net.target(), Direction::Backward);
    if !from_s[net.target()] {
        let none = vec![false; net.node_capacity()];
        return net.retain_edges(|_| false).induced(&none);
    }
    let keep: Vec<bool> = (0..net.node_capacity())
        .map(|v| from_s[v] && to_t[v])
        .collect();
    net.induced(&keep)
}

/// True when `s` reaches `t`.
pub fn st_reachable(net: &Net) -> bool {
    reach(net, net.source(), Direction::Forward)[net.target()]
}

/// True iff the net has no directed cycle (self-loops count as cycles).
pub fn is_acyclic(net: &Net) -> bool {
    topological_order(net).is_some()
}

/// Kahn's algorithm; `None` when a cycle exists.
pub fn topological_order(net: &Net) -> Option<Vec<NodeId>> {
    let mut indeg = vec![0usize; net.node_capacity()];
    for e in net.edges() {
        indeg[e.head] += 1;
    }
    let mut stack: Vec<NodeId> = net.nodes().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(net.node_count());
    while let Some(u) = stack.pop() {
        order.push(u);
        for &e in net.out_edges(u) {
            let v = net.head(e);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    (order.len() == net.node_count()).then_some(order)
}

/// Strongly connected component index per node (`usize::MAX` for absent
/// nodes), computed with an iterative Tarjan.
pub fn strongly_connected_components(net: &Net) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = net.node_capacity();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in net.nodes() {
        if index[root] != UNSET {
            continue;
        }
        // (node, next out-edge position)
        let mut call: Vec<(NodeId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(u, pos)) = call.last() {
            if let Some(&e) = net.out_edges(u).get(pos) {
                call.last_mut().expect("nonempty").1 += 1;
                let v = net.head(e);
                if index[v] == UNSET {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// For every node, whether it lies on some directed cycle.
pub fn on_cycle_flags(net: &Net) -> Vec<bool> {
    let comp = strongly_connected_components(net);
    let mut size = vec![0usize; net.node_capacity()];
    for v in net.nodes() {
        size[comp[v]] += 1;
    }
    let mut flags = vec![false; net.node_capacity()];
    for v in net.nodes() {
        flags[v] = size[comp[v]] > 1;
    }
    for e in net.edges() {
        if e.tail == e.head {
            flags[e.tail] = true;
        }
    }
    flags
}

/// A shortest cycle through `v`, if any.
pub fn shortest_cycle_through(net: &Net, v: NodeId) -> Option<Cycle> {
    if let Some(&e) = net.out_edges(v).iter().find(|&&e| net.head(e) == v) {
        let mut p = Path::trivial(v);
        p.push(e, v);
        return Cycle::from_closed_path(&p);
    }
    // Backward search towards v, then close with the first edge out of v
    // whose head reaches v.
    let back = bfs_shortest(net, &[v], |_| false, Direction::Backward);
    let first = net
        .out_edges(v)
        .iter()
        .copied()
        .filter(|&e| back.reached(net.head(e)))
        .min_by_key(|&e| (back.distance(net.head(e)), e))?;
    let mut p = Path::trivial(v);
    p.push(first, net.head(first));
    let rest = back.path(net, net.head(first))?;
    Cycle::from_closed_path(&p.concat(&rest))
}
