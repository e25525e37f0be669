//! Seeded random nets for fuzzing, property tests and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::net::{make_st_connected, Net, NodeId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An arbitrary multi-digraph on `2..=max_nodes` nodes with up to `max_edges`
/// edges. Self-loops, parallel edges and edges into `s` or out of `t` all
/// occur.
pub fn random_net<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Net {
    let n = rng.gen_range(2..=max_nodes.max(2));
    let m = rng.gen_range(0..=max_edges);
    let s = rng.gen_range(0..n);
    let t = (s + rng.gen_range(1..n)) % n;
    let edges: Vec<(NodeId, NodeId)> = (0..m)
        .map(|_| {
            // Bias towards st-connecting edges so that cyclic nets with
            // several st-paths are common.
            match rng.gen_range(0..10) {
                0 => (s, rng.gen_range(0..n)),
                1 => (rng.gen_range(0..n), t),
                _ => (rng.gen_range(0..n), rng.gen_range(0..n)),
            }
        })
        .collect();
    Net::from_edges(n, edges, s, t).expect("s != t")
}

/// A net built around a cycle on nodes `1..=k`, with `s = 0`, `t = n - 1`,
/// random edges from `s`, into `t`, chords and detours. Cycles with several
/// entries and exits are common here, unlike in [`random_net`].
pub fn random_cyclic_net<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Net {
    let n = rng.gen_range(5..=max_nodes.max(5));
    let k = rng.gen_range(2..=n - 2);
    let (s, t) = (0, n - 1);
    let mut edges: Vec<(NodeId, NodeId)> = (1..=k).map(|i| (i, i % k + 1)).collect();
    let budget = rng.gen_range(edges.len() + 2..=max_edges.max(edges.len() + 2));
    while edges.len() < budget {
        let e = match rng.gen_range(0..6) {
            0 => (s, rng.gen_range(1..t)),
            1 => (rng.gen_range(1..t), t),
            _ => (rng.gen_range(0..n), rng.gen_range(0..n)),
        };
        edges.push(e);
    }
    Net::from_edges(n, edges, s, t).expect("s != t")
}

/// A random acyclic st-connected net with at most `max_nodes` nodes and
/// at least one edge.
pub fn random_acyclic_st_net<R: Rng + ?Sized>(
    rng: &mut R,
    max_nodes: usize,
    max_edges: usize,
) -> Net {
    loop {
        let n = rng.gen_range(2..=max_nodes.max(2));
        let m = rng.gen_range(1..=max_edges.max(1));
        // Nodes are numbered in topological order; s = 0, t = n - 1.
        let edges: Vec<(NodeId, NodeId)> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n - 1);
                let v = rng.gen_range(u + 1..n);
                (u, v)
            })
            .collect();
        let net = make_st_connected(&Net::from_edges(n, edges, 0, n - 1).expect("s != t"));
        if net.edge_count() > 0 {
            return net;
        }
    }
}

/// A cyclic net on `n` nodes arranged in layers of width about `sqrt(n)`,
/// with about `3n` edges: forward edges between consecutive layers, edges
/// inside a layer, and backward edges to earlier layers.
pub fn layered_cyclic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Net {
    assert!(n >= 4);
    let width = ((n as f64).sqrt() as usize).max(2);
    let inner = n - 2;
    let layer_of = |v: NodeId| (v - 1) / width;
    let layers = inner.div_ceil(width);
    let layer_nodes = |l: usize| (1 + l * width)..(1 + ((l + 1) * width).min(inner));
    let (s, t) = (0, n - 1);
    let mut edges = Vec::with_capacity(3 * n);
    for v in layer_nodes(0) {
        edges.push((s, v));
    }
    for v in layer_nodes(layers - 1) {
        edges.push((v, t));
    }
    for v in 1..=inner {
        let l = layer_of(v);
        if l + 1 < layers {
            let next = layer_nodes(l + 1);
            edges.push((v, rng.gen_range(next)));
        }
    }
    while edges.len() < 3 * n {
        let v = rng.gen_range(1..=inner);
        let l = layer_of(v);
        let kind = rng.gen_range(0..3);
        let target_layer = match kind {
            0 if l + 1 < layers => l + 1,
            1 => l,
            _ => rng.gen_range(0..=l),
        };
        let w = rng.gen_range(layer_nodes(target_layer));
        if w != v {
            edges.push((v, w));
        }
    }
    Net::from_edges(n, edges, s, t).expect("s != t")
}

/// A series chain of diamonds on about `n` nodes with back edges added
/// until there are `3n` edges. Junction `i` is node `3i`, its diamond's
/// middle nodes are `3i + 1` and `3i + 2`. Every back edge returns to a
/// node at or before the junction it must pass again, so all of them are
/// redundant and the net is not vulnerable; the detector has to delete them
/// cycle by cycle.
pub fn diamond_chain<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Net {
    assert!(n >= 4);
    let k = (n - 1) / 3;
    let (s, t) = (0, 3 * k);
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..k {
        let j = 3 * i;
        edges.extend([(j, j + 1), (j, j + 2), (j + 1, j + 3), (j + 2, j + 3)]);
    }
    while edges.len() < 3 * n {
        let i = rng.gen_range(0..k);
        let from = 3 * i + rng.gen_range(1..=3);
        edges.push((from, rng.gen_range(0..=3 * i)));
    }
    Net::from_edges(t + 1, edges, s, t).expect("s != t")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{is_acyclic, st_reachable};

    #[test]
    fn deterministic() {
        let a = random_net(&mut rng(7), 8, 14);
        let b = random_net(&mut rng(7), 8, 14);
        assert_eq!(a, b);
    }

    #[test]
    fn acyclic_nets_are_st_connected() {
        let mut r = rng(1);
        for _ in 0..200 {
            let net = random_acyclic_st_net(&mut r, 8, 14);
            assert!(is_acyclic(&net));
            assert!(st_reachable(&net));
            assert_eq!(make_st_connected(&net), net);
        }
    }

    #[test]
    fn layered_shape() {
        let net = layered_cyclic(&mut rng(3), 100);
        assert_eq!(net.node_count(), 100);
        assert_eq!(net.edge_count(), 300);
        assert!(!is_acyclic(&net));
        assert!(st_reachable(&net));
    }

    #[test]
    fn diamond_chain_is_not_vulnerable() {
        let net = diamond_chain(&mut rng(5), 40);
        assert_eq!(net.node_count(), 40);
        assert_eq!(net.edge_count(), 120);
        let v = crate::is_vulnerable(&net).unwrap();
        assert!(!v.vulnerable);
        assert_eq!(v.deleted_edges.len(), 120 - 4 * 13);
    }
}
