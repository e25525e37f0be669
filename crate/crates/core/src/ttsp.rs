//! Recognition of two-terminal series-parallel nets by reduction.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::TtspError;
use crate::net::{make_st_connected, topological_order, Net, NodeId};

/// Working copy of an acyclic st-net. Parallel edges are merged on insertion,
/// so each adjacency is a plain neighbour set.
#[derive(Debug, Clone)]
pub struct ReductionState {
    succ: Vec<HashSet<NodeId>>,
    pred: Vec<HashSet<NodeId>>,
    source: NodeId,
    target: NodeId,
    worklist: Vec<NodeId>,
}

impl ReductionState {
    pub fn new(net: &Net) -> Result<Self, TtspError> {
        if let Some(e) = net.edges().find(|e| e.tail == e.head) {
            return Err(TtspError::Cyclic(e.tail));
        }
        if topological_order(net).is_none() {
            let v = net
                .nodes()
                .find(|&v| !net.out_edges(v).is_empty())
                .unwrap_or(net.source());
            return Err(TtspError::Cyclic(v));
        }
        let connected = make_st_connected(net);
        if let Some(v) = net.nodes().find(|&v| !connected.has_node(v)) {
            return Err(TtspError::NotStConnected(v));
        }
        let n = net.node_capacity();
        let mut succ = vec![HashSet::new(); n];
        let mut pred = vec![HashSet::new(); n];
        for e in net.edges() {
            succ[e.tail].insert(e.head);
            pred[e.head].insert(e.tail);
        }
        Ok(ReductionState {
            succ,
            pred,
            source: net.source(),
            target: net.target(),
            worklist: net.nodes().collect(),
        })
    }

    fn series_candidate(&self, v: NodeId) -> bool {
        v != self.source && v != self.target && self.pred[v].len() == 1 && self.succ[v].len() == 1
    }

    // Replaces x -> v -> y by x -> y; an existing x -> y absorbs it.
    fn reduce_series(&mut self, v: NodeId) -> Result<(), TtspError> {
        let x = *self.pred[v].iter().next().expect("one predecessor");
        let y = *self.succ[v].iter().next().expect("one successor");
        if x == y {
            return Err(TtspError::Cyclic(v));
        }
        self.pred[v].clear();
        self.succ[v].clear();
        self.succ[x].remove(&v);
        self.pred[y].remove(&v);
        self.succ[x].insert(y);
        self.pred[y].insert(x);
        self.worklist.push(x);
        self.worklist.push(y);
        Ok(())
    }

    fn run(&mut self, mut shuffle: Option<&mut ChaCha8Rng>) -> Result<bool, TtspError> {
        loop {
            if let Some(rng) = shuffle.as_deref_mut() {
                self.worklist.shuffle(rng);
            }
            let Some(v) = self.worklist.pop() else {
                break;
            };
            if self.series_candidate(v) {
                self.reduce_series(v)?;
            }
        }
        let single =
            self.succ[self.source].len() == 1 && self.succ[self.source].contains(&self.target);
        let rest_empty = self
            .succ
            .iter()
            .enumerate()
            .all(|(v, out)| v == self.source || out.is_empty());
        Ok(single && rest_empty)
    }
}

/// True iff series and parallel reductions shrink the net to one edge `s -> t`.
///
/// The net must be acyclic and st-connected.
pub fn is_ttsp(net: &Net) -> Result<bool, TtspError> {
    ReductionState::new(net)?.run(None)
}

/// Same verdict, with the worklist reshuffled before every step.
pub fn is_ttsp_shuffled(net: &Net, seed: u64) -> Result<bool, TtspError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ReductionState::new(net)?.run(Some(&mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::fixtures::*;

    #[test]
    fn fixtures() {
        assert!(is_ttsp(&diamond()).unwrap());
        assert!(!is_ttsp(&wheatstone()).unwrap());
        assert!(is_ttsp(&series2()).unwrap());
    }

    #[test]
    fn parallel_edges_merge() {
        let net = Net::from_edges(2, [(0, 1), (0, 1), (0, 1)], 0, 1).unwrap();
        assert!(is_ttsp(&net).unwrap());
    }

    #[test]
    fn rejects_cycles() {
        assert!(matches!(is_ttsp(&fig6b()), Err(TtspError::Cyclic(_))));
        let looped = Net::from_edges(2, [(0, 1), (1, 1)], 0, 1).unwrap();
        assert_eq!(is_ttsp(&looped), Err(TtspError::Cyclic(1)));
    }

    #[test]
    fn rejects_dangling_nodes() {
        let net = Net::from_edges(3, [(0, 1), (0, 2)], 0, 1).unwrap();
        assert_eq!(is_ttsp(&net), Err(TtspError::NotStConnected(2)));
    }

    #[test]
    fn shuffled_agrees() {
        for net in [diamond(), wheatstone(), series2()] {
            let base = is_ttsp(&net).unwrap();
            for seed in 0..100 {
                assert_eq!(is_ttsp_shuffled(&net, seed).unwrap(), base);
            }
        }
    }
}
