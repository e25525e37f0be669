//! Sequential against rayon-backed detection over batches of nets and over
//! all terminal pairs of one net. Without the `parallel` feature only the
//! sequential variants run.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use braess::random::{diamond_chain, layered_cyclic, random_cyclic_net, random_net, rng};
use braess::{is_vulnerable, parallel, Net, NodeId};

fn corpus(len: u64) -> Vec<Net> {
    (0..len)
        .map(|seed| {
            if seed % 2 == 0 {
                random_net(&mut rng(seed), 8, 14)
            } else {
                random_cyclic_net(&mut rng(seed), 8, 14)
            }
        })
        .collect()
}

type BatchMap = fn(&[Net], fn(&Net) -> bool) -> Vec<bool>;

fn verdicts(nets: &[Net], map: BatchMap) -> usize {
    map(nets, |n| is_vulnerable(n).unwrap().vulnerable)
        .into_iter()
        .filter(|&v| v)
        .count()
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch");
    let fuzz = corpus(2_000);
    let chains: Vec<Net> = (0..16)
        .map(|seed| diamond_chain(&mut rng(seed), 100))
        .collect();
    for (name, nets) in [("fuzz-2000", &fuzz), ("diamond-chain-16x100", &chains)] {
        group.bench_with_input(BenchmarkId::new("sequential", name), nets, |b, nets| {
            b.iter(|| verdicts(black_box(nets), |xs, f| parallel::map_sequential(xs, f)))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", name), nets, |b, nets| {
            b.iter(|| verdicts(black_box(nets), |xs, f| parallel::map_parallel(xs, f)))
        });
    }
    group.finish();
}

fn pairs(net: &Net) -> Vec<(NodeId, NodeId)> {
    let nodes: Vec<NodeId> = net.nodes().collect();
    nodes
        .iter()
        .flat_map(|&s| nodes.iter().filter(move |&&t| t != s).map(move |&t| (s, t)))
        .collect()
}

fn pair_verdict(net: &Net, (s, t): (NodeId, NodeId)) -> bool {
    is_vulnerable(&net.with_terminals(s, t).unwrap())
        .unwrap()
        .vulnerable
}

fn all_pairs(c: &mut Criterion) {
    let mut group = c.benchmark_group("all-pairs");
    group.sample_size(10);
    for (name, net) in [
        ("layered-40", layered_cyclic(&mut rng(1), 40)),
        ("diamond-chain-40", diamond_chain(&mut rng(1), 40)),
    ] {
        let ps = pairs(&net);
        group.bench_with_input(BenchmarkId::new("sequential", name), &ps, |b, ps| {
            b.iter(|| parallel::map_sequential(ps, |&p| pair_verdict(&net, p)))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", name), &ps, |b, ps| {
            b.iter(|| parallel::map_parallel(ps, |&p| pair_verdict(&net, p)))
        });
    }
    group.finish();
}

criterion_group!(benches, batch, all_pairs);
criterion_main!(benches);
