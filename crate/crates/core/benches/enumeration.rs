use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use proofleg::fixtures;
use proofleg::metrics::Evaluator;
use proofleg::order::{fold_topo_orders, fold_topo_orders_seq};
use proofleg::ProofGraph;

fn best_then(g: &ProofGraph, parallel: bool) -> usize {
    let init = || (Evaluator::new(g), usize::MAX);
    let step = |(e, best): &mut (Evaluator, usize), seq: &[usize]| {
        *best = (*best).min(e.eval(seq).path_count);
    };
    let (_, best) = if parallel {
        fold_topo_orders(g, None, init, step, |a, b| if b.1 < a.1 { b } else { a })
    } else {
        fold_topo_orders_seq(g, None, init, step)
    }
    .expect("no cap");
    best
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_then_paths");
    group.sample_size(10);
    for (name, g) in [("fig6", fixtures::fig6()), ("fig11", fixtures::fig11())] {
        group.bench_with_input(BenchmarkId::new("sequential", name), &g, |b, g| {
            b.iter(|| best_then(g, false))
        });
        group.bench_with_input(BenchmarkId::new("parallel", name), &g, |b, g| {
            b.iter(|| best_then(g, true))
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
