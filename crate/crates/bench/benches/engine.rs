//! Timings of the expensive stages: canonicalization, the differential,
//! complete decomposability and the necklace period.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use motgraph::augmented::{generic_args, make_eps};
use motgraph::bar::check_completely_decomposable;
use motgraph::canonical::canonical_form;
use motgraph::corpus::example;
use motgraph::dga::differential;
use motgraph::hodge_numeric::necklace_period;
use motgraph::{Budget, Graph, GraphSum};

fn five_edge() -> Graph {
    Graph::from_triples(3, &[(2, 0, "r1"), (0, 2, "r2"), (0, 1, "r3"), (1, 2, "r4"), (1, 0, "r5")]).unwrap()
}

fn canonicalize(c: &mut Criterion) {
    let g = five_edge();
    c.bench_function("canonical_form/five-edge", |b| b.iter(|| canonical_form(black_box(&g)).unwrap()));
    let herbert = example("herbert4").unwrap();
    c.bench_function("to_sum/herbert4", |b| b.iter(|| herbert.to_sum(&Budget::default()).unwrap()));
}

fn diff(c: &mut Criterion) {
    let s = example("slashedbox-5").unwrap().to_sum(&Budget::default()).unwrap();
    c.bench_function("differential/slashedbox-5", |b| b.iter(|| differential(black_box(&s)).unwrap()));
    let (a0, a) = generic_args(3);
    let eps = make_eps(&a0, &a).unwrap();
    c.bench_function("differential/eps3", |b| b.iter(|| differential(black_box(&eps)).unwrap()));
}

fn decomposability(c: &mut Criterion) {
    let mut g = c.benchmark_group("decomposability");
    g.sample_size(10);
    for n in [2, 3] {
        let (a0, a) = generic_args(n);
        let eps = make_eps(&a0, &a).unwrap();
        g.bench_function(format!("eps{n}"), |b| b.iter(|| check_completely_decomposable(black_box(&eps), 6).unwrap()));
    }
    let s: GraphSum = example("necklace-4").unwrap().to_sum(&Budget::default()).unwrap();
    g.bench_function("necklace-4", |b| b.iter(|| check_completely_decomposable(black_box(&s), 6).unwrap()));
    g.finish();
}

fn period(c: &mut Criterion) {
    let mut g = c.benchmark_group("period");
    g.sample_size(10);
    g.bench_function("n1", |b| b.iter(|| necklace_period(black_box(&[2.0, 3.0])).unwrap()));
    g.bench_function("n2", |b| b.iter(|| necklace_period(black_box(&[2.0, 3.0, 5.0])).unwrap()));
    g.finish();
}

criterion_group!(benches, canonicalize, diff, decomposability, period);
criterion_main!(benches);
