use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use toral::corpus::corpus;
use toral::diagram::module::{Level, Shape};
use toral::homalg::resolution::injective_resolution;
use toral::lattice::Group;
use toral::par;

fn resolutions(c: &mut Criterion) {
    let shape = Shape::new(Group::SO3, Level::G, 8, -24, 4).unwrap();
    let mods = corpus(shape, 24, 7).unwrap();
    let mut g = c.benchmark_group("injective_resolution");
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("sequential", mods.len()), &mods, |b, mods| {
        b.iter(|| mods.iter().map(|(_, m)| injective_resolution(m).unwrap().length()).collect::<Vec<_>>())
    });
    g.bench_with_input(BenchmarkId::new(if par::is_parallel() { "parallel" } else { "fallback" }, mods.len()), &mods, |b, mods| {
        b.iter(|| par::map(mods, |(_, m)| injective_resolution(m).unwrap().length()))
    });
    g.finish();
    black_box(&mods);
}

criterion_group!(benches, resolutions);
criterion_main!(benches);
