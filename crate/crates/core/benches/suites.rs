//! Parallel against sequential execution on the heavier kernels.
//! Without the `parallel` feature both variants run sequentially.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ehall_core::kfield::{FieldElem, Params};
use ehall_core::lattice::{enumerate_convex, Region, Segment, Window};
use ehall_core::par::{par_map, set_jobs};
use ehall_core::presentation::{isomorphism_certify, Reducer};
use ehall_core::shuffle::ShuffleAlgebra;

fn algebra() -> Arc<ShuffleAlgebra<FieldElem>> {
    Arc::new(ShuffleAlgebra::new(Params::symbolic(), 5))
}

const MODES: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn convex_ranks(c: &mut Criterion) {
    let alg = algebra();
    let window = Window::new(-2, 2).unwrap();
    let cells: Vec<(i64, i64)> = (1..=3).flat_map(|r| (-2 * r..=2 * r).map(move |d| (r, d))).collect();
    let mut g = c.benchmark_group("convex_ranks");
    g.sample_size(10);
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_jobs(jobs);
            b.iter(|| {
                par_map(cells.clone(), |(r, d)| {
                    let family = enumerate_convex(Segment::of(r, d), Region::Gt, window).unwrap();
                    let images: Vec<_> = family.iter().map(|p| alg.path_image(p).unwrap()).collect();
                    alg.rank_of(&images)
                })
            })
        });
    }
    g.finish();
}

fn isomorphism(c: &mut Criterion) {
    let alg = algebra();
    let window = Window::new(-2, 2).unwrap();
    let cells: Vec<(i64, i64)> = (1..=3).flat_map(|r| (-2..=2).map(move |d| (r, d))).collect();
    let mut g = c.benchmark_group("isomorphism");
    g.sample_size(10);
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_jobs(jobs);
            b.iter(|| {
                let red = Reducer::new(alg.clone(), false);
                par_map(cells.clone(), |(r, d)| isomorphism_certify(&red, r, d, window).passed())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, convex_ranks, isomorphism);
criterion_main!(benches);
