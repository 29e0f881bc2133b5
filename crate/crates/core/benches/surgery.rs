use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use knot_surgery::cfk::builtin;
use knot_surgery::par::{self, ExecutionMode};
use knot_surgery::surgery::hf_plus;

fn modes(c: &mut Criterion) {
    let cases = [("figure_eight", 7, 3), ("torus_2_5", 11, 2), ("trefoil_right", 13, 4)];
    let mut group = c.benchmark_group("hf_plus");
    group.sample_size(10);
    for (name, p, q) in cases {
        let k = builtin(name).unwrap();
        // warm the unknot calibration cache so both modes measure the same work
        hf_plus(&k, p, q).unwrap();
        for (label, mode) in [("parallel", ExecutionMode::Parallel), ("sequential", ExecutionMode::Sequential)] {
            group.bench_with_input(BenchmarkId::new(label, format!("{name} {p}/{q}")), &k, |b, k| {
                par::set_mode(mode);
                b.iter(|| hf_plus(black_box(k), p, q).unwrap());
            });
        }
    }
    par::set_mode(ExecutionMode::Parallel);
    group.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);
