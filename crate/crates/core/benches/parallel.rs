//! `par_map` against `seq_map` on two workloads: exact judging of the gl(3)
//! relation table and Mellin-Barnes evaluation on an N=2 grid. Without the
//! `parallel` feature both sides run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gztoda_core::gzrep::{gl_relation_identities, GzRep};
use gztoda_core::par::{par_map, seq_map};
use gztoda_core::toda::{EigenfunctionSpec, MbKernel};
use gztoda_core::verify::Mode;

fn judge(c: &mut Criterion) {
    let ids = gl_relation_identities(&GzRep::new(3)).expect("identities");
    let mut g = c.benchmark_group("gl3 exact judging");
    g.sample_size(10);
    g.bench_function("par_map", |b| b.iter(|| par_map(black_box(&ids), |id| id.judge(Mode::Exact, 0, 10))));
    g.bench_function("seq_map", |b| b.iter(|| seq_map(black_box(&ids), |id| id.judge(Mode::Exact, 0, 10))));
    g.finish();
}

fn eigenfunction(c: &mut Criterion) {
    let kernel = MbKernel::new(&EigenfunctionSpec::real(&[0.7, -0.3], 1.0)).expect("kernel");
    let grid: Vec<[f64; 2]> =
        (0..41 * 41).map(|i| [-3.0 + 0.15 * (i / 41) as f64, -3.0 + 0.15 * (i % 41) as f64]).collect();
    let mut g = c.benchmark_group("psi on 41x41 grid");
    g.bench_function("par_map", |b| b.iter(|| par_map(black_box(&grid), |x| kernel.eval(x))));
    g.bench_function("seq_map", |b| b.iter(|| seq_map(black_box(&grid), |x| kernel.eval(x))));
    g.finish();
}

criterion_group!(benches, judge, eigenfunction);
criterion_main!(benches);
