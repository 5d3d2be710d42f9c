//! Action evaluation and batched minimization, parallel against sequential.
//!
//! `cargo bench -p eqorbit-core` measures the rayon build on a one-thread pool
//! and on the full pool; `cargo bench -p eqorbit-core --no-default-features`
//! measures the sequential build under the same benchmark ids.

use std::hint::black_box;
use std::path::PathBuf;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqorbit_core::io::GroupFile;
use eqorbit_core::optimizer::{minimize, random_init, MinimizeConfig};
use eqorbit_core::par::map_tasks;
use eqorbit_core::pathspace::{evaluate, Quadrature, QuadratureParams};
use eqorbit_core::symmetry::SymmetryGroup;

fn figure_eight() -> Arc<SymmetryGroup> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../groups/figure-eight.json");
    Arc::new(GroupFile::read(&path).unwrap().build().unwrap())
}

/// (label, thread count) pairs to run under; `None` means the ambient pool.
fn modes() -> Vec<(&'static str, Option<usize>)> {
    if cfg!(feature = "parallel") {
        vec![("parallel-1", Some(1)), ("parallel", None)]
    } else {
        vec![("sequential", None)]
    }
}

fn run_in<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        return rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(f);
    }
    let _ = threads;
    f()
}

fn bench_evaluate(c: &mut Criterion) {
    let group = figure_eight();
    let mut g = c.benchmark_group("evaluate");
    for nu in [256, 1024, 4096] {
        let s = 12;
        let path = random_init(group.clone(), s, 1, 1.0, 1e-9).unwrap();
        let quad = Quadrature::new(QuadratureParams::new(nu).unwrap(), s).unwrap();
        for (label, threads) in modes() {
            g.bench_with_input(BenchmarkId::new(label, nu), &nu, |b, _| {
                run_in(threads, || b.iter(|| black_box(evaluate(&path, &quad).unwrap())))
            });
        }
    }
    g.finish();
}

fn bench_restarts(c: &mut Criterion) {
    let group = figure_eight();
    let quad = Quadrature::new(QuadratureParams::new(128).unwrap(), 8).unwrap();
    let cfg = MinimizeConfig { max_iters: 40, ..MinimizeConfig::default() };
    let starts: Vec<_> = (0..8).map(|seed| random_init(group.clone(), 8, seed, 1.0, 1e-9).unwrap()).collect();
    let mut g = c.benchmark_group("restarts");
    g.sample_size(10);
    for (label, threads) in modes() {
        g.bench_function(label, |b| {
            run_in(threads, || {
                b.iter(|| black_box(map_tasks(starts.len(), |i| minimize(&starts[i], &quad, &cfg).iterations)))
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_evaluate, bench_restarts);
criterion_main!(benches);
