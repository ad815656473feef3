use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use entrokit::discrete::{binomial_to_poisson, nb_to_logarithmic, DEFAULT_R_GRID};
use entrokit::gaussian::fgn_det_sweep;
use entrokit::validation::{oracle_equivalence, CLOSED_FORM_FAMILIES, CORE_MEASURES, DEFAULT_SEED};
use entrokit::{Exec, OracleConfig};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn oracle_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_equivalence");
    g.sample_size(10);
    let cfg = OracleConfig::default();
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                oracle_equivalence(
                    &CLOSED_FORM_FAMILIES,
                    &CORE_MEASURES,
                    black_box(20),
                    DEFAULT_SEED,
                    &cfg,
                    exec,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

fn fgn_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("fgn_det_sweep");
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    for n in [10, 50, 200] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| fgn_det_sweep(n, &grid, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn convergence_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("convergence_tables");
    let n_grid: Vec<u64> = (1..=40).map(|i| 25 * i * i).collect();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("binomial", name), |b| {
            b.iter(|| binomial_to_poisson(black_box(2.0), &n_grid, 0.0, exec).unwrap())
        });
        g.bench_function(BenchmarkId::new("nb", name), |b| {
            b.iter(|| nb_to_logarithmic(black_box(0.5), &DEFAULT_R_GRID, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, oracle_sweep, fgn_sweep, convergence_tables);
criterion_main!(benches);
