use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use thermalink::cfrac::mcf_steady;
use thermalink::operators::ModelParams;
use thermalink::parallel::{map_indexed, Execution};
use thermalink::stochastic::{ensemble_average_with, EnsembleOptions};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn trajectory_ensemble(c: &mut Criterion) {
    let p = ModelParams::symmetric(1.0, 0.05, 4.0);
    let t: Vec<f64> = (0..=10).map(|k| k as f64).collect();
    let mut g = c.benchmark_group("ensemble_500_trajectories");
    g.sample_size(10);
    for (name, execution) in MODES {
        let opts = EnsembleOptions { execution, ..EnsembleOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| ensemble_average_with(&p, 500, &t, 1, opts).unwrap())
        });
    }
    g.finish();
}

fn steady_sweep(c: &mut Criterion) {
    let occupations: Vec<f64> = (0..16).map(|k| 10f64.powf(k as f64 / 5.0)).collect();
    let mut g = c.benchmark_group("mcf_sweep_16_points");
    g.sample_size(10);
    for (name, execution) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                map_indexed(occupations.len(), execution, |i| {
                    mcf_steady(&ModelParams::symmetric(1.0, 0.01, occupations[i]), None).unwrap().concurrence
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, trajectory_ensemble, steady_sweep);
criterion_main!(benches);
