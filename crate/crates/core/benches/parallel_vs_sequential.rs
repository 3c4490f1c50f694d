use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use comphom_core::linalg::{snf, IntMatrix};
use comphom_core::paths::{build_complex, build_trace_complex, enumerate_paths, PathModel, TraceShape};
use comphom_core::verifier::{all_orders, build_config_graph, CnfFormula, GraphMode};
use comphom_core::{BuildOptions, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn opts(execution: Execution) -> BuildOptions {
    BuildOptions {
        execution,
        ..BuildOptions::default()
    }
}

// 4 variables, every assignment contributes a run
fn workload_formula() -> CnfFormula {
    CnfFormula::new(4, vec![vec![1, 2], vec![-1, 3], vec![2, -4], vec![-2, 3, 4], vec![1, -3]]).unwrap()
}

fn paths(c: &mut Criterion) {
    let f = workload_formula();
    let g = build_config_graph(&f, &GraphMode::AllAssignments, f.num_clauses() + 1, 12).unwrap();
    let mut group = c.benchmark_group("enumerate_paths");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("reachability", name), &exec, |b, &exec| {
            b.iter(|| enumerate_paths(black_box(&g), 4, PathModel::Reachability, &opts(exec)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("build_complex");
    group.sample_size(20);
    for (name, exec) in MODES {
        for model in [PathModel::Step, PathModel::Reachability] {
            group.bench_with_input(BenchmarkId::new(format!("{model:?}"), name), &exec, |b, &exec| {
                b.iter(|| build_complex(black_box(&g), 3, model, &opts(exec)).unwrap())
            });
        }
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let f = workload_formula();
    let a = f.first_satisfying(20).unwrap().unwrap();
    let orders = all_orders(f.num_clauses(), 1000).unwrap();
    let tc = build_trace_complex(&f, &a, &orders, TraceShape::Subdivided).unwrap();
    let mut group = c.benchmark_group("trace_homology");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| tc.complex.homology(exec).unwrap())
        });
    }
    group.finish();
}

fn smith_batch(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let batch: Vec<IntMatrix> = (0..64)
        .map(|_| {
            let data: Vec<i64> = (0..100).map(|_| rng.gen_range(-9..=9)).collect();
            IntMatrix::from_i64(10, 10, &data)
        })
        .collect();
    let mut group = c.benchmark_group("snf_batch_10x10");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map(black_box(&batch), snf))
        });
    }
    group.finish();
}

criterion_group!(benches, paths, homology, smith_batch);
criterion_main!(benches);
