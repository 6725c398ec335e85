use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use cliquestream::adversary::{greedy_nemesis, occ_nemesis, play_skeleton, Variant};
use cliquestream::analysis::{recurrence_table, OccParams};
use cliquestream::random::{erdos_renyi, rng};
use cliquestream::solver::max_clique_partition;
use cliquestream::strategy::{Greedy, Occ, GAMMA_DEFAULT};
use cliquestream::{run_online, Objective, OptMode, SolveBudget};

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solver");
    let nemesis = greedy_nemesis(16).unwrap().graph();
    group.bench_function("greedy_nemesis_16", |b| {
        b.iter(|| max_clique_partition(black_box(&nemesis), SolveBudget::default()).unwrap())
    });
    let random = erdos_renyi(16, 0.5, &mut rng(1));
    group.bench_function("gnp_16_0.5", |b| {
        b.iter(|| max_clique_partition(black_box(&random), SolveBudget::default()).unwrap())
    });
    group.finish();
}

fn strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("strategies");
    let inst = greedy_nemesis(2000).unwrap();
    let opt = OptMode::Analytic(inst.analytic_opt.clone().unwrap());
    group.bench_function("greedy_nemesis_2000", |b| {
        b.iter(|| run_online(&mut Greedy::new(false), black_box(&inst.events), &opt, Objective::Max).unwrap())
    });
    let inst = occ_nemesis(GAMMA_DEFAULT, 5, Variant::Plain).unwrap();
    let opt = OptMode::Analytic(inst.analytic_opt.clone().unwrap());
    group.bench_function("occ_nemesis_5_phases", |b| {
        b.iter_batched(
            || Occ::new(GAMMA_DEFAULT).unwrap(),
            |mut occ| run_online(&mut occ, &inst.events, &opt, Objective::Max).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("skeleton_depth_3_greedy", |b| {
        b.iter(|| play_skeleton(&mut Greedy::new(false), black_box(3), None).unwrap())
    });
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let p = OccParams::optimal();
    c.bench_function("recurrence_table_30", |b| {
        b.iter(|| recurrence_table(black_box(p.gamma), black_box(p.x), 30).unwrap())
    });
}

criterion_group!(benches, solver, strategies, analysis);
criterion_main!(benches);
