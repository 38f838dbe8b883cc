use criterion::{black_box, criterion_group, criterion_main, Criterion};

use locman::cost::{paging_cost_as, ByteTable, NetworkParams, PagingReading, ProbabilityList, RADIO};
use locman::grid::{make_partition, CellGrid, Geometry, PartitionScheme};
use locman::montecarlo::{simulate_paging, walk_crossing_stats, WalkConfig};
use locman::savings::{optimum_k, Distribution, SavingsParams};
use locman::tally_advanced;

fn tallies(c: &mut Criterion) {
    let grid = CellGrid::new(Geometry::Hexagonal, 50).unwrap();
    let part = make_partition(&grid, &PartitionScheme::Blocks { rows: 5, cols: 5 }).unwrap();
    c.bench_function("tally_advanced hex 50x50", |b| {
        b.iter(|| tally_advanced(black_box(&grid), black_box(&part)))
    });
}

fn optimum(c: &mut Criterion) {
    let t = SavingsParams::radio_default();
    c.bench_function("optimum_k 1..=1000", |b| {
        b.iter(|| optimum_k(black_box(&t), 1..=1000, &Distribution::UniformConditional).unwrap())
    });
}

fn paging(c: &mut Criterion) {
    let params = NetworkParams::default();
    let bytes = ByteTable::default();
    let list = ProbabilityList::new(vec![0.4, 0.05, 0.03, 0.02, 0.01, 0.008, 0.005, 0.003, 0.002]).unwrap();
    c.bench_function("paging_cost_as principled k=9", |b| {
        b.iter(|| paging_cost_as(&params, &bytes, RADIO, 10, black_box(&list), PagingReading::Principled))
    });
    c.bench_function("simulate_paging 1e5", |b| {
        b.iter(|| simulate_paging(&list, &params, &bytes, RADIO, 10, 100_000, 1).unwrap())
    });
}

fn walk(c: &mut Criterion) {
    let grid = CellGrid::new(Geometry::Square, 10).unwrap();
    let part = make_partition(&grid, &PartitionScheme::Quadrants).unwrap();
    let mut group = c.benchmark_group("walk");
    group.sample_size(10);
    group.bench_function("walk 1e6 steps", |b| {
        b.iter(|| {
            walk_crossing_stats(&WalkConfig {
                grid: &grid,
                partition: &part,
                steps: 1_000_000,
                seed: 9,
            })
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, tallies, optimum, paging, walk);
criterion_main!(benches);
