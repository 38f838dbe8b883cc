//! Spread of the random-walk beta1 estimate across seeds, in units of the
//! binomial standard error. A ratio above 1 means successive crossings are
//! positively correlated.

use locman::grid::{make_partition, CellGrid, Geometry, PartitionScheme};
use locman::montecarlo::{walk_crossing_stats, WalkConfig};
use locman::{betas_from_tally, tally_advanced};

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    for (g, scheme) in [
        (Geometry::Square, PartitionScheme::Quadrants),
        (Geometry::Square, PartitionScheme::Halves),
        (Geometry::Hexagonal, PartitionScheme::Quadrants),
        (Geometry::Hexagonal, PartitionScheme::Halves),
    ] {
        let grid = CellGrid::new(g, 10).unwrap();
        let p = make_partition(&grid, &scheme).unwrap();
        let beta1 = betas_from_tally(&tally_advanced(&grid, &p)).unwrap().beta1;
        let zs: Vec<f64> = (0..seeds)
            .map(|seed| {
                let s = walk_crossing_stats(&WalkConfig { grid: &grid, partition: &p, steps: 1_000_000, seed }).unwrap();
                (s.empirical_beta1() - beta1) / s.standard_error(beta1)
            })
            .collect();
        let n = zs.len() as f64;
        let mean = zs.iter().sum::<f64>() / n;
        let sd = (zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let within = zs.iter().filter(|z| z.abs() < 3.0).count();
        println!("{g} {scheme}: mean z {mean:+.3}, sd z {sd:.3}, within 3 binomial SE {within}/{seeds}");
    }
}
