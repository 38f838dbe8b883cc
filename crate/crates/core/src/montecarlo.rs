//! Monte-Carlo oracles for the border-crossing probabilities and the
//! sequential paging cost.
//!
//! Randomness comes from ChaCha8 streams. Work is cut into fixed-size chunks
//! and chunk `i` of a run seeded with `s` draws from a stream seeded with
//! `splitmix64(s ^ splitmix64(i))`, so results do not depend on how many
//! worker threads process the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost::{ByteTable, NetworkParams, PagingCase, ProbabilityList};
use crate::error::{domain, Result};
use crate::grid::{CellGrid, Neighbor, NeighborClass, Partition};

/// Steps per random-walk chunk.
pub const WALK_CHUNK: u64 = 1 << 16;
/// Trials per paging-simulation chunk.
pub const PAGING_CHUNK: u64 = 1 << 14;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stream for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(chunk)))
}

#[derive(Debug, Clone)]
pub struct WalkConfig<'a> {
    pub grid: &'a CellGrid,
    pub partition: &'a Partition,
    pub steps: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrossingStats {
    pub moves_total: u64,
    /// LA changes inside the zone.
    pub crossings_same_vlr: u64,
    /// Moves into a neighbouring VLR's zone.
    pub crossings_other_vlr: u64,
    /// `(same_vlr, other_vlr)` crossings of each independent chunk, in chunk order.
    pub batches: Vec<(u64, u64)>,
}

impl CrossingStats {
    pub fn crossings(&self) -> u64 {
        self.crossings_same_vlr + self.crossings_other_vlr
    }

    /// Share of LA-border crossings that stay inside the zone.
    pub fn empirical_beta1(&self) -> f64 {
        match self.crossings() {
            0 => 0.0,
            n => self.crossings_same_vlr as f64 / n as f64,
        }
    }

    /// Binomial standard error of [`Self::empirical_beta1`] around `beta1`.
    pub fn standard_error(&self, beta1: f64) -> f64 {
        match self.crossings() {
            0 => f64::INFINITY,
            n => (beta1 * (1.0 - beta1) / n as f64).sqrt(),
        }
    }

    /// Batch-means standard error of [`Self::empirical_beta1`].
    ///
    /// Successive crossings of one walk are positively correlated (a walker
    /// that just crossed a border is next to it), so the binomial error
    /// understates the spread. Chunks are independent and give a ratio
    /// estimator variance instead.
    pub fn batch_standard_error(&self) -> f64 {
        let nb = self.batches.len();
        let total = self.crossings();
        if nb < 2 || total == 0 {
            return f64::INFINITY;
        }
        let beta = self.empirical_beta1();
        let ss: f64 = self
            .batches
            .iter()
            .map(|&(same, other)| (same as f64 - beta * (same + other) as f64).powi(2))
            .sum();
        (ss * nb as f64 / (nb as f64 - 1.0)).sqrt() / total as f64
    }

    fn merge(mut self, o: CrossingStats) -> CrossingStats {
        self.moves_total += o.moves_total;
        self.crossings_same_vlr += o.crossings_same_vlr;
        self.crossings_other_vlr += o.crossings_other_vlr;
        self.batches.extend(o.batches);
        self
    }
}

#[derive(Clone, Copy)]
struct Move {
    to: u32,
    class: NeighborClass,
}

/// Uniform random walk on the torus formed by tiling the zone.
///
/// Each chunk starts from a uniformly drawn cell, which is the walk's
/// stationary distribution on a degree-regular graph.
pub fn walk_crossing_stats(config: &WalkConfig<'_>) -> Result<CrossingStats> {
    if config.steps == 0 {
        return Err(domain("walk needs at least one step"));
    }
    let grid = config.grid;
    let degree = grid.degree();
    let moves: Vec<Move> = grid
        .cells()
        .flat_map(|cell| {
            grid.neighbors(cell).map(move |n| {
                let to = match n {
                    Neighbor::InZone(c) => c,
                    Neighbor::OutOfZone { wrapped, .. } => wrapped,
                };
                Move {
                    to: to.0 as u32,
                    class: grid.classify(config.partition, cell, n),
                }
            })
        })
        .collect();

    let chunks = config.steps.div_ceil(WALK_CHUNK);
    let cells = grid.cell_count();
    let stats = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let len = WALK_CHUNK.min(config.steps - chunk * WALK_CHUNK);
            let mut rng = chunk_rng(config.seed, chunk);
            let mut at = rng.gen_range(0..cells);
            let mut s = CrossingStats {
                moves_total: len,
                ..Default::default()
            };
            for _ in 0..len {
                let mv = moves[at * degree + rng.gen_range(0..degree)];
                match mv.class {
                    NeighborClass::SameLa => {}
                    NeighborClass::OtherLaSameVlr => s.crossings_same_vlr += 1,
                    NeighborClass::OtherVlr => s.crossings_other_vlr += 1,
                }
                at = mv.to as usize;
            }
            s.batches.push((s.crossings_same_vlr, s.crossings_other_vlr));
            s
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(CrossingStats::default(), CrossingStats::merge);
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PagingEstimate {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    /// `failed_pages[j]`: trials in which `j` LAs were paged without success.
    pub failed_pages: Vec<u64>,
}

/// Replays sequential paging for users placed by the residence probabilities.
///
/// A user found in the listed LA of rank `i` costs `i - 1` failed pages before
/// the successful one. A user outside the list has updated its location, so
/// every listed LA fails before its known LA is paged.
pub fn simulate_paging(
    list: &ProbabilityList,
    params: &NetworkParams,
    bytes: &ByteTable,
    interface: &str,
    n_cells: u32,
    trials: u64,
    seed: u64,
) -> Result<PagingEstimate> {
    if trials == 0 {
        return Err(domain("paging simulation needs at least one trial"));
    }
    let nbp1 = bytes.paging(PagingCase::Success, interface)?;
    let nbp2 = bytes.paging(PagingCase::Failure, interface)?;
    let success = params.lambda_t1 * nbp1 + params.lambda_t2 * nbp2;
    let failed_page = nbp2 * (params.lambda_t1 + params.lambda_t2);
    let alphas = list.alphas();
    let k = alphas.len();

    let chunks = trials.div_ceil(PAGING_CHUNK);
    let histogram = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let len = PAGING_CHUNK.min(trials - chunk * PAGING_CHUNK);
            let mut rng = chunk_rng(seed, chunk);
            let mut hist = vec![0u64; k + 1];
            for _ in 0..len {
                let u: f64 = rng.gen();
                let mut cumulative = 0.0;
                let mut failed = 0;
                for &a in alphas {
                    cumulative += a;
                    if u < cumulative {
                        break;
                    }
                    failed += 1;
                }
                hist[failed] += 1;
            }
            hist
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(vec![0u64; k + 1], |mut acc, h| {
            acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
            acc
        });

    let n = trials as f64;
    let cost = |failed: usize| n_cells as f64 * (failed as f64 * failed_page + success);
    let mean: f64 = histogram
        .iter()
        .enumerate()
        .map(|(j, &c)| c as f64 / n * cost(j))
        .sum();
    let var: f64 = histogram
        .iter()
        .enumerate()
        .map(|(j, &c)| c as f64 / n * (cost(j) - mean).powi(2))
        .sum();
    let var = if trials > 1 { var * n / (n - 1.0) } else { 0.0 };
    Ok(PagingEstimate {
        trials,
        mean,
        std_error: (var / n).sqrt(),
        failed_pages: histogram,
    })
}

/// One analytic-vs-simulated comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub check: String,
    pub analytic: f64,
    pub empirical: f64,
    pub std_error: f64,
}

impl ValidationRow {
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            if self.empirical == self.analytic {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.empirical - self.analytic) / self.std_error
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::{betas_from_tally, tally_advanced};
    use crate::cost::{paging_cost_as, paging_cost_cs, PagingReading, RADIO};
    use crate::grid::{make_partition, Geometry, PartitionScheme};

    fn layout(g: Geometry, s: PartitionScheme) -> (CellGrid, Partition) {
        let grid = CellGrid::new(g, 10).unwrap();
        let p = make_partition(&grid, &s).unwrap();
        (grid, p)
    }

    #[test]
    fn single_la_never_crosses_inside() {
        let (g, p) = layout(Geometry::Square, PartitionScheme::Single);
        let s = walk_crossing_stats(&WalkConfig {
            grid: &g,
            partition: &p,
            steps: 50_000,
            seed: 3,
        })
        .unwrap();
        assert_eq!(s.crossings_same_vlr, 0);
        assert!(s.crossings_other_vlr > 0);
        assert_eq!(s.moves_total, 50_000);
    }

    #[test]
    fn walk_is_deterministic() {
        let (g, p) = layout(Geometry::Hexagonal, PartitionScheme::Quadrants);
        let cfg = WalkConfig {
            grid: &g,
            partition: &p,
            steps: 200_000,
            seed: 42,
        };
        assert_eq!(walk_crossing_stats(&cfg).unwrap(), walk_crossing_stats(&cfg).unwrap());
        let other = WalkConfig { seed: 43, ..cfg.clone() };
        assert_ne!(walk_crossing_stats(&cfg).unwrap(), walk_crossing_stats(&other).unwrap());
    }

    #[test]
    fn walk_tracks_advanced_tally() {
        let (g, p) = layout(Geometry::Square, PartitionScheme::Quadrants);
        let beta1 = betas_from_tally(&tally_advanced(&g, &p)).unwrap().beta1;
        let s = walk_crossing_stats(&WalkConfig {
            grid: &g,
            partition: &p,
            steps: 1_000_000,
            seed: 7,
        })
        .unwrap();
        let z = (s.empirical_beta1() - beta1) / s.batch_standard_error();
        assert!(z.abs() < 4.0, "z = {z}");
        assert_eq!(s.batches.len(), 16);
        assert!(s.batch_standard_error() > s.standard_error(beta1));
        assert!((s.empirical_beta1() - 0.482).abs() < 0.01);
    }

    #[test]
    fn certain_first_page_has_no_variance() {
        let params = NetworkParams::default();
        let bytes = ByteTable::default();
        let list = ProbabilityList::new(vec![1.0]).unwrap();
        let est = simulate_paging(&list, &params, &bytes, RADIO, 3, 10_000, 1).unwrap();
        assert_eq!(est.mean, paging_cost_cs(&params, &bytes, RADIO, 3).unwrap());
        assert_eq!(est.std_error, 0.0);

        let empty = ProbabilityList::default();
        let est = simulate_paging(&empty, &params, &bytes, RADIO, 3, 1_000, 1).unwrap();
        assert_eq!(est.mean, paging_cost_cs(&params, &bytes, RADIO, 3).unwrap());
    }

    #[test]
    fn paging_simulation_matches_hand_expansion() {
        let params = NetworkParams::default();
        let bytes = ByteTable::default();
        let list = ProbabilityList::new(vec![0.8, 0.1, 0.05]).unwrap();
        let est = simulate_paging(&list, &params, &bytes, RADIO, 1, 100_000, 11).unwrap();
        let analytic =
            paging_cost_as(&params, &bytes, RADIO, 1, &list, PagingReading::Principled).unwrap();
        assert!((est.mean - analytic).abs() < 3.0 * est.std_error);
        assert!((est.mean - 31.0).abs() < 0.5);
        assert_eq!(est.failed_pages.iter().sum::<u64>(), 100_000);
    }

    #[test]
    fn chunk_streams_differ() {
        let a: u64 = chunk_rng(1, 0).gen();
        let b: u64 = chunk_rng(1, 1).gen();
        let c: u64 = chunk_rng(2, 0).gen();
        assert!(a != b && a != c);
    }
}
