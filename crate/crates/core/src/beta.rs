//! x / dot boundary tallies and the derived beta probabilities.
//!
//! An `x` marks exposure to a neighbouring VLR zone, a dot marks exposure to
//! another location area of the same zone. The simple algorithm flags each
//! cell at most once per mark; the advanced algorithm counts neighbours, so a
//! corner cell of a square zone carries five x's.

use std::fmt;
use std::str::FromStr;

use crate::error::{LmError, Result};
use crate::grid::{CellGrid, NeighborClass, Partition};

/// Share of inter-VLR updates that go through the TMSI procedure.
pub const TMSI_SHARE: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TallyAlgorithm {
    Simple,
    Advanced,
}

impl TallyAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            TallyAlgorithm::Simple => "simple",
            TallyAlgorithm::Advanced => "advanced",
        }
    }
}

impl fmt::Display for TallyAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TallyAlgorithm {
    type Err = LmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simple" => Ok(TallyAlgorithm::Simple),
            "advanced" => Ok(TallyAlgorithm::Advanced),
            other => Err(LmError::Domain(format!("unknown tally algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellMarks {
    pub x: u32,
    pub dot: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTally {
    pub algorithm: TallyAlgorithm,
    pub x_total: u64,
    pub dot_total: u64,
    pub per_cell: Vec<CellMarks>,
}

impl BoundaryTally {
    fn from_cells(algorithm: TallyAlgorithm, per_cell: Vec<CellMarks>) -> Self {
        let x_total = per_cell.iter().map(|c| c.x as u64).sum();
        let dot_total = per_cell.iter().map(|c| c.dot as u64).sum();
        BoundaryTally {
            algorithm,
            x_total,
            dot_total,
            per_cell,
        }
    }

    pub fn betas(&self) -> Result<BetaSet> {
        betas_from_counts(self.x_total, self.dot_total)
    }
}

fn count_marks(grid: &CellGrid, partition: &Partition) -> Vec<CellMarks> {
    grid.cells()
        .map(|cell| {
            let mut marks = CellMarks::default();
            for n in grid.neighbors(cell) {
                match grid.classify(partition, cell, n) {
                    NeighborClass::OtherVlr => marks.x += 1,
                    NeighborClass::OtherLaSameVlr => marks.dot += 1,
                    NeighborClass::SameLa => {}
                }
            }
            marks
        })
        .collect()
}

/// Flags every zone-border cell with one x and every cell touching another LA with one dot.
pub fn tally_simple(grid: &CellGrid, partition: &Partition) -> BoundaryTally {
    let cells = count_marks(grid, partition)
        .into_iter()
        .map(|c| CellMarks {
            x: c.x.min(1),
            dot: c.dot.min(1),
        })
        .collect();
    BoundaryTally::from_cells(TallyAlgorithm::Simple, cells)
}

/// Counts, per cell, the neighbours in other VLR zones (x) and in other LAs of the zone (dot).
pub fn tally_advanced(grid: &CellGrid, partition: &Partition) -> BoundaryTally {
    BoundaryTally::from_cells(TallyAlgorithm::Advanced, count_marks(grid, partition))
}

pub fn tally(grid: &CellGrid, partition: &Partition, algorithm: TallyAlgorithm) -> BoundaryTally {
    match algorithm {
        TallyAlgorithm::Simple => tally_simple(grid, partition),
        TallyAlgorithm::Advanced => tally_advanced(grid, partition),
    }
}

/// Location-update case probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSet {
    /// Update within the same VLR.
    pub beta1: f64,
    /// Update towards a different VLR.
    pub beta2: f64,
    /// Inter-VLR update identified by TMSI.
    pub beta21: f64,
    /// Inter-VLR update identified by IMSI.
    pub beta22: f64,
}

impl BetaSet {
    /// Builds the set from beta1, splitting the remainder 80/20.
    pub fn from_beta1(beta1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta1) {
            return Err(LmError::InvalidProbability(format!("beta1 = {beta1}")));
        }
        let beta2 = 1.0 - beta1;
        Ok(BetaSet {
            beta1,
            beta2,
            beta21: TMSI_SHARE * beta2,
            beta22: (1.0 - TMSI_SHARE) * beta2,
        })
    }

    /// Rounded to the precision of the reference tables (2 decimals for
    /// beta1/beta2, 3 for the inter-VLR split).
    pub fn rounded(&self) -> BetaSet {
        let r = |v: f64, d: i32| {
            let s = 10f64.powi(d);
            (v * s).round() / s
        };
        BetaSet {
            beta1: r(self.beta1, 2),
            beta2: r(self.beta2, 2),
            beta21: r(self.beta21, 3),
            beta22: r(self.beta22, 3),
        }
    }
}

pub fn betas_from_counts(x_total: u64, dot_total: u64) -> Result<BetaSet> {
    let total = x_total + dot_total;
    if total == 0 {
        return Err(LmError::DegenerateTally(
            "no x or dot marks: the zone has no borders".into(),
        ));
    }
    let beta1 = dot_total as f64 / total as f64;
    let beta2 = x_total as f64 / total as f64;
    Ok(BetaSet {
        beta1,
        beta2,
        beta21: TMSI_SHARE * beta2,
        beta22: (1.0 - TMSI_SHARE) * beta2,
    })
}

pub fn betas_from_tally(tally: &BoundaryTally) -> Result<BetaSet> {
    betas_from_counts(tally.x_total, tally.dot_total)
}

/// Percentage reduction of x and dot totals going from the square layout to the hexagonal one.
pub fn percent_reduction(square: &BoundaryTally, hex: &BoundaryTally) -> Result<(f64, f64)> {
    if square.algorithm != TallyAlgorithm::Advanced || hex.algorithm != TallyAlgorithm::Advanced {
        return Err(LmError::Domain(
            "percent reduction compares advanced tallies".into(),
        ));
    }
    let pct = |sq: u64, hx: u64, what: &str| {
        if sq == 0 {
            return Err(LmError::DegenerateTally(format!("square {what} total is zero")));
        }
        Ok(100.0 * (sq as f64 - hx as f64) / sq as f64)
    };
    Ok((
        pct(square.x_total, hex.x_total, "x")?,
        pct(square.dot_total, hex.dot_total, "dot")?,
    ))
}
