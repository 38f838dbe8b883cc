//! Location-management signaling cost models for cellular networks.
//!
//! * [`grid`]: square and hexagonal VLR zones, location-area partitions, adjacency.
//! * [`beta`]: x / dot boundary tallies and the beta probabilities derived from them.
//! * [`cost`]: update, paging and list-maintenance costs for the classical and
//!   user-statistics strategies.
//! * [`savings`]: savings of the statistics strategy and list-size optima.
//! * [`montecarlo`]: random-walk and sequential-paging simulators used as oracles.
//! * [`scenario`], [`report`]: scenario files and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod cost;
pub mod error;
pub mod grid;
pub mod montecarlo;
pub mod report;
pub mod savings;
pub mod scenario;

pub use beta::{betas_from_tally, percent_reduction, tally_advanced, tally_simple, BetaSet, BoundaryTally, TallyAlgorithm};
pub use cost::{ByteTable, NetworkParams, PagingReading, ProbabilityList, RADIO};
pub use error::{LmError, Result};
pub use grid::{make_partition, CellGrid, Geometry, NeighborClass, Partition, PartitionScheme};
pub use savings::{optimum_k, savings, savings_zero_crossing, Distribution, SavingsParams, SweepResult};
pub use scenario::Scenario;
