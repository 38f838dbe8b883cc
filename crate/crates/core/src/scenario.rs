//! Scenario files: flat `key = value` text with dotted sections.
//!
//! ```text
//! # zone
//! grid.geometry = hexagonal
//! grid.m = 10
//! grid.partition = quadrants
//! traffic.lambda_t1 = 0.6
//! profile.alphas = 0.8, 0.1, 0.05
//! ```
//!
//! Keys left out take the defaults of [`Scenario::default`]. When
//! `traffic.lambda_t2` is absent it follows `traffic.lambda_t1 / 100`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::beta::TallyAlgorithm;
use crate::cost::{ByteTable, NetworkParams, PagingCase, PagingReading, ProbabilityList, UpdateCase, RADIO};
use crate::error::{LmError, Result};
use crate::grid::{make_partition, parse_partition_file, CellGrid, Geometry, Partition, PartitionScheme};
use crate::savings::{Distribution, SavingsParams, FIXED_NETWORK_RATE_UPDATE};

#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSource {
    Scheme(PartitionScheme),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmChoice {
    Simple,
    Advanced,
    Both,
}

impl AlgorithmChoice {
    pub fn algorithms(self) -> Vec<TallyAlgorithm> {
        match self {
            AlgorithmChoice::Simple => vec![TallyAlgorithm::Simple],
            AlgorithmChoice::Advanced => vec![TallyAlgorithm::Advanced],
            AlgorithmChoice::Both => vec![TallyAlgorithm::Simple, TallyAlgorithm::Advanced],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmChoice::Simple => "simple",
            AlgorithmChoice::Advanced => "advanced",
            AlgorithmChoice::Both => "both",
        }
    }
}

impl std::str::FromStr for AlgorithmChoice {
    type Err = LmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simple" => Ok(AlgorithmChoice::Simple),
            "advanced" => Ok(AlgorithmChoice::Advanced),
            "both" => Ok(AlgorithmChoice::Both),
            other => Err(LmError::Domain(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionChoice {
    Uniform,
    /// Use `profile.alphas`.
    Profile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: Geometry,
    pub m: usize,
    pub partition: PartitionSource,
    pub algorithm: AlgorithmChoice,
    pub network: NetworkParams,
    pub bytes: ByteTable,
    pub interface: String,
    /// Cells per location area.
    pub cells_per_la: u32,
    pub reading: PagingReading,
    pub profile: ProbabilityList,
    /// Radio-interface savings template.
    pub savings: SavingsParams,
    pub distribution: DistributionChoice,
    pub k_min: usize,
    pub k_max: usize,
    /// Update/paging rates used for the fixed network part.
    pub fixed_rate_update: f64,
    pub fixed_rate_paging: f64,
    pub seed: u64,
    pub walk_steps: u64,
    pub paging_trials: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            geometry: Geometry::Square,
            m: 10,
            partition: PartitionSource::Scheme(PartitionScheme::Quadrants),
            algorithm: AlgorithmChoice::Advanced,
            network: NetworkParams::default(),
            bytes: ByteTable::default(),
            interface: RADIO.to_string(),
            cells_per_la: 10,
            reading: PagingReading::Principled,
            profile: ProbabilityList::new(vec![0.8, 0.1, 0.05]).expect("valid default profile"),
            savings: SavingsParams::radio_default(),
            distribution: DistributionChoice::Uniform,
            k_min: 1,
            k_max: 30,
            fixed_rate_update: FIXED_NETWORK_RATE_UPDATE,
            fixed_rate_paging: 1.549 * FIXED_NETWORK_RATE_UPDATE,
            seed: 1,
            walk_steps: 1_000_000,
            paging_trials: 100_000,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| LmError::Parse {
        line,
        msg: format!("bad value {value:?} for {key}"),
    })
}

fn parse_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_value(key, t, line))
        .collect()
}

impl Scenario {
    /// Parses scenario text; relative partition-file paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Scenario> {
        let mut s = Scenario::default();
        let mut lambda_t2_set = false;
        let mut alphas = s.profile.alphas().to_vec();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| LmError::Parse {
                line,
                msg: format!("expected 'key = value', got {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let map_err = |e: LmError| match e {
                LmError::Parse { .. } => e,
                other => LmError::Parse {
                    line,
                    msg: other.to_string(),
                },
            };
            match key {
                "grid.geometry" => s.geometry = value.parse().map_err(map_err)?,
                "grid.m" => s.m = parse_value(key, value, line)?,
                "grid.partition" => {
                    s.partition = match value.strip_prefix("file:") {
                        Some(path) => {
                            let p = PathBuf::from(path.trim());
                            PartitionSource::File(match base_dir {
                                Some(dir) if p.is_relative() => dir.join(p),
                                _ => p,
                            })
                        }
                        None => PartitionSource::Scheme(value.parse().map_err(map_err)?),
                    }
                }
                "tally.algorithm" => s.algorithm = value.parse().map_err(map_err)?,
                "mobility.speed" => s.network.speed = parse_value(key, value, line)?,
                "mobility.cell_side" => s.network.cell_side = parse_value(key, value, line)?,
                "traffic.lambda_t1" => s.network.lambda_t1 = parse_value(key, value, line)?,
                "traffic.lambda_t2" => {
                    s.network.lambda_t2 = parse_value(key, value, line)?;
                    lambda_t2_set = true;
                }
                "traffic.lambda_mo" => s.network.lambda_mo = parse_value(key, value, line)?,
                "list.calls_per_update" => {
                    s.network.calls_per_list_update = parse_value(key, value, line)?
                }
                "list.cost_unit" => s.network.cost_list_unit = parse_value(key, value, line)?,
                "costs.interface" => s.interface = value.to_string(),
                "costs.cells_per_la" => s.cells_per_la = parse_value(key, value, line)?,
                "costs.reading" => s.reading = value.parse().map_err(map_err)?,
                "profile.alphas" => alphas = parse_list(key, value, line)?,
                "savings.cost_update" => s.savings.cost_update = parse_value(key, value, line)?,
                "savings.cost_paging_area" => {
                    s.savings.cost_paging_area = parse_value(key, value, line)?
                }
                "savings.rate_update" => s.savings.rate_update = parse_value(key, value, line)?,
                "savings.rate_paging" => s.savings.rate_paging = parse_value(key, value, line)?,
                "savings.cost_next_paging" => {
                    s.savings.cost_next_paging = parse_value(key, value, line)?
                }
                "savings.p_inside" => s.savings.p_inside = parse_value(key, value, line)?,
                "savings.rc" => s.savings.rc = parse_value(key, value, line)?,
                "savings.lambda_sum" => s.savings.lambda_sum = parse_value(key, value, line)?,
                "savings.calls_per_list_update" => {
                    s.savings.calls_per_list_update = parse_value(key, value, line)?
                }
                "savings.include_list_cost" => {
                    s.savings.include_list_cost = parse_value(key, value, line)?
                }
                "savings.distribution" => {
                    s.distribution = match value {
                        "uniform" => DistributionChoice::Uniform,
                        "profile" => DistributionChoice::Profile,
                        _ => {
                            return Err(LmError::Parse {
                                line,
                                msg: format!("distribution must be uniform or profile, got {value:?}"),
                            })
                        }
                    }
                }
                "savings.k_min" => s.k_min = parse_value(key, value, line)?,
                "savings.k_max" => s.k_max = parse_value(key, value, line)?,
                "fixed.rate_update" => s.fixed_rate_update = parse_value(key, value, line)?,
                "fixed.rate_paging" => s.fixed_rate_paging = parse_value(key, value, line)?,
                "simulate.seed" => s.seed = parse_value(key, value, line)?,
                "simulate.steps" => s.walk_steps = parse_value(key, value, line)?,
                "simulate.trials" => s.paging_trials = parse_value(key, value, line)?,
                _ => {
                    if let Some(rest) = key.strip_prefix("bytes.") {
                        if let Some((iface, field)) = rest.rsplit_once('.') {
                            let v: f64 = parse_value(key, value, line)?;
                            if let Some(c) = UpdateCase::ALL.iter().find(|c| c.key() == field) {
                                s.bytes.set_update(*c, iface, v);
                                continue;
                            }
                            if let Some(c) = PagingCase::ALL.iter().find(|c| c.key() == field) {
                                s.bytes.set_paging(*c, iface, v);
                                continue;
                            }
                        }
                    }
                    return Err(LmError::UnknownKey(key.to_string()));
                }
            }
        }
        if !lambda_t2_set {
            s.network.lambda_t2 = s.network.lambda_t1 / 100.0;
        }
        s.profile = ProbabilityList::new(alphas)?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| LmError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Scenario::parse(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(LmError::InvalidDimension(self.m));
        }
        self.network.validate()?;
        self.bytes.validate()?;
        self.savings.validate()?;
        if self.cells_per_la == 0 {
            return Err(LmError::Domain("costs.cells_per_la must be >= 1".into()));
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(LmError::Domain(format!(
                "bad list-size range {}..={}",
                self.k_min, self.k_max
            )));
        }
        if let PartitionSource::File(p) = &self.partition {
            if !p.exists() {
                return Err(LmError::Io {
                    path: p.display().to_string(),
                    msg: "partition file not found".into(),
                });
            }
        }
        Ok(())
    }

    /// Builds the zone and its partition.
    pub fn layout(&self) -> Result<(CellGrid, Partition)> {
        match &self.partition {
            PartitionSource::Scheme(scheme) => {
                let grid = CellGrid::new(self.geometry, self.m)?;
                let p = make_partition(&grid, scheme)?;
                Ok((grid, p))
            }
            PartitionSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| LmError::Io {
                    path: path.display().to_string(),
                    msg: e.to_string(),
                })?;
                let (grid, p) = parse_partition_file(&text)?;
                if grid.geometry() != self.geometry || grid.m() != self.m {
                    return Err(LmError::Coverage(format!(
                        "partition file describes a {} {}x{} zone, scenario has {} {}x{}",
                        grid.geometry(),
                        grid.m(),
                        grid.m(),
                        self.geometry,
                        self.m,
                        self.m
                    )));
                }
                Ok((grid, p))
            }
        }
    }

    pub fn distribution(&self) -> Distribution {
        match self.distribution {
            DistributionChoice::Uniform => Distribution::UniformConditional,
            DistributionChoice::Profile => Distribution::Explicit(self.profile.clone()),
        }
    }

    pub fn k_range(&self) -> std::ops::RangeInclusive<usize> {
        self.k_min..=self.k_max
    }

    /// Savings template for the fixed network part.
    pub fn fixed_network_template(&self) -> SavingsParams {
        SavingsParams {
            rate_update: self.fixed_rate_update,
            rate_paging: self.fixed_rate_paging,
            include_list_cost: true,
            ..self.savings.clone()
        }
    }

    /// Every effective setting as scenario text; parses back to an equal scenario.
    pub fn dump(&self) -> String {
        let mut o = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(o, "{k} = {v}");
        };
        kv("grid.geometry", self.geometry.to_string());
        kv("grid.m", self.m.to_string());
        kv(
            "grid.partition",
            match &self.partition {
                PartitionSource::Scheme(s) => s.to_string(),
                PartitionSource::File(p) => format!("file:{}", p.display()),
            },
        );
        kv("tally.algorithm", self.algorithm.as_str().into());
        let n = &self.network;
        kv("mobility.speed", n.speed.to_string());
        kv("mobility.cell_side", n.cell_side.to_string());
        kv("traffic.lambda_t1", n.lambda_t1.to_string());
        kv("traffic.lambda_t2", n.lambda_t2.to_string());
        kv("traffic.lambda_mo", n.lambda_mo.to_string());
        kv("list.calls_per_update", n.calls_per_list_update.to_string());
        kv("list.cost_unit", n.cost_list_unit.to_string());
        for (case, iface, v) in self.bytes.update_entries() {
            kv(&format!("bytes.{iface}.{}", case.key()), v.to_string());
        }
        for (case, iface, v) in self.bytes.paging_entries() {
            kv(&format!("bytes.{iface}.{}", case.key()), v.to_string());
        }
        kv("costs.interface", self.interface.clone());
        kv("costs.cells_per_la", self.cells_per_la.to_string());
        kv("costs.reading", self.reading.to_string());
        let alphas: Vec<String> = self.profile.alphas().iter().map(f64::to_string).collect();
        kv("profile.alphas", alphas.join(", "));
        let sv = &self.savings;
        kv("savings.cost_update", sv.cost_update.to_string());
        kv("savings.cost_paging_area", sv.cost_paging_area.to_string());
        kv("savings.rate_update", sv.rate_update.to_string());
        kv("savings.rate_paging", sv.rate_paging.to_string());
        kv("savings.cost_next_paging", sv.cost_next_paging.to_string());
        kv("savings.p_inside", sv.p_inside.to_string());
        kv("savings.rc", sv.rc.to_string());
        kv("savings.lambda_sum", sv.lambda_sum.to_string());
        kv("savings.calls_per_list_update", sv.calls_per_list_update.to_string());
        kv("savings.include_list_cost", sv.include_list_cost.to_string());
        kv(
            "savings.distribution",
            match self.distribution {
                DistributionChoice::Uniform => "uniform".into(),
                DistributionChoice::Profile => "profile".into(),
            },
        );
        kv("savings.k_min", self.k_min.to_string());
        kv("savings.k_max", self.k_max.to_string());
        kv("fixed.rate_update", self.fixed_rate_update.to_string());
        kv("fixed.rate_paging", self.fixed_rate_paging.to_string());
        kv("simulate.seed", self.seed.to_string());
        kv("simulate.steps", self.walk_steps.to_string());
        kv("simulate.trials", self.paging_trials.to_string());
        o
    }
}
