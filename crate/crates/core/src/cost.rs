//! Analytic signaling-cost formulas for the classical strategy (CS) and the
//! user-statistics strategy (AS).
//!
//! Costs are expressed in bytes per hour at a given interface. Byte tables
//! are keyed by interface id so fixed-network interfaces can be modelled
//! next to the radio interface.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::beta::BetaSet;
use crate::error::{domain, LmError, Result};
use crate::grid::Geometry;

pub const RADIO: &str = "radio";

/// Slack allowed on `sum(alpha) <= 1`.
pub const PROBABILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    /// Mean user speed, km/h.
    pub speed: f64,
    /// Cell side, km.
    pub cell_side: f64,
    /// Mobile-terminating call rate, calls/hour.
    pub lambda_t1: f64,
    /// Unsuccessful call-attempt rate, calls/hour.
    pub lambda_t2: f64,
    /// Mobile-originated call rate, calls/hour.
    pub lambda_mo: f64,
    /// Calls between two list refreshes.
    pub calls_per_list_update: f64,
    /// Cost of one list refresh.
    pub cost_list_unit: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            speed: 5.0,
            cell_side: 1.0,
            lambda_t1: 0.6,
            lambda_t2: 0.006,
            lambda_mo: 1.4,
            calls_per_list_update: 10.0,
            cost_list_unit: 50.0,
        }
    }
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !finite_nonneg(self.speed) {
            return Err(domain(format!("speed must be >= 0, got {}", self.speed)));
        }
        if !(self.cell_side.is_finite() && self.cell_side > 0.0) {
            return Err(domain(format!("cell side must be > 0, got {}", self.cell_side)));
        }
        for (name, v) in [
            ("lambda_t1", self.lambda_t1),
            ("lambda_t2", self.lambda_t2),
            ("lambda_mo", self.lambda_mo),
            ("cost_list_unit", self.cost_list_unit),
        ] {
            if !finite_nonneg(v) {
                return Err(domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.calls_per_list_update >= 1.0) {
            return Err(domain(format!(
                "calls_per_list_update must be >= 1, got {}",
                self.calls_per_list_update
            )));
        }
        Ok(())
    }

    /// Bytes spent on one successful page-and-deliver cycle, weighted by call rates.
    fn success_term(&self, nbp1: f64, nbp2: f64) -> f64 {
        self.lambda_t1 * nbp1 + self.lambda_t2 * nbp2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpdateCase {
    /// Same VLR.
    SameVlr,
    /// New VLR, TMSI.
    NewVlrTmsi,
    /// New VLR, IMSI.
    NewVlrImsi,
}

impl UpdateCase {
    pub const ALL: [UpdateCase; 3] = [
        UpdateCase::SameVlr,
        UpdateCase::NewVlrTmsi,
        UpdateCase::NewVlrImsi,
    ];

    pub fn key(self) -> &'static str {
        match self {
            UpdateCase::SameVlr => "nbl1",
            UpdateCase::NewVlrTmsi => "nbl21",
            UpdateCase::NewVlrImsi => "nbl22",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PagingCase {
    Success,
    Failure,
}

impl PagingCase {
    pub const ALL: [PagingCase; 2] = [PagingCase::Success, PagingCase::Failure];

    pub fn key(self) -> &'static str {
        match self {
            PagingCase::Success => "nbp1",
            PagingCase::Failure => "nbp2",
        }
    }
}

/// Bytes per signaling event, per case and interface.
#[derive(Debug, Clone, PartialEq)]
pub struct ByteTable {
    nbl: BTreeMap<(UpdateCase, String), f64>,
    nbp: BTreeMap<(PagingCase, String), f64>,
}

impl Default for ByteTable {
    fn default() -> Self {
        let mut t = ByteTable {
            nbl: BTreeMap::new(),
            nbp: BTreeMap::new(),
        };
        t.set_update(UpdateCase::SameVlr, RADIO, 120.0);
        t.set_update(UpdateCase::NewVlrTmsi, RADIO, 160.0);
        t.set_update(UpdateCase::NewVlrImsi, RADIO, 200.0);
        t.set_paging(PagingCase::Success, RADIO, 21.5);
        t.set_paging(PagingCase::Failure, RADIO, 83.0);
        t
    }
}

impl ByteTable {
    pub fn empty() -> Self {
        ByteTable {
            nbl: BTreeMap::new(),
            nbp: BTreeMap::new(),
        }
    }

    pub fn set_update(&mut self, case: UpdateCase, interface: &str, bytes: f64) {
        self.nbl.insert((case, interface.to_string()), bytes);
    }

    pub fn set_paging(&mut self, case: PagingCase, interface: &str, bytes: f64) {
        self.nbp.insert((case, interface.to_string()), bytes);
    }

    pub fn update(&self, case: UpdateCase, interface: &str) -> Result<f64> {
        self.nbl
            .get(&(case, interface.to_string()))
            .copied()
            .ok_or_else(|| domain(format!("no {} bytes for interface {interface:?}", case.key())))
    }

    pub fn paging(&self, case: PagingCase, interface: &str) -> Result<f64> {
        self.nbp
            .get(&(case, interface.to_string()))
            .copied()
            .ok_or_else(|| domain(format!("no {} bytes for interface {interface:?}", case.key())))
    }

    pub fn interfaces(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .nbl
            .keys()
            .map(|(_, i)| i.clone())
            .chain(self.nbp.keys().map(|(_, i)| i.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn update_entries(&self) -> impl Iterator<Item = (UpdateCase, &str, f64)> {
        self.nbl.iter().map(|((c, i), v)| (*c, i.as_str(), *v))
    }

    pub fn paging_entries(&self) -> impl Iterator<Item = (PagingCase, &str, f64)> {
        self.nbp.iter().map(|((c, i), v)| (*c, i.as_str(), *v))
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> ByteTable {
        ByteTable {
            nbl: self.nbl.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
            nbp: self.nbp.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = self
            .nbl
            .values()
            .chain(self.nbp.values())
            .find(|v| !(v.is_finite() && **v >= 0.0));
        match bad {
            Some(v) => Err(domain(format!("byte table entries must be >= 0, got {v}"))),
            None => Ok(()),
        }
    }
}

/// Residence probabilities of the managed LAs, most likely first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbabilityList {
    alphas: Vec<f64>,
}

impl ProbabilityList {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(LmError::InvalidProbability(format!("alpha = {a} is negative")));
        }
        if alphas.windows(2).any(|w| w[1] > w[0]) {
            return Err(LmError::InvalidProbability(format!(
                "alphas must be non-increasing: {alphas:?}"
            )));
        }
        let sum: f64 = alphas.iter().sum();
        if sum > 1.0 + PROBABILITY_SLACK {
            return Err(LmError::InvalidProbability(format!(
                "sum of alphas {sum} exceeds 1"
            )));
        }
        Ok(ProbabilityList { alphas })
    }

    /// `k` equal probabilities summing to `p_inside`.
    pub fn uniform(k: usize, p_inside: f64) -> Result<Self> {
        if k == 0 {
            return Ok(ProbabilityList::default());
        }
        ProbabilityList::new(vec![p_inside / k as f64; k])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn p_inside(&self) -> f64 {
        self.alphas.iter().sum()
    }

    /// The first `k` entries.
    pub fn prefix(&self, k: usize) -> ProbabilityList {
        ProbabilityList {
            alphas: self.alphas[..k.min(self.alphas.len())].to_vec(),
        }
    }
}

fn cells_per_la(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(domain("cells per location area must be >= 1"));
    }
    Ok(n as f64)
}

/// Classical-strategy location-update cost, bytes/hour.
pub fn update_cost_cs(
    params: &NetworkParams,
    bytes: &ByteTable,
    interface: &str,
    n_cells: u32,
    betas: &BetaSet,
) -> Result<f64> {
    let n = cells_per_la(n_cells)?;
    if !(params.cell_side > 0.0) {
        return Err(domain("cell side must be > 0"));
    }
    let prefactor = 8.0 * params.speed / (std::f64::consts::PI * params.cell_side * n.sqrt());
    let bracket = betas.beta1 * bytes.update(UpdateCase::SameVlr, interface)?
        + betas.beta21 * bytes.update(UpdateCase::NewVlrTmsi, interface)?
        + betas.beta22 * bytes.update(UpdateCase::NewVlrImsi, interface)?;
    Ok(prefactor * bracket)
}

/// AS update cost: the CS cost scaled by the probability of being outside the list.
pub fn update_cost_as(cs_cost: f64, list: &ProbabilityList) -> Result<f64> {
    let p = list.p_inside();
    if p > 1.0 + PROBABILITY_SLACK {
        return Err(LmError::InvalidProbability(format!("p_inside = {p}")));
    }
    Ok((1.0 - p).max(0.0) * cs_cost)
}

/// Fluid-flow rate of location updates (updates/hour) for LAs of `n_cells` cells.
pub fn update_rate(params: &NetworkParams, geometry: Geometry, n_cells: u32) -> Result<f64> {
    let n = cells_per_la(n_cells)?;
    let r = params.cell_side;
    if !(r > 0.0) {
        return Err(domain("cell side must be > 0"));
    }
    let perimeter = geometry.cell_perimeter(r) * n.sqrt();
    Ok(params.speed * perimeter / (n * std::f64::consts::PI * geometry.cell_area(r)))
}

/// Update rate of a user roaming inside a list of `k` LAs.
pub fn update_rate_inside_list(rate: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(domain("list size must be >= 1"));
    }
    Ok(rate / (k as f64).sqrt())
}

pub fn paging_cost_cs(
    params: &NetworkParams,
    bytes: &ByteTable,
    interface: &str,
    n_cells: u32,
) -> Result<f64> {
    let nbp1 = bytes.paging(PagingCase::Success, interface)?;
    let nbp2 = bytes.paging(PagingCase::Failure, interface)?;
    Ok(n_cells as f64 * params.success_term(nbp1, nbp2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PagingReading {
    /// The AS paging expression evaluated term by term, as written.
    Literal,
    /// Expected cost of paging the listed LAs one after another.
    #[default]
    Principled,
}

impl PagingReading {
    pub fn as_str(self) -> &'static str {
        match self {
            PagingReading::Literal => "literal",
            PagingReading::Principled => "principled",
        }
    }
}

impl fmt::Display for PagingReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PagingReading {
    type Err = LmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "literal" => Ok(PagingReading::Literal),
            "principled" => Ok(PagingReading::Principled),
            other => Err(domain(format!("unknown paging reading {other:?}"))),
        }
    }
}

/// AS paging cost, bytes/hour.
pub fn paging_cost_as(
    params: &NetworkParams,
    bytes: &ByteTable,
    interface: &str,
    n_cells: u32,
    list: &ProbabilityList,
    reading: PagingReading,
) -> Result<f64> {
    let nbp1 = bytes.paging(PagingCase::Success, interface)?;
    let nbp2 = bytes.paging(PagingCase::Failure, interface)?;
    let success = params.success_term(nbp1, nbp2);
    let calls = params.lambda_t1 + params.lambda_t2;
    let fail_page = nbp2 * calls;
    let p_inside = list.p_inside();
    let n = n_cells as f64;

    let per_user = match reading {
        PagingReading::Principled => {
            let inside: f64 = list
                .alphas()
                .iter()
                .enumerate()
                .map(|(i, a)| a * (i as f64 * fail_page + success))
                .sum();
            let outside = (1.0 - p_inside).max(0.0) * (list.k() as f64 * fail_page + success);
            inside + outside
        }
        PagingReading::Literal => {
            let not_unsuccessful = if calls > 0.0 {
                1.0 - params.lambda_t2 / calls
            } else {
                0.0
            };
            let mut preceding = 0.0;
            let mut inner = 0.0;
            for &a in list.alphas() {
                inner += a * success + (1.0 - a) * fail_page * (1.0 - preceding) * not_unsuccessful;
                preceding += a;
            }
            p_inside * inner + (1.0 - p_inside) * success
        }
    };
    Ok(n * per_user)
}

/// Expected number of LAs paged before the user is found, given the user is in the list.
pub fn expected_las_paged(list: &ProbabilityList) -> Result<f64> {
    let p = list.p_inside();
    if !(p > 0.0) {
        return Err(domain("expected LAs paged needs p_inside > 0"));
    }
    let weighted: f64 = list
        .alphas()
        .iter()
        .enumerate()
        .map(|(i, a)| (i + 1) as f64 * a)
        .sum();
    Ok(weighted / p)
}

pub fn normalized_paging_cost(
    cost_paging_area: f64,
    rate_paging: f64,
    p_inside: f64,
    cost_next_paging: f64,
    e_n: f64,
) -> Result<f64> {
    if !(e_n >= 1.0) {
        return Err(domain(format!("E[N] must be >= 1, got {e_n}")));
    }
    if !(0.0..=1.0).contains(&p_inside) {
        return Err(LmError::InvalidProbability(format!("p_inside = {p_inside}")));
    }
    Ok(cost_paging_area * rate_paging * (1.0 + p_inside * cost_next_paging * (e_n - 1.0)))
}

/// List-maintenance cost, bytes/hour.
pub fn list_maintenance_cost(params: &NetworkParams) -> Result<f64> {
    if !(params.calls_per_list_update >= 1.0) {
        return Err(domain("calls_per_list_update must be >= 1"));
    }
    Ok((params.lambda_t1 + params.lambda_mo) / params.calls_per_list_update * params.cost_list_unit)
}
