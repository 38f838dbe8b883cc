//! Savings of the user-statistics strategy over the classical one, and
//! integer searches for the best list size.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::cost::{expected_las_paged, ProbabilityList};
use crate::error::{domain, LmError, Result};

/// Upper bound on the list sizes an optimum search will scan.
pub const MAX_SCAN_K: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SavingsParams {
    /// Cost of a single location update.
    pub cost_update: f64,
    /// Cost of paging a single LA.
    pub cost_paging_area: f64,
    /// Location updates per hour.
    pub rate_update: f64,
    /// Pagings per hour.
    pub rate_paging: f64,
    /// Cost of each further paging attempt as a fraction of the first (F).
    pub cost_next_paging: f64,
    pub p_inside: f64,
    /// List size.
    pub k: usize,
    /// Expected LAs paged, given the user is in the list.
    pub e_n: f64,
    /// Single-update cost over single-list-update cost.
    pub rc: f64,
    /// Terminating plus originating call rate, calls/hour.
    pub lambda_sum: f64,
    pub calls_per_list_update: f64,
    /// The radio interface carries no list-maintenance traffic.
    pub include_list_cost: bool,
}

impl SavingsParams {
    /// Radio interface: update/page cost ratio 17, paging/update rate ratio 1.549, F = 0.8.
    pub fn radio_default() -> Self {
        SavingsParams {
            cost_update: 17.0,
            cost_paging_area: 1.0,
            rate_update: 1.0,
            rate_paging: 1.549,
            cost_next_paging: 0.8,
            p_inside: 1.0,
            k: 1,
            e_n: 1.0,
            rc: 30.0,
            lambda_sum: 2.0,
            calls_per_list_update: 10.0,
            include_list_cost: false,
        }
    }

    /// Fixed network part: list maintenance included.
    ///
    /// Only the update/page ratios are pinned by the radio case; the absolute
    /// update rate matters here because the list cost is driven by the call
    /// rate. 0.07 updates/hour keeps the same 1.549 rate ratio.
    pub fn fixed_network_default() -> Self {
        SavingsParams {
            rate_update: FIXED_NETWORK_RATE_UPDATE,
            rate_paging: 1.549 * FIXED_NETWORK_RATE_UPDATE,
            include_list_cost: true,
            ..SavingsParams::radio_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cost_update", self.cost_update),
            ("cost_paging_area", self.cost_paging_area),
            ("rate_update", self.rate_update),
            ("rate_paging", self.rate_paging),
            ("cost_next_paging", self.cost_next_paging),
            ("lambda_sum", self.lambda_sum),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.p_inside) {
            return Err(LmError::InvalidProbability(format!("p_inside = {}", self.p_inside)));
        }
        if self.k == 0 {
            return Err(domain("list size k must be >= 1"));
        }
        if !(self.e_n >= 1.0 && self.e_n <= self.k as f64 + 1e-9) {
            return Err(domain(format!("E[N] = {} outside [1, k = {}]", self.e_n, self.k)));
        }
        if self.include_list_cost {
            if !(self.rc > 0.0) {
                return Err(domain(format!("rc must be > 0, got {}", self.rc)));
            }
            if !(self.calls_per_list_update >= 1.0) {
                return Err(domain("calls_per_list_update must be >= 1"));
            }
        }
        Ok(())
    }

    /// List-maintenance cost per hour; a single list update costs `cost_update / rc`
    /// per managed LA.
    pub fn list_cost(&self) -> f64 {
        if !self.include_list_cost || self.rc.is_infinite() {
            return 0.0;
        }
        let cost_list = self.k as f64 * self.cost_update / self.rc;
        self.lambda_sum / self.calls_per_list_update * cost_list
    }
}

pub const FIXED_NETWORK_RATE_UPDATE: f64 = 0.07;

/// Hourly savings of the AS strategy over CS.
pub fn savings(p: &SavingsParams) -> Result<f64> {
    if p.k == 0 {
        return Err(domain("list size k must be >= 1"));
    }
    let k = p.k as f64;
    let update_gain = p.cost_update * p.rate_update * (1.0 - 1.0 / k.sqrt());
    let paging_loss = p.cost_paging_area * p.rate_paging * p.cost_next_paging * (p.e_n - 1.0);
    Ok(p.p_inside * (update_gain - paging_loss) - p.list_cost())
}

/// How residence probabilities spread over a list of size `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    /// `alpha_i = p_inside / k`, so `E[N] = (k + 1) / 2`.
    UniformConditional,
    /// The first `k` entries of a fixed list; `p_inside` follows the prefix.
    Explicit(ProbabilityList),
}

/// `template` with `k` and the derived `E[N]` (and `p_inside` for explicit lists).
pub fn params_for_k(template: &SavingsParams, k: usize, dist: &Distribution) -> Result<SavingsParams> {
    if k == 0 {
        return Err(domain("list size k must be >= 1"));
    }
    let mut p = template.clone();
    p.k = k;
    match dist {
        Distribution::UniformConditional => p.e_n = (k as f64 + 1.0) / 2.0,
        Distribution::Explicit(list) => {
            if k > list.k() {
                return Err(domain(format!("k = {k} exceeds the {}-entry list", list.k())));
            }
            let prefix = list.prefix(k);
            p.p_inside = prefix.p_inside().min(1.0);
            p.e_n = if p.p_inside > 0.0 {
                expected_las_paged(&prefix)?
            } else {
                1.0
            };
        }
    }
    Ok(p)
}

/// Savings over a range of list sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub ks: Vec<usize>,
    pub values: Vec<f64>,
    /// Index into `ks` of the best list size (first one on ties).
    pub argmax: usize,
    /// Largest `k` with strictly positive savings.
    pub zero_crossing: Option<usize>,
}

impl SweepResult {
    fn from_values(ks: Vec<usize>, values: Vec<f64>) -> Self {
        let mut argmax = 0;
        for (i, v) in values.iter().enumerate() {
            if *v > values[argmax] {
                argmax = i;
            }
        }
        let zero_crossing = ks
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v > 0.0)
            .map(|(k, _)| *k)
            .max();
        SweepResult {
            ks,
            values,
            argmax,
            zero_crossing,
        }
    }

    pub fn best_k(&self) -> usize {
        self.ks[self.argmax]
    }

    pub fn best_value(&self) -> f64 {
        self.values[self.argmax]
    }

    pub fn any_positive(&self) -> bool {
        self.zero_crossing.is_some()
    }
}

fn check_range(k_range: &RangeInclusive<usize>) -> Result<()> {
    if k_range.is_empty() {
        return Err(domain("empty list-size range"));
    }
    if *k_range.start() == 0 {
        return Err(domain("list sizes start at 1"));
    }
    if *k_range.end() > MAX_SCAN_K {
        return Err(domain(format!("list sizes are capped at {MAX_SCAN_K}")));
    }
    Ok(())
}

/// Exhaustive scan of `savings` over `k_range`.
pub fn sweep_k(
    template: &SavingsParams,
    k_range: RangeInclusive<usize>,
    dist: &Distribution,
) -> Result<SweepResult> {
    check_range(&k_range)?;
    let ks: Vec<usize> = k_range.collect();
    let values = ks
        .iter()
        .map(|&k| savings(&params_for_k(template, k, dist)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_values(ks, values))
}

/// Best list size and its savings; ties go to the smaller `k`.
pub fn optimum_k(
    template: &SavingsParams,
    k_range: RangeInclusive<usize>,
    dist: &Distribution,
) -> Result<(usize, f64)> {
    let r = sweep_k(template, k_range, dist)?;
    Ok((r.best_k(), r.best_value()))
}

/// Largest list size in range that still saves anything.
pub fn savings_zero_crossing(
    template: &SavingsParams,
    k_range: RangeInclusive<usize>,
    dist: &Distribution,
) -> Result<Option<usize>> {
    Ok(sweep_k(template, k_range, dist)?.zero_crossing)
}

/// One savings curve per paging/update rate ratio, uniform-conditional distribution.
pub fn sweep_rate_ratio(
    template: &SavingsParams,
    ratios: &[f64],
    k_range: RangeInclusive<usize>,
) -> Result<Vec<(f64, SweepResult)>> {
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0)) {
        return Err(domain(format!("rate ratios must be > 0, got {r}")));
    }
    ratios
        .par_iter()
        .map(|&ratio| {
            let mut p = template.clone();
            p.rate_paging = ratio * p.rate_update;
            Ok((ratio, sweep_k(&p, k_range.clone(), &Distribution::UniformConditional)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedNetworkPoint {
    pub rc: f64,
    pub p_inside: f64,
    pub result: SweepResult,
}

/// Savings with list maintenance over `(rc, p_inside, k)`.
pub fn sweep_fixed_network(
    template: &SavingsParams,
    rc_values: &[f64],
    p_inside_values: &[f64],
    k_range: RangeInclusive<usize>,
) -> Result<Vec<FixedNetworkPoint>> {
    if let Some(rc) = rc_values.iter().find(|r| !(**r > 0.0)) {
        return Err(domain(format!("rc must be > 0, got {rc}")));
    }
    let grid: Vec<(f64, f64)> = rc_values
        .iter()
        .flat_map(|&rc| p_inside_values.iter().map(move |&p| (rc, p)))
        .collect();
    grid.par_iter()
        .map(|&(rc, p_inside)| {
            let mut p = template.clone();
            p.include_list_cost = true;
            p.rc = rc;
            p.p_inside = p_inside;
            Ok(FixedNetworkPoint {
                rc,
                p_inside,
                result: sweep_k(&p, k_range.clone(), &Distribution::UniformConditional)?,
            })
        })
        .collect()
}

/// Default fixed-network grid: rc, p_inside, k.
pub fn fixed_network_grid() -> (Vec<f64>, Vec<f64>, RangeInclusive<usize>) {
    (
        vec![10.0, 20.0, 30.0, 50.0, 100.0],
        vec![0.2, 0.4, 0.6, 0.8, 1.0],
        1..=30,
    )
}
