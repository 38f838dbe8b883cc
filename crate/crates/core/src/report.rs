//! CSV reports: tallies, costs, sweeps, figure curves and oracle checks.
//!
//! Output is UTF-8, comma separated, with `#`-prefixed metadata lines ahead
//! of the header row. Numbers use the shortest round-trip decimal form, so
//! identical inputs give byte-identical files.

use std::fmt::Write as _;

use crate::beta::{betas_from_tally, tally, tally_advanced, BetaSet, TallyAlgorithm};
use crate::cost::{
    list_maintenance_cost, normalized_paging_cost, paging_cost_as,
    paging_cost_cs, update_cost_as, update_cost_cs, PagingReading, ProbabilityList,
};
use crate::error::{LmError, Result};
use crate::montecarlo::{simulate_paging, walk_crossing_stats, ValidationRow, WalkConfig};
use crate::savings::{
    fixed_network_grid, sweep_fixed_network, sweep_k, sweep_rate_ratio, Distribution,
    SavingsParams,
};
use crate::scenario::Scenario;

/// A CSV table with leading metadata comments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn num(v: f64) -> String {
    v.to_string()
}

fn sizes(sizes: &[usize]) -> String {
    let v: Vec<String> = sizes.iter().map(usize::to_string).collect();
    v.join(";")
}

/// One row per requested tally algorithm.
pub fn tally_report(s: &Scenario, algorithms: &[TallyAlgorithm]) -> Result<Table> {
    let (grid, partition) = s.layout()?;
    let mut t = Table::new(&[
        "geometry", "m", "la_count", "la_sizes", "algorithm", "x_total", "dot_total", "beta1",
        "beta2", "beta21", "beta22", "beta1_2dp", "beta2_2dp", "beta21_3dp", "beta22_3dp",
    ])
    .meta("report", "boundary tally");
    for &alg in algorithms {
        let tl = tally(&grid, &partition, alg);
        let b = betas_from_tally(&tl)?;
        let r = b.rounded();
        t.push(vec![
            grid.geometry().to_string(),
            grid.m().to_string(),
            partition.la_count().to_string(),
            sizes(&partition.la_sizes()),
            alg.to_string(),
            tl.x_total.to_string(),
            tl.dot_total.to_string(),
            num(b.beta1),
            num(b.beta2),
            num(b.beta21),
            num(b.beta22),
            num(r.beta1),
            num(r.beta2),
            num(r.beta21),
            num(r.beta22),
        ]);
    }
    Ok(t)
}

fn scenario_betas(s: &Scenario) -> Result<BetaSet> {
    let (grid, partition) = s.layout()?;
    betas_from_tally(&tally_advanced(&grid, &partition))
}

/// CS and AS rows: update, paging, list-maintenance and total cost.
pub fn cost_report(s: &Scenario, reading: PagingReading) -> Result<Table> {
    let betas = scenario_betas(s)?;
    let n = s.cells_per_la;
    let iface = s.interface.as_str();
    let list = &s.profile;
    let cs_update = update_cost_cs(&s.network, &s.bytes, iface, n, &betas)?;
    let cs_paging = paging_cost_cs(&s.network, &s.bytes, iface, n)?;
    let as_update = update_cost_as(cs_update, list)?;
    let as_paging = paging_cost_as(&s.network, &s.bytes, iface, n, list, reading)?;
    let as_list = list_maintenance_cost(&s.network)?;

    let mut t = Table::new(&[
        "strategy", "N", "k", "p_inside", "cost_update", "cost_paging", "cost_list", "cost_total",
        "interface", "reading", "speed", "cell_side", "lambda_t1", "lambda_t2", "lambda_mo",
        "calls_per_list_update", "cost_list_unit", "beta1", "beta21", "beta22",
    ])
    .meta("report", "location management cost (bytes/hour)")
    .meta("alphas", format!("{:?}", list.alphas()));
    let echo = |reading: &str| {
        vec![
            iface.to_string(),
            reading.to_string(),
            num(s.network.speed),
            num(s.network.cell_side),
            num(s.network.lambda_t1),
            num(s.network.lambda_t2),
            num(s.network.lambda_mo),
            num(s.network.calls_per_list_update),
            num(s.network.cost_list_unit),
            num(betas.beta1),
            num(betas.beta21),
            num(betas.beta22),
        ]
    };
    let mut cs = vec![
        "CS".to_string(),
        n.to_string(),
        "0".into(),
        "0".into(),
        num(cs_update),
        num(cs_paging),
        "0".into(),
        num(cs_update + cs_paging),
    ];
    cs.extend(echo("-"));
    t.push(cs);
    let mut r#as = vec![
        "AS".to_string(),
        n.to_string(),
        list.k().to_string(),
        num(list.p_inside()),
        num(as_update),
        num(as_paging),
        num(as_list),
        num(as_update + as_paging + as_list),
    ];
    r#as.extend(echo(reading.as_str()));
    t.push(r#as);
    Ok(t)
}

/// Savings parameter a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    CostNextPaging,
    RateRatio,
    PInside,
    Rc,
    CallsPerListUpdate,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::CostNextPaging => "cost_next_paging",
            SweepParam::RateRatio => "rate_ratio",
            SweepParam::PInside => "p_inside",
            SweepParam::Rc => "rc",
            SweepParam::CallsPerListUpdate => "calls_per_list_update",
        }
    }

    fn apply(self, p: &mut SavingsParams, v: f64) {
        match self {
            SweepParam::CostNextPaging => p.cost_next_paging = v,
            SweepParam::RateRatio => p.rate_paging = v * p.rate_update,
            SweepParam::PInside => p.p_inside = v,
            SweepParam::Rc => p.rc = v,
            SweepParam::CallsPerListUpdate => p.calls_per_list_update = v,
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = LmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" | "cost_next_paging" => Ok(SweepParam::CostNextPaging),
            "rate_ratio" | "ratio" => Ok(SweepParam::RateRatio),
            "p_inside" => Ok(SweepParam::PInside),
            "rc" => Ok(SweepParam::Rc),
            "calls_per_list_update" | "calls" => Ok(SweepParam::CallsPerListUpdate),
            other => Err(LmError::Domain(format!("unknown sweep parameter {other:?}"))),
        }
    }
}

/// Per-point savings and per-value optima for one swept parameter.
pub struct SweepTables {
    pub points: Table,
    pub optima: Table,
}

pub fn sweep_report(
    s: &Scenario,
    param: SweepParam,
    values: &[f64],
    fixed_network: bool,
) -> Result<SweepTables> {
    let template = if fixed_network {
        s.fixed_network_template()
    } else {
        s.savings.clone()
    };
    let dist = s.distribution();
    let fixed_cols = [
        "cost_update", "cost_paging_area", "rate_update", "rate_paging", "cost_next_paging",
        "p_inside", "rc", "lambda_sum", "calls_per_list_update", "include_list_cost",
    ];
    let mut header = vec![param.name(), "k", "e_n", "savings"];
    header.extend(fixed_cols);
    let mut points = Table::new(&header)
        .meta("report", "savings sweep")
        .meta("swept", param.name())
        .meta("distribution", format!("{dist:?}"));
    let mut optima = Table::new(&[param.name(), "k_opt", "savings_opt", "k_max_positive"])
        .meta("report", "savings optima")
        .meta("k_range", format!("{}..={}", s.k_min, s.k_max));

    for &v in values {
        let mut p = template.clone();
        param.apply(&mut p, v);
        let res = sweep_k(&p, s.k_range(), &dist)?;
        for (&k, &val) in res.ks.iter().zip(&res.values) {
            let pk = crate::savings::params_for_k(&p, k, &dist)?;
            points.push(vec![
                num(v),
                k.to_string(),
                num(pk.e_n),
                num(val),
                num(pk.cost_update),
                num(pk.cost_paging_area),
                num(pk.rate_update),
                num(pk.rate_paging),
                num(pk.cost_next_paging),
                num(pk.p_inside),
                num(pk.rc),
                num(pk.lambda_sum),
                num(pk.calls_per_list_update),
                pk.include_list_cost.to_string(),
            ]);
        }
        optima.push(vec![
            num(v),
            res.best_k().to_string(),
            num(res.best_value()),
            res.zero_crossing.map_or("none".into(), |k| k.to_string()),
        ]);
    }
    Ok(SweepTables { points, optima })
}

pub const FIGURES: [u32; 7] = [3, 5, 6, 7, 8, 9, 10];

/// Residence-probability sets plotted against the classical strategy.
pub fn figure3_profiles() -> Vec<ProbabilityList> {
    let tails: [&[f64]; 3] = [
        &[0.1, 0.05],
        &[0.1, 0.05, 0.02, 0.01],
        &[0.05, 0.03, 0.02, 0.01, 0.008, 0.005, 0.003, 0.002],
    ];
    let mut out = Vec::new();
    for tail in tails {
        for a1 in [0.4, 0.5, 0.6, 0.7, 0.8] {
            let mut v = vec![a1];
            v.extend_from_slice(tail);
            out.push(ProbabilityList::new(v).expect("static profile"));
        }
    }
    out
}

const F_SERIES: [f64; 5] = [0.2, 0.5, 0.8, 1.0, 1.5];

/// Curve data behind one of the cost/savings figures.
pub fn figure_data(id: u32, s: &Scenario) -> Result<Table> {
    let n_range = 1..=30u32;
    match id {
        3 | 5 => {
            let betas = scenario_betas(s)?;
            let iface = s.interface.as_str();
            let (what, col) = if id == 3 {
                ("location update cost vs cells per LA", "cost_update")
            } else {
                ("paging cost vs cells per LA", "cost_paging")
            };
            let mut t = Table::new(&["series", "k", "alpha1", "p_inside", "N", col])
                .meta("figure", id)
                .meta("curve", what)
                .meta("interface", iface)
                .meta("reading", s.reading)
                .meta("beta1", betas.beta1)
                .meta("speed", s.network.speed)
                .meta("cell_side", s.network.cell_side)
                .meta("lambda_t1", s.network.lambda_t1)
                .meta("lambda_t2", s.network.lambda_t2);
            let mut series: Vec<(String, Option<ProbabilityList>)> = vec![("CS".into(), None)];
            for l in figure3_profiles() {
                series.push((format!("AS k={} a1={}", l.k(), l.alphas()[0]), Some(l)));
            }
            for (name, list) in &series {
                for n in n_range.clone() {
                    let cs = if id == 3 {
                        update_cost_cs(&s.network, &s.bytes, iface, n, &betas)?
                    } else {
                        paging_cost_cs(&s.network, &s.bytes, iface, n)?
                    };
                    let (k, a1, p, v) = match list {
                        None => (0, 0.0, 0.0, cs),
                        Some(l) => {
                            let v = if id == 3 {
                                update_cost_as(cs, l)?
                            } else {
                                paging_cost_as(&s.network, &s.bytes, iface, n, l, s.reading)?
                            };
                            (l.k(), l.alphas()[0], l.p_inside(), v)
                        }
                    };
                    t.push(vec![
                        name.clone(),
                        k.to_string(),
                        num(a1),
                        num(p),
                        n.to_string(),
                        num(v),
                    ]);
                }
            }
            Ok(t)
        }
        6 | 7 => {
            let p_inside = if id == 6 { 1.0 } else { 0.2 };
            let cp = s.savings.cost_paging_area;
            let rp = s.savings.rate_paging;
            let mut t = Table::new(&["F", "p_inside", "e_n", "cost_normalized_paging"])
                .meta("figure", id)
                .meta("curve", "normalized paging cost vs expected LAs paged")
                .meta("cost_paging_area", cp)
                .meta("rate_paging", rp);
            for f in F_SERIES {
                for step in 0..=18 {
                    let e_n = 1.0 + 0.5 * step as f64;
                    let v = normalized_paging_cost(cp, rp, p_inside, f, e_n)?;
                    t.push(vec![num(f), num(p_inside), num(e_n), num(v)]);
                }
            }
            Ok(t)
        }
        8 => {
            let base = &s.savings;
            let mut t = Table::new(&["F", "k", "e_n", "savings"])
                .meta("figure", 8)
                .meta("curve", "radio interface savings, uniform distribution")
                .meta("cost_update/cost_paging_area", base.cost_update / base.cost_paging_area)
                .meta("rate_paging/rate_update", base.rate_paging / base.rate_update)
                .meta("p_inside", base.p_inside);
            for f in F_SERIES {
                let p = SavingsParams {
                    cost_next_paging: f,
                    include_list_cost: false,
                    ..base.clone()
                };
                let res = sweep_k(&p, 1..=30, &Distribution::UniformConditional)?;
                for (&k, &v) in res.ks.iter().zip(&res.values) {
                    t.push(vec![num(f), k.to_string(), num((k as f64 + 1.0) / 2.0), num(v)]);
                }
            }
            Ok(t)
        }
        9 => {
            let base = SavingsParams {
                include_list_cost: false,
                ..s.savings.clone()
            };
            let ratios = [0.1, 0.5, 1.0, 1.549, 3.0, 5.0, 10.0, 12.0];
            let mut t = Table::new(&["rate_ratio", "k", "savings"])
                .meta("figure", 9)
                .meta("curve", "radio interface savings vs rate ratio, uniform distribution")
                .meta("cost_next_paging", base.cost_next_paging)
                .meta("cost_update/cost_paging_area", base.cost_update / base.cost_paging_area);
            for (ratio, res) in sweep_rate_ratio(&base, &ratios, 1..=50)? {
                for (&k, &v) in res.ks.iter().zip(&res.values) {
                    t.push(vec![num(ratio), k.to_string(), num(v)]);
                }
            }
            Ok(t)
        }
        10 => {
            let template = s.fixed_network_template();
            let (rcs, ps, ks) = fixed_network_grid();
            let mut t = Table::new(&["rc", "p_inside", "k", "savings"])
                .meta("figure", 10)
                .meta("curve", "fixed network savings with list maintenance")
                .meta("rate_update", template.rate_update)
                .meta("rate_paging", template.rate_paging)
                .meta("lambda_sum", template.lambda_sum)
                .meta("calls_per_list_update", template.calls_per_list_update)
                .meta("cost_next_paging", template.cost_next_paging);
            for pt in sweep_fixed_network(&template, &rcs, &ps, ks)? {
                for (&k, &v) in pt.result.ks.iter().zip(&pt.result.values) {
                    t.push(vec![num(pt.rc), num(pt.p_inside), k.to_string(), num(v)]);
                }
            }
            Ok(t)
        }
        other => Err(LmError::UnknownFigure(other)),
    }
}

/// Walk-oracle and paging-oracle checks for a scenario.
pub fn validation_report(s: &Scenario, steps: u64, trials: u64, seed: u64) -> Result<Table> {
    let (grid, partition) = s.layout()?;
    let analytic = betas_from_tally(&tally_advanced(&grid, &partition))?.beta1;
    let stats = walk_crossing_stats(&WalkConfig {
        grid: &grid,
        partition: &partition,
        steps,
        seed,
    })?;
    let mut rows = vec![
        ValidationRow {
            check: "beta1 random walk (binomial SE)".into(),
            analytic,
            empirical: stats.empirical_beta1(),
            std_error: stats.standard_error(analytic),
        },
        ValidationRow {
            check: "beta1 random walk (batch-means SE)".into(),
            analytic,
            empirical: stats.empirical_beta1(),
            std_error: stats.batch_standard_error(),
        },
    ];
    let iface = s.interface.as_str();
    let n = s.cells_per_la;
    let est = simulate_paging(&s.profile, &s.network, &s.bytes, iface, n, trials, seed)?;
    rows.push(ValidationRow {
        check: "paging AS sequential".into(),
        analytic: paging_cost_as(&s.network, &s.bytes, iface, n, &s.profile, PagingReading::Principled)?,
        empirical: est.mean,
        std_error: est.std_error,
    });

    let mut t = Table::new(&["check", "analytic", "empirical", "std_error", "z_score"])
        .meta("report", "Monte-Carlo validation")
        .meta("seed", seed)
        .meta("walk_steps", steps)
        .meta("paging_trials", trials)
        .meta("crossings", stats.crossings());
    for r in rows {
        t.push(vec![
            r.check.clone(),
            num(r.analytic),
            num(r.empirical),
            num(r.std_error),
            num(r.z_score()),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(t: &Table, name: &str, row: usize) -> String {
        t.rows[row][t.column(name).unwrap()].clone()
    }

    #[test]
    fn tally_report_rows() {
        let s = Scenario::default();
        let t = tally_report(&s, &[TallyAlgorithm::Simple, TallyAlgorithm::Advanced]).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(col(&t, "x_total", 1), "116");
        assert_eq!(col(&t, "dot_total", 1), "108");
        assert_eq!(col(&t, "beta1_2dp", 1), "0.48");
        assert_eq!(col(&t, "la_sizes", 0), "25;25;25;25");
        assert!(t.to_csv().starts_with("# report: boundary tally\ngeometry,m,"));
    }

    #[test]
    fn cost_report_rows() {
        let s = Scenario {
            profile: ProbabilityList::default(),
            ..Default::default()
        };
        let t = cost_report(&s, PagingReading::Principled).unwrap();
        let paging: f64 = col(&t, "cost_paging", 0).parse().unwrap();
        assert!((paging - 133.98).abs() < 1e-9);

        let s = Scenario::default();
        let t = cost_report(&s, PagingReading::Principled).unwrap();
        let cs: f64 = col(&t, "cost_update", 0).parse().unwrap();
        let r#as: f64 = col(&t, "cost_update", 1).parse().unwrap();
        assert!((r#as - 0.05 * cs).abs() < 1e-9);
    }

    #[test]
    fn figure_checks() {
        let s = Scenario::default();
        let f6 = figure_data(6, &s).unwrap();
        let first = f6
            .rows
            .iter()
            .find(|r| r[0] == "1.5" && r[2] == "1")
            .unwrap();
        assert_eq!(first[3].parse::<f64>().unwrap(), 1.549);

        let f8 = figure_data(8, &s).unwrap();
        let series: Vec<&Vec<String>> = f8.rows.iter().filter(|r| r[0] == "0.8").collect();
        let best = series
            .iter()
            .max_by(|a, b| a[3].parse::<f64>().unwrap().total_cmp(&b[3].parse().unwrap()))
            .unwrap();
        assert_eq!(best[1], "6");

        let f3 = figure_data(3, &s).unwrap();
        for n in 1..=30 {
            let n = n.to_string();
            let cs: f64 = f3.rows.iter().find(|r| r[0] == "CS" && r[4] == n).unwrap()[5].parse().unwrap();
            let a: f64 = f3
                .rows
                .iter()
                .find(|r| r[0] == "AS k=3 a1=0.8" && r[4] == n)
                .unwrap()[5]
                .parse()
                .unwrap();
            assert!((a - 0.05 * cs).abs() < 1e-9 * cs);
        }
        assert_eq!(figure_data(4, &s).unwrap_err(), LmError::UnknownFigure(4));
    }

    #[test]
    fn sweep_optima_column() {
        let s = Scenario::default();
        let t = sweep_report(&s, SweepParam::CostNextPaging, &[0.8, 1.0, 1.5], false).unwrap();
        let ks: Vec<String> = t.optima.rows.iter().map(|r| r[1].clone()).collect();
        assert_eq!(ks, ["6", "5", "4"]);
        assert_eq!(t.points.rows.len(), 3 * 30);
    }
}
