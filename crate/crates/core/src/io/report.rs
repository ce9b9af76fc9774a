use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::error::Result;
use crate::harness::{RateFit, SweepResult, SweepRow};

/// Column names of the sweep table, in order.
pub const SWEEP_COLUMNS: [&str; 7] = [
    "epsilon",
    "nu",
    "sup_rel_energy",
    "l2loc_vel_err",
    "strichartz_q6",
    "rho_h_s_err",
    "rei_slack",
];

/// Numeric table written as CSV with every value in `{:.16e}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// One entry of the rate summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSummary {
    pub metric: String,
    pub slope: f64,
    pub residual: f64,
    pub points: usize,
}

impl RateSummary {
    pub fn new(metric: &str, fit: &RateFit) -> Self {
        RateSummary { metric: metric.to_string(), slope: fit.slope, residual: fit.residual, points: fit.points }
    }
}

pub fn rates_json(rates: &[RateSummary]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rates).map_err(|e| crate::Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn sweep_values(r: &SweepRow) -> Vec<f64> {
    vec![
        r.eps,
        r.nu,
        r.sup_rel_energy,
        r.l2loc_vel_err,
        r.strichartz_q6,
        r.rho_h_s_err,
        r.rei_slack,
    ]
}

pub fn sweep_table(res: &SweepResult) -> Table {
    let mut t = Table::new(&SWEEP_COLUMNS);
    for r in &res.rows {
        t.push(sweep_values(r));
    }
    t
}

pub fn sweep_rates(res: &SweepResult) -> Vec<RateSummary> {
    res.fits.iter().map(|f| RateSummary::new(&f.metric, &f.fit)).collect()
}

/// Per-member details: initial-data table, budget extremes and failures.
pub fn sweep_detail_json(res: &SweepResult) -> Result<String> {
    let rows: Vec<serde_json::Value> = res
        .rows
        .iter()
        .map(|r| {
            let l = &r.data_rates;
            json!({
                "epsilon": r.eps,
                "nu": r.nu,
                "steps": r.steps,
                "dt": r.dt,
                "initial_rel_energy": r.initial_rel_energy,
                "conv_id_constant": r.conv_id_constant,
                "max_budget_tol": r.max_budget_tol,
                "max_sample_variation": r.max_sample_variation,
                "budget_holds": r.budget_holds(),
                "initial_data": {
                    "rate": l.rate,
                    "rho_l2": l.rho_l2,
                    "rho_ratio": l.rho_ratio,
                    "sqrt_l2": l.sqrt_l2,
                    "sqrt_ratio": l.sqrt_ratio,
                    "orlicz_ratio": l.orlicz_ratio,
                    "momentum_l2": l.momentum_l2,
                    "sigma_l2": l.sigma_l2,
                    "sqrt_pointwise": l.sqrt_pointwise,
                    "lq": l.lq.iter().map(|q| json!({
                        "q": q.q, "norm": q.norm, "exponent": q.exponent, "ratio": q.ratio
                    })).collect::<Vec<_>>(),
                },
            })
        })
        .collect();
    let failures: Vec<serde_json::Value> = res
        .failures
        .iter()
        .map(|(e, m, c)| json!({"epsilon": e, "error": m, "exit_code": c}))
        .collect();
    let v = json!({"members": rows, "failures": failures});
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| crate::Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

/// `key value` lines for terminal output.
pub fn summary_lines(pairs: &[(&str, f64)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{k} {v:.6e}");
    }
    s
}
