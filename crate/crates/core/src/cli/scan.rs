use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identify::classify;
use crate::solver::{
    solution_catalog, solve_2periodic, solve_3periodic, solve_4periodic, tau_0, tau_c,
    FourPeriodicKind,
};

pub const SCAN_HEADER: &str = "tau,k,a1,a2,a3,b3,a5,b5,c3_low,c3_high,n_solutions,n_ggm";

/// One grid point of a scan. Root values are u-values; absent roots are
/// `None`. The period-2 and period-4 columns and both counts refer to the
/// `(1, a, 1, b)` family and are only filled for `k = 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub tau: f64,
    pub k: usize,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub a3: Option<f64>,
    pub b3: Option<f64>,
    pub a5: Option<f64>,
    pub b5: Option<f64>,
    pub c3_low: Option<f64>,
    pub c3_high: Option<f64>,
    pub n_solutions: Option<usize>,
    pub n_ggm: Option<usize>,
    pub tau_c: f64,
    pub tau_0: f64,
}

fn cell_f(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn cell_n(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ScanRow {
    /// The row in [`SCAN_HEADER`] column order.
    pub fn to_csv(&self) -> String {
        [
            format!("{:.16e}", self.tau),
            self.k.to_string(),
            cell_f(self.a1),
            cell_f(self.a2),
            cell_f(self.a3),
            cell_f(self.b3),
            cell_f(self.a5),
            cell_f(self.b5),
            cell_f(self.c3_low),
            cell_f(self.c3_high),
            cell_n(self.n_solutions),
            cell_n(self.n_ggm),
        ]
        .join(",")
    }
}

pub fn scan_row(tau: f64, k: usize) -> Result<ScanRow> {
    let mut row = ScanRow {
        tau,
        k,
        a1: None,
        a2: None,
        a3: None,
        b3: None,
        a5: None,
        b5: None,
        c3_low: None,
        c3_high: None,
        n_solutions: None,
        n_ggm: None,
        tau_c: tau_c(k)?.tau_c,
        tau_0: tau_0(k)?,
    };
    if k == 2 {
        let two = solve_2periodic(tau)?;
        if two.len() == 3 {
            row.a1 = Some(two[1]);
            row.a2 = Some(two[2]);
        }
        for pair in solve_4periodic(tau)? {
            match pair.kind {
                FourPeriodicKind::SumPlus => {
                    row.a3 = Some(pair.a);
                    row.b3 = Some(pair.b);
                }
                FourPeriodicKind::SumMinus => {
                    row.a5 = Some(pair.a);
                    row.b5 = Some(pair.b);
                }
                _ => {}
            }
        }
        row.n_solutions = Some(solution_catalog(tau, k)?.four_periodic_count());
        row.n_ggm = Some(classify(tau, k)?.four_periodic_count());
    }
    let roots = solve_3periodic(tau, k)?;
    row.c3_low = roots.first().copied();
    row.c3_high = roots.last().copied();
    Ok(row)
}

/// Grid `tau_min + i * step` for `i = 0, 1, ...` up to `tau_max`.
pub fn grid(tau_min: f64, tau_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(tau_min > 2.0 && tau_min.is_finite()) {
        return Err(Error::InvalidTau(tau_min));
    }
    if !(step > 0.0 && step.is_finite()) || !(tau_max >= tau_min && tau_max.is_finite()) {
        return Err(Error::Domain(format!(
            "bad range [{tau_min}, {tau_max}] with step {step}"
        )));
    }
    let n = ((tau_max - tau_min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| tau_min + i as f64 * step).collect())
}

/// Rows for every grid point, computed in parallel and returned in grid
/// order.
pub fn scan_rows(tau_min: f64, tau_max: f64, step: f64, k: usize) -> Result<Vec<ScanRow>> {
    grid(tau_min, tau_max, step)?
        .into_par_iter()
        .map(|tau| scan_row(tau, k))
        .collect()
}
