//! Density sweeps of the `N = 2`, `L = 0` closure.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::selfenergy::TwoPhononKernel;
use super::solvers::{solve_n1, solve_n2_l0};
use crate::error::Result;
use crate::model::{KGrid, ModelConfig};
use crate::numfmt::sig15;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub rho_tilde: f64,
    pub energy: f64,
    pub residual: f64,
    pub n_poles: usize,
    pub energy_n1: f64,
    pub at_bound: bool,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Change of the middle-density energy when the grid is cut at `kcut`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KcutReport {
    pub rho_tilde: f64,
    pub kcut: f64,
    pub energy_full: f64,
    pub energy_cut: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Ascending in `rho_tilde`.
    pub rows: Vec<SweepRow>,
    pub kcut: Option<KcutReport>,
}

impl SweepResult {
    pub fn success_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r.ok()).count() as f64 / self.rows.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rho_tilde,energy_over_c,residual,n_poles,energy_n1_over_c,status\n");
        for r in &self.rows {
            let status = match (&r.error, r.at_bound) {
                (Some(e), _) => format!("error: {}", e.replace(',', ";")),
                (None, true) => "bound".to_string(),
                (None, false) => "root".to_string(),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                sig15(r.rho_tilde),
                sig15(r.energy),
                sig15(r.residual),
                r.n_poles,
                sig15(r.energy_n1),
                status
            );
        }
        out
    }
}

fn solve_row(cfg: &ModelConfig, grid: &KGrid, kernel: &TwoPhononKernel, rho: f64) -> SweepRow {
    let attempt = || -> Result<SweepRow> {
        let model = cfg.model_at(rho)?;
        let n2 = solve_n2_l0(&model, grid, kernel, true)?;
        let n1 = solve_n1(0, &model, grid)?;
        Ok(SweepRow {
            rho_tilde: rho,
            energy: n2.energy / model.c,
            residual: n2.residual,
            n_poles: n2.poles.len(),
            energy_n1: n1.energy / model.c,
            at_bound: n2.at_bound,
            error: None,
        })
    };
    attempt().unwrap_or_else(|e| SweepRow {
        rho_tilde: rho,
        energy: f64::NAN,
        residual: f64::NAN,
        n_poles: 0,
        energy_n1: f64::NAN,
        at_bound: false,
        error: Some(e.to_string()),
    })
}

/// Runs every density of the configuration in parallel. Row failures are
/// recorded, not propagated. The middle density is re-solved on the grid cut
/// at half its `kmax` to report cutoff sensitivity.
pub fn sweep_density(cfg: &ModelConfig) -> Result<SweepResult> {
    let grid = cfg.grid()?;
    let kernel = TwoPhononKernel::from_oracle(1)?;
    let mut densities = cfg.densities();
    densities.sort_by(f64::total_cmp);
    let rows: Vec<SweepRow> = densities
        .par_iter()
        .map(|&rho| solve_row(cfg, &grid, &kernel, rho))
        .collect();

    let mid = &rows[rows.len() / 2];
    let kcut = if mid.ok() {
        let cut = 0.5 * grid.kmax();
        grid.truncated(cut).ok().filter(|g| g.len() >= 2).and_then(|g| {
            let model = cfg.model_at(mid.rho_tilde).ok()?;
            let e = solve_n2_l0(&model, &g, &kernel, true).ok()?;
            Some(KcutReport {
                rho_tilde: mid.rho_tilde,
                kcut: g.kmax(),
                energy_full: mid.energy,
                energy_cut: e.energy / model.c,
            })
        })
    } else {
        None
    };
    Ok(SweepResult { rows, kcut })
}
