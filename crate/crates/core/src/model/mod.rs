//! Physical model: rotational constant, phonon dispersion and couplings.
//!
//! All energies are measured in units of the rotational constant, so every
//! model built here has `c = 1` unless constructed explicitly otherwise.

pub mod config;
mod grid;
pub mod special;

pub use config::ModelConfig;
pub use grid::{GridSpacing, KGrid, MeasureConfig};

use crate::error::{Error, Result};

/// `ω(k) = a + b k²`, `U_λ(k) = u_λ k exp(−k²/σ²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToyParams {
    pub a: f64,
    pub b: f64,
    /// `u_λ` for `λ = 0, 1, …`.
    pub u: Vec<f64>,
    pub sigma: f64,
}

impl Default for ToyParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 0.5,
            u: vec![0.5, 0.3],
            sigma: 2.0,
        }
    }
}

/// Bogoliubov phonons with Gaussian-form-factor couplings, in units of `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct BogoliubovParams {
    pub m_b: f64,
    pub g_bb: f64,
    pub n0: f64,
    pub u: [f64; 2],
    pub r: [f64; 2],
}

impl BogoliubovParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("m_b", self.m_b),
            ("g_bb", self.g_bb),
            ("n0", self.n0),
            ("r0", self.r[0]),
            ("r1", self.r[1]),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("u0", self.u[0]), ("u1", self.u[1])] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// `ε(k) = k²/(2 m_b)`.
    pub fn free_energy(&self, k: f64) -> f64 {
        k * k / (2.0 * self.m_b)
    }

    pub fn omega(&self, k: f64) -> f64 {
        let e = self.free_energy(k);
        (e * (e + 2.0 * self.g_bb * self.n0)).sqrt()
    }

    pub fn coupling(&self, lambda: u32, k: f64) -> f64 {
        if lambda > 1 || k <= 0.0 {
            return 0.0;
        }
        let l = lambda as usize;
        let e = self.free_energy(k);
        let w = self.omega(k);
        let amp = (8.0 * self.n0 * k * k * e / (w * f64::from(2 * lambda + 1))).sqrt();
        self.u[l] * amp * special::gaussian_bessel_integral(lambda, k, self.r[l])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    Toy(ToyParams),
    Helium(BogoliubovParams),
    /// k-independent values, for single-k tests.
    Constant { omega: f64, couplings: Vec<f64> },
}

/// Rotational constant, dispersion `ω(k)` and couplings `U_λ(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngulonModel {
    pub c: f64,
    pub kind: ModelKind,
    /// Multiplies every coupling.
    pub coupling_scale: f64,
}

impl AngulonModel {
    pub fn lambda_max(&self) -> u32 {
        match &self.kind {
            ModelKind::Toy(p) => p.u.len().saturating_sub(1) as u32,
            ModelKind::Helium(_) => 1,
            ModelKind::Constant { couplings, .. } => couplings.len().saturating_sub(1) as u32,
        }
    }

    pub fn omega(&self, k: f64) -> f64 {
        match &self.kind {
            ModelKind::Toy(p) => p.a + p.b * k * k,
            ModelKind::Helium(p) => p.omega(k),
            ModelKind::Constant { omega, .. } => *omega,
        }
    }

    pub fn coupling(&self, lambda: u32, k: f64) -> f64 {
        let raw = match &self.kind {
            ModelKind::Toy(p) => p
                .u
                .get(lambda as usize)
                .map_or(0.0, |u| u * k * (-k * k / (p.sigma * p.sigma)).exp()),
            ModelKind::Helium(p) => p.coupling(lambda, k),
            ModelKind::Constant { couplings, .. } => couplings.get(lambda as usize).copied().unwrap_or(0.0),
        };
        raw * self.coupling_scale
    }

    /// The same model with couplings multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coupling_scale: self.coupling_scale * factor,
            ..self.clone()
        }
    }

    pub fn is_free(&self) -> bool {
        self.coupling_scale == 0.0
    }

    /// `(2λ+1)^{3/2}`-weighted coupling sum used by the boundedness audit.
    pub fn coupling_norm(&self, k: f64) -> f64 {
        (0..=self.lambda_max())
            .map(|l| f64::from(2 * l + 1).powf(1.5) * self.coupling(l, k).abs())
            .sum()
    }

    /// Largest `ω` and coupling norm over the grid; fails when either is not
    /// finite or `ω`/`U` go negative.
    pub fn audit(&self, grid: &KGrid) -> Result<BoundednessReport> {
        let mut report = BoundednessReport::default();
        for &k in grid.points() {
            let w = self.omega(k);
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Unbounded(format!("omega({k}) = {w}")));
            }
            for l in 0..=self.lambda_max() {
                let u = self.coupling(l, k);
                if !u.is_finite() || u < 0.0 {
                    return Err(Error::Unbounded(format!("U_{l}({k}) = {u}")));
                }
            }
            report.max_omega = report.max_omega.max(w);
            report.max_coupling_norm = report.max_coupling_norm.max(self.coupling_norm(k));
        }
        Ok(report)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoundednessReport {
    pub max_omega: f64,
    pub max_coupling_norm: f64,
}

pub fn toy_model(params: ToyParams) -> AngulonModel {
    AngulonModel {
        c: 1.0,
        kind: ModelKind::Toy(params),
        coupling_scale: 1.0,
    }
}

pub fn helium_model(params: BogoliubovParams) -> Result<AngulonModel> {
    params.validate()?;
    Ok(AngulonModel {
        c: 1.0,
        kind: ModelKind::Helium(params),
        coupling_scale: 1.0,
    })
}

pub fn constant_model(c: f64, omega: f64, couplings: Vec<f64>) -> AngulonModel {
    AngulonModel {
        c,
        kind: ModelKind::Constant { omega, couplings },
        coupling_scale: 1.0,
    }
}
