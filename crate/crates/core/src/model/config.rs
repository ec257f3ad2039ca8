//! Flat `key = value` model configuration.
//!
//! Values are read in physical units and converted to units of the rotational
//! constant `c` when a model is built: energies are divided by `c` and the
//! boson mass is multiplied by it.

use super::{helium_model, AngulonModel, BogoliubovParams, GridSpacing, KGrid};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub c: f64,
    pub m_b: f64,
    pub g_bb: f64,
    pub n0_log10_min: f64,
    pub n0_log10_max: f64,
    pub n0_log10_steps: usize,
    /// Density used by single-point commands.
    pub n0_log10: f64,
    pub u0: f64,
    pub u1: f64,
    pub r0: f64,
    pub r1: f64,
    pub grid_kmin: f64,
    pub grid_kmax: f64,
    pub grid_points: usize,
    pub grid_spacing: GridSpacing,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            m_b: 1.0,
            g_bb: 418.0,
            n0_log10_min: -10.0,
            n0_log10_max: -5.0,
            n0_log10_steps: 21,
            n0_log10: -8.0,
            u0: 218.0,
            u1: 218.0 / 1.75,
            r0: 1.5,
            r1: 1.5,
            grid_kmin: 1e-3,
            grid_kmax: 60.0,
            grid_points: 2000,
            grid_spacing: GridSpacing::Geometric,
        }
    }
}

pub const KEYS: &[&str] = &[
    "c",
    "m_b",
    "g_bb",
    "n0_log10_min",
    "n0_log10_max",
    "n0_log10_steps",
    "n0_log10",
    "u0",
    "u1",
    "r0",
    "r1",
    "grid.kmin",
    "grid.kmax",
    "grid.points",
    "grid.spacing",
];

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", i + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("'{key}' expects a number, got '{value}'")))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("'{key}' expects a count, got '{value}'")))
        };
        match key {
            "c" => self.c = num()?,
            "m_b" => self.m_b = num()?,
            "g_bb" => self.g_bb = num()?,
            "n0_log10_min" => self.n0_log10_min = num()?,
            "n0_log10_max" => self.n0_log10_max = num()?,
            "n0_log10_steps" => self.n0_log10_steps = count()?,
            "n0_log10" => self.n0_log10 = num()?,
            "u0" => self.u0 = num()?,
            "u1" => self.u1 = num()?,
            "r0" => self.r0 = num()?,
            "r1" => self.r1 = num()?,
            "grid.kmin" => self.grid_kmin = num()?,
            "grid.kmax" => self.grid_kmax = num()?,
            "grid.points" => self.grid_points = count()?,
            "grid.spacing" => self.grid_spacing = value.parse()?,
            other => {
                return Err(Error::Config(format!(
                    "unknown key '{other}' (known keys: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.is_nan() || self.c <= 0.0 {
            return Err(Error::Config("c must be positive".into()));
        }
        if self.n0_log10_steps == 0 || self.n0_log10_max < self.n0_log10_min {
            return Err(Error::Config("density range is empty".into()));
        }
        if self.grid_points < 2 || self.grid_kmax.partial_cmp(&self.grid_kmin) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Config("grid needs two points and kmax > kmin".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<KGrid> {
        KGrid::with_spacing(self.grid_spacing, self.grid_kmin, self.grid_kmax, self.grid_points)
    }

    /// Logarithmic densities of the sweep, ascending.
    pub fn densities(&self) -> Vec<f64> {
        let n = self.n0_log10_steps;
        if n == 1 {
            return vec![self.n0_log10_min];
        }
        let h = (self.n0_log10_max - self.n0_log10_min) / (n - 1) as f64;
        (0..n).map(|i| self.n0_log10_min + h * i as f64).collect()
    }

    /// Parameters in units of `c` at density `10^rho_tilde`.
    pub fn helium_params(&self, rho_tilde: f64) -> BogoliubovParams {
        BogoliubovParams {
            m_b: self.m_b * self.c,
            g_bb: self.g_bb / self.c,
            n0: 10f64.powf(rho_tilde),
            u: [self.u0 / self.c, self.u1 / self.c],
            r: [self.r0, self.r1],
        }
    }

    pub fn model_at(&self, rho_tilde: f64) -> Result<AngulonModel> {
        helium_model(self.helium_params(rho_tilde))
    }
}
