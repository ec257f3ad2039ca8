//! Self-energies of the one- and two-phonon closures.
//!
//! Fixed-`k` functions evaluate the sums directly and fail on an exact pole;
//! the `*_terms` builders return the same sums as [`PvTerm`]s for
//! principal-value integration over a grid.

use crate::error::{Error, Result};
use crate::hamiltonian::u_lambda_l;
use crate::model::AngulonModel;
use crate::scfp::{shared_oracle, ScfpKey, ScfpTable};
use crate::wigner::{phase, reduced_y_f64};

use super::pv::PvTerm;

fn check_pole(den: f64, j: u32, k: f64, energy: f64) -> Result<f64> {
    if den.abs() <= 1e-14 * (1.0 + energy.abs()) {
        Err(Error::PoleAtK { j, k, energy })
    } else {
        Ok(den)
    }
}

/// `(J, λ, (2λ+1) U_{λL}(JλL0)² / U_λ²)` for every triangle-allowed pair.
fn one_phonon_channels(l: u32, lambda_max: u32) -> Vec<(u32, u32, f64)> {
    let mut out = Vec::new();
    for lambda in 0..=lambda_max {
        for j in l.abs_diff(lambda)..=l + lambda {
            let u = u_lambda_l(lambda, l, j, lambda, l, 0, 1.0);
            if u != 0.0 {
                out.push((j, lambda, f64::from(2 * lambda + 1) * u * u));
            }
        }
    }
    out
}

/// `Σ_L^(1)(E, k) = Σ_{J,λ} (2λ+1) U_{λL}(JλL0k)² / (cJ(J+1) + ω(k) − E)`.
pub fn sigma1(l: u32, e: f64, k: f64, model: &AngulonModel) -> Result<f64> {
    let omega = model.omega(k);
    let mut s = 0.0;
    for (j, lambda, w) in one_phonon_channels(l, model.lambda_max()) {
        let u = model.coupling(lambda, k);
        if u == 0.0 {
            continue;
        }
        let den = check_pole(model.c * f64::from(j * (j + 1)) + omega - e, j, k, e)?;
        s += w * u * u / den;
    }
    Ok(s)
}

pub fn sigma1_terms<'a>(l: u32, e: f64, model: &'a AngulonModel) -> Vec<PvTerm<'a>> {
    one_phonon_channels(l, model.lambda_max())
        .into_iter()
        .map(|(j, lambda, w)| {
            let kin = model.c * f64::from(j * (j + 1));
            PvTerm::new(
                move |k| {
                    let u = model.coupling(lambda, k);
                    w * u * u
                },
                move |k| kin + model.omega(k) - e,
            )
        })
        .collect()
}

/// Relative amplitudes `c_J / c_L` of the one-phonon channels at `k`.
pub fn n1_amplitudes(l: u32, e: f64, k: f64, model: &AngulonModel) -> Vec<(u32, u32, f64)> {
    let omega = model.omega(k);
    let mut out = Vec::new();
    for lambda in 0..=model.lambda_max() {
        for j in l.abs_diff(lambda)..=l + lambda {
            let u = u_lambda_l(lambda, l, j, lambda, l, 0, model.coupling(lambda, k));
            let den = model.c * f64::from(j * (j + 1)) + omega - e;
            let amp = phase(i64::from(lambda) + 1) * f64::from(2 * lambda + 1).sqrt() * u / den;
            if u_lambda_l(lambda, l, j, lambda, l, 0, 1.0) != 0.0 {
                out.push((j, lambda, amp));
            }
        }
    }
    out
}

/// Precomputed angular factors of the `N = 2`, `L = 0` closure.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPhononKernel {
    pub lambda_max: u32,
    /// `(λ‖Y_λ‖0)²` per `λ`.
    pub vacuum: Vec<f64>,
    /// Per `λ`: `(Λ, (λλ‖λ²Λ), (Λ‖Y_λ‖λ)²)` for the `Λ` with nonzero SCFP.
    pub pairs: Vec<Vec<(u32, f64, f64)>>,
}

impl TwoPhononKernel {
    pub fn new(lambda_max: u32, table: &ScfpTable) -> Result<Self> {
        let mut vacuum = Vec::new();
        let mut pairs = Vec::new();
        for lambda in 0..=lambda_max {
            let y0 = reduced_y_f64(lambda, lambda, 0);
            vacuum.push(y0 * y0);
            let mut row = Vec::new();
            for big in 0..=2 * lambda {
                let scfp = table.value(&ScfpKey::new(lambda, 2, lambda, big))?;
                if scfp == 0.0 {
                    continue;
                }
                let y = reduced_y_f64(big, lambda, lambda);
                row.push((big, scfp, y * y));
            }
            pairs.push(row);
        }
        Ok(Self {
            lambda_max,
            vacuum,
            pairs,
        })
    }

    /// Kernel built from the shared oracle tables.
    pub fn from_oracle(lambda_max: u32) -> Result<Self> {
        let mut table = ScfpTable::new(crate::scfp::Provenance::Oracle);
        for lambda in 0..=lambda_max {
            table.extend(&*shared_oracle(lambda, 2)?);
        }
        Self::new(lambda_max, &table)
    }

    /// `ε_λ(E, k)`; `sign` multiplies the whole sum.
    fn epsilon_signed(&self, lambda: u32, e: f64, k: f64, model: &AngulonModel, sign: f64) -> Result<f64> {
        let u = model.coupling(lambda, k);
        if u == 0.0 {
            return Ok(0.0);
        }
        let omega = model.omega(k);
        let mut s = 0.0;
        for &(big, scfp, y2) in &self.pairs[lambda as usize] {
            let den = check_pole(model.c * f64::from(big * (big + 1)) + 2.0 * omega - e, big, k, e)?;
            s += scfp * y2 / den;
        }
        Ok(sign * 2.0 * u * u / f64::from(2 * lambda + 1) * s)
    }

    /// `ε_λ(E, k) = 2 U_λ²/(2λ+1) Σ_Λ (λλ‖λ²Λ) (Λ‖Y_λ‖λ)² / (cΛ(Λ+1) + 2ω − E)`.
    pub fn epsilon(&self, lambda: u32, e: f64, k: f64, model: &AngulonModel) -> Result<f64> {
        self.epsilon_signed(lambda, e, k, model, 1.0)
    }

    /// The same sum with an extra overall `(−1)^λ`.
    pub fn epsilon_with_parity_sign(&self, lambda: u32, e: f64, k: f64, model: &AngulonModel) -> Result<f64> {
        self.epsilon_signed(lambda, e, k, model, phase(i64::from(lambda)))
    }

    fn one_phonon_denominator(&self, lambda: u32, e: f64, k: f64, model: &AngulonModel) -> f64 {
        model.c * f64::from(lambda * (lambda + 1)) + model.omega(k) - e
    }

    /// `Σ_0^(1,2)(E, k) = Σ_λ U_λ² (λ‖Y_λ‖0)² / (cλ(λ+1) + ω − E − ε_λ)`.
    pub fn sigma12(&self, e: f64, k: f64, model: &AngulonModel) -> Result<f64> {
        let mut s = 0.0;
        for lambda in 0..=self.lambda_max {
            let u = model.coupling(lambda, k);
            if u == 0.0 {
                continue;
            }
            let d = self.one_phonon_denominator(lambda, e, k, model) - self.epsilon(lambda, e, k, model)?;
            s += u * u * self.vacuum[lambda as usize] / check_pole(d, lambda, k, e)?;
        }
        Ok(s)
    }

    /// `Σ_0^(1)(E, k) = Σ_λ U_λ² (λ‖Y_λ‖0)² / (cλ(λ+1) + ω − E)`.
    pub fn sigma01(&self, e: f64, k: f64, model: &AngulonModel) -> Result<f64> {
        let mut s = 0.0;
        for lambda in 0..=self.lambda_max {
            let u = model.coupling(lambda, k);
            if u == 0.0 {
                continue;
            }
            let d = check_pole(self.one_phonon_denominator(lambda, e, k, model), lambda, k, e)?;
            s += u * u * self.vacuum[lambda as usize] / d;
        }
        Ok(s)
    }

    /// `Σ_0^(2)(E, k) = Σ_λ U_λ² ε_λ (λ‖Y_λ‖0)² / (d_λ (d_λ − ε_λ))`.
    pub fn sigma02(&self, e: f64, k: f64, model: &AngulonModel) -> Result<f64> {
        let mut s = 0.0;
        for lambda in 0..=self.lambda_max {
            let u = model.coupling(lambda, k);
            if u == 0.0 {
                continue;
            }
            let d = check_pole(self.one_phonon_denominator(lambda, e, k, model), lambda, k, e)?;
            let eps = self.epsilon(lambda, e, k, model)?;
            s += u * u * eps * self.vacuum[lambda as usize] / (d * check_pole(d - eps, lambda, k, e)?);
        }
        Ok(s)
    }

    /// `Σ_0^(1,2)` as principal-value terms, one per `λ`. With
    /// `with_epsilon = false` the two-phonon shift is dropped, which gives
    /// `Σ_0^(1)`.
    pub fn sigma12_terms<'a>(&'a self, e: f64, model: &'a AngulonModel, with_epsilon: bool) -> Vec<PvTerm<'a>> {
        (0..=self.lambda_max)
            .map(|lambda| {
                let y2 = self.vacuum[lambda as usize];
                PvTerm::new(
                    move |k| {
                        let u = model.coupling(lambda, k);
                        u * u * y2
                    },
                    move |k| {
                        let d = self.one_phonon_denominator(lambda, e, k, model);
                        if with_epsilon {
                            d - self.epsilon(lambda, e, k, model).unwrap_or(f64::NAN)
                        } else {
                            d
                        }
                    },
                )
            })
            .collect()
    }

    /// Lowest energy at which some `Σ_0^(1,2)` denominator at `k` vanishes:
    /// the bottom of `σ₁ ∪ σ₂ ∪ σ_*` restricted to coupled channels.
    pub fn pole_floor(&self, k: f64, model: &AngulonModel) -> f64 {
        let omega = model.omega(k);
        let mut floor = f64::INFINITY;
        for lambda in 0..=self.lambda_max {
            let u = model.coupling(lambda, k);
            if u == 0.0 {
                continue;
            }
            let d1 = model.c * f64::from(lambda * (lambda + 1)) + omega;
            let s2 = self.pairs[lambda as usize]
                .iter()
                .map(|&(big, _, _)| model.c * f64::from(big * (big + 1)) + 2.0 * omega)
                .fold(f64::INFINITY, f64::min);
            if !s2.is_finite() {
                floor = floor.min(d1);
                continue;
            }
            // d1 − E − ε(E) decreases from +∞ to −∞ on (−∞, s2).
            let h = |e: f64| d1 - e - self.epsilon(lambda, e, k, model).unwrap_or(f64::INFINITY);
            let mut hi = s2 - 1e-12 * (1.0 + s2.abs());
            let mut lo = d1.min(s2) - 1.0;
            while h(lo) <= 0.0 {
                lo -= 2.0 * (hi - lo);
            }
            if h(hi) > 0.0 {
                floor = floor.min(s2);
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if h(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            floor = floor.min(0.5 * (lo + hi));
        }
        floor
    }

    /// Relative amplitudes at `k` relative to `c_00 = 1`:
    /// `(λ, c_λ)` for the one-phonon channels and `(λ, Λ, c_Λ)` for the
    /// two-phonon channels.
    #[allow(clippy::type_complexity)]
    pub fn amplitudes(&self, e: f64, k: f64, model: &AngulonModel) -> Result<(Vec<(u32, f64)>, Vec<(u32, u32, f64)>)> {
        let omega = model.omega(k);
        let mut one = Vec::new();
        let mut two = Vec::new();
        for lambda in 0..=self.lambda_max {
            let u = model.coupling(lambda, k);
            let y0 = self.vacuum[lambda as usize].sqrt();
            let d = self.one_phonon_denominator(lambda, e, k, model) - self.epsilon(lambda, e, k, model)?;
            let c1 = phase(i64::from(lambda) + 1) * u * y0 / d;
            one.push((lambda, c1));
            for &(big, scfp, y2) in &self.pairs[lambda as usize] {
                let d2 = model.c * f64::from(big * (big + 1)) + 2.0 * omega - e;
                let y = reduced_y_f64(big, lambda, lambda);
                debug_assert!((y * y - y2).abs() < 1e-14);
                let c2 = phase(i64::from(lambda) + 1) * std::f64::consts::SQRT_2 * u * scfp * y
                    / (f64::from(2 * lambda + 1).sqrt() * d2)
                    * c1;
                two.push((lambda, big, c2));
            }
        }
        Ok((one, two))
    }
}

/// `ε_λ(E, k)` with the SCFPs taken from `table`.
pub fn epsilon_lambda(lambda: u32, e: f64, k: f64, model: &AngulonModel, table: &ScfpTable) -> Result<f64> {
    TwoPhononKernel::new(lambda.max(model.lambda_max()), table)?.epsilon(lambda, e, k, model)
}
