//! Direct action of the angulon operator on rotor ⊗ Fock states at one k.
//!
//! This is a brute-force reference: states are explicit sums of `|J M⟩ ⊗ v`,
//! and the interaction is applied term by term with spherical-harmonic matrix
//! elements and the Fock creation/annihilation operators.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{inner, CoupledFamily, FockSpace, FockVector, Mode};
use crate::wigner;

/// `⟨J′ M′| Y_{λρ} |J M⟩` for the linear rotor.
pub fn y_matrix_element(jp: u32, mp: i32, lambda: u32, rho: i32, j: u32, m: i32) -> f64 {
    if m + rho != mp || mp.unsigned_abs() > jp {
        return 0.0;
    }
    let red = wigner::reduced_y_f64(jp, lambda, j);
    if red == 0.0 {
        return 0.0;
    }
    red * wigner::cg(j, lambda, jp, m, rho, mp) / f64::from(2 * jp + 1).sqrt()
}

/// Sum of `|J M⟩ ⊗ v_{JM}` over rotor states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProductVector {
    terms: BTreeMap<(u32, i32), FockVector>,
}

impl ProductVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, j: u32, m: i32, coeff: Complex64, v: &FockVector) {
        self.terms.entry((j, m)).or_default().axpy(coeff, v);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i32), &FockVector)> {
        self.terms.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(FockVector::norm_sqr).sum()
    }
}

pub fn product_inner(u: &ProductVector, v: &ProductVector) -> Complex64 {
    u.terms
        .iter()
        .filter_map(|(k, a)| v.terms.get(k).map(|b| inner(a, b)))
        .sum()
}

/// `|L M_L⟩ ⊗ 𝟙`.
pub fn vacuum_state(l: u32, m_l: i32) -> ProductVector {
    let mut out = ProductVector::zero();
    out.add(l, m_l, Complex64::new(1.0, 0.0), &FockVector::vacuum());
    out
}

/// `Σ_M ⟨J M; Λ M_Λ | L M_L⟩ |J M⟩ ⊗ v_{Γ M_Λ}`.
pub fn coupled_state(j: u32, family: &CoupledFamily, l: u32, m_l: i32) -> ProductVector {
    let big = family.big_lambda;
    let mut out = ProductVector::zero();
    for m in -(j as i32)..=(j as i32) {
        let mb = m_l - m;
        if mb.unsigned_abs() > big {
            continue;
        }
        let cg = wigner::cg(j, big, l, m, mb, m_l);
        if cg != 0.0 {
            out.add(j, m, Complex64::new(cg, 0.0), family.component(mb));
        }
    }
    out
}

/// The angulon operator at fixed k with explicit parameters.
#[derive(Clone, Debug)]
pub struct DirectOperator {
    pub c: f64,
    pub omega: f64,
    /// `U_λ(k)` for `λ = 0, 1, …`.
    pub couplings: Vec<f64>,
    pub space: FockSpace,
}

impl DirectOperator {
    /// `c J² + ω N + W` with
    /// `W = Σ_λ U_λ Σ_ρ [(−1)^ρ Y_{λ,−ρ} ⊗ b_{λρ} + Y_{λρ} ⊗ b*_{λρ}]`.
    pub fn apply(&self, psi: &ProductVector) -> ProductVector {
        let mut out = ProductVector::zero();
        for (&(j, m), v) in psi.terms() {
            let kinetic = self.c * f64::from(j * (j + 1));
            out.add(j, m, Complex64::new(kinetic, 0.0), v);
            out.add(j, m, Complex64::new(self.omega, 0.0), &self.space.number(v));
            for (lambda, &u) in self.couplings.iter().enumerate() {
                if u == 0.0 {
                    continue;
                }
                let lambda = lambda as u32;
                for rho in -(lambda as i32)..=(lambda as i32) {
                    let mode = Mode::new(lambda, rho);
                    let created = self.space.create(mode, v);
                    let annihilated = self.space.annihilate(mode, v);
                    for jp in j.abs_diff(lambda)..=j + lambda {
                        let sign = wigner::phase(i64::from(rho));
                        let yc = y_matrix_element(jp, m - rho, lambda, -rho, j, m);
                        if yc != 0.0 && !created.is_zero() {
                            out.add(jp, m - rho, Complex64::new(sign * u * yc, 0.0), &created);
                        }
                        let ya = y_matrix_element(jp, m + rho, lambda, rho, j, m);
                        if ya != 0.0 && !annihilated.is_zero() {
                            out.add(jp, m + rho, Complex64::new(u * ya, 0.0), &annihilated);
                        }
                    }
                }
            }
        }
        out
    }

    /// `⟨a, A b⟩`.
    pub fn matrix_element(&self, a: &ProductVector, b: &ProductVector) -> Complex64 {
        product_inner(a, &self.apply(b))
    }
}
