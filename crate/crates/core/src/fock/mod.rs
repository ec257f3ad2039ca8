//! Symmetric-tensor Fock space at a single wavenumber.
//!
//! A [`FockVector`] stores amplitudes on the symmetrized products `ê_m`, one
//! per multiset `m` of modes. These products are not normalized:
//! `⟨ê_m, ê_m⟩ = Π mult! / n!`, which is the normalized permanent of the mode
//! overlap matrix. With this convention the creation operator is simply
//! `ê_m ↦ √(n+1) ê_{m+ι}`.

mod coupled;
pub mod rotor;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub use coupled::{
    coeff_table, couple_with_mode, sym_power_dimension, sym_power_multiplicity, CoeffKey, CoupledBasis,
    CoupledFamily, CoupledVector,
};

use crate::error::{Error, Result};

/// Single-phonon mode `(λ, ρ)`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub lambda: u32,
    pub rho: i32,
}

impl Mode {
    pub fn new(lambda: u32, rho: i32) -> Self {
        assert!(rho.unsigned_abs() <= lambda, "|rho| must not exceed lambda");
        Self { lambda, rho }
    }

    /// All modes with `λ ≤ lambda_max`.
    pub fn all(lambda_max: u32) -> Vec<Mode> {
        (0..=lambda_max)
            .flat_map(|l| (-(l as i32)..=l as i32).map(move |r| Mode::new(l, r)))
            .collect()
    }
}

/// Sorted multiset of modes labelling `ê_m`; the empty multiset is the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccBasisVector(Vec<Mode>);

impl OccBasisVector {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn from_modes(mut modes: Vec<Mode>) -> Self {
        modes.sort_unstable();
        Self(modes)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, mode: Mode) -> usize {
        self.0.iter().filter(|&&m| m == mode).count()
    }

    pub fn with(&self, mode: Mode) -> Self {
        let pos = self.0.partition_point(|&m| m <= mode);
        let mut modes = self.0.clone();
        modes.insert(pos, mode);
        Self(modes)
    }

    pub fn without(&self, mode: Mode) -> Option<Self> {
        let pos = self.0.iter().position(|&m| m == mode)?;
        let mut modes = self.0.clone();
        modes.remove(pos);
        Some(Self(modes))
    }

    /// Symmetric product of two multisets.
    pub fn join(&self, other: &Self) -> Self {
        let mut modes = self.0.clone();
        modes.extend_from_slice(&other.0);
        Self::from_modes(modes)
    }

    /// Total projection `Σ ρ`.
    pub fn total_rho(&self) -> i32 {
        self.0.iter().map(|m| m.rho).sum()
    }

    /// Gram weight `⟨ê_m, ê_m⟩ = Π mult! / n!`.
    pub fn weight(&self) -> f64 {
        let mut w = 1.0;
        let mut run = 0usize;
        for (i, m) in self.0.iter().enumerate() {
            run = if i > 0 && self.0[i - 1] == *m { run + 1 } else { 1 };
            w *= run as f64;
            w /= (i + 1) as f64;
        }
        w
    }
}

/// Finitely supported vector in the truncated Fock space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockVector {
    terms: BTreeMap<OccBasisVector, Complex64>,
    truncated: bool,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(OccBasisVector::vacuum())
    }

    pub fn basis(occ: OccBasisVector) -> Self {
        let mut v = Self::zero();
        v.terms.insert(occ, Complex64::new(1.0, 0.0));
        v
    }

    pub fn from_modes(modes: &[Mode]) -> Self {
        Self::basis(OccBasisVector::from_modes(modes.to_vec()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccBasisVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &OccBasisVector) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or_default()
    }

    /// Whether an operator dropped components above the particle limit.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|a| a.norm() == 0.0)
    }

    pub fn add_term(&mut self, occ: OccBasisVector, amp: Complex64) {
        if amp == Complex64::default() {
            return;
        }
        *self.terms.entry(occ).or_default() += amp;
    }

    pub fn axpy(&mut self, a: Complex64, other: &FockVector) {
        for (occ, amp) in &other.terms {
            self.add_term(occ.clone(), a * amp);
        }
        self.truncated |= other.truncated;
    }

    pub fn scale(&self, a: Complex64) -> FockVector {
        FockVector {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), a * v)).collect(),
            truncated: self.truncated,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(k, v)| v.norm_sqr() * k.weight()).sum()
    }

    pub fn max_particles(&self) -> usize {
        self.terms.keys().map(OccBasisVector::len).max().unwrap_or(0)
    }

    /// Largest imaginary part among the amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|a| a.im.abs()).fold(0.0, f64::max)
    }
}

impl Add for &FockVector {
    type Output = FockVector;

    fn add(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), rhs);
        out
    }
}

impl Sub for &FockVector {
    type Output = FockVector;

    fn sub(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), rhs);
        out
    }
}

impl Mul<f64> for &FockVector {
    type Output = FockVector;

    fn mul(self, rhs: f64) -> FockVector {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// Scalar product, antilinear in the first argument.
pub fn inner(u: &FockVector, v: &FockVector) -> Complex64 {
    let (small, large, flip) = if u.terms.len() <= v.terms.len() {
        (u, v, false)
    } else {
        (v, u, true)
    };
    let mut acc = Complex64::default();
    for (occ, a) in &small.terms {
        if let Some(b) = large.terms.get(occ) {
            let w = occ.weight();
            acc += if flip { b.conj() * a * w } else { a.conj() * b * w };
        }
    }
    acc
}

/// Particle-number limit and dimension cap for the truncated space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    pub n_max: usize,
    pub max_dim: usize,
}

impl Default for FockSpace {
    fn default() -> Self {
        Self {
            n_max: 3,
            max_dim: 20_000,
        }
    }
}

impl FockSpace {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            ..Self::default()
        }
    }

    /// `b_ι`: `ê_m ↦ √(n+1) ê_{m+ι}`, dropping (and flagging) anything that
    /// would exceed `n_max` particles.
    pub fn create(&self, mode: Mode, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        out.truncated = v.truncated;
        for (occ, amp) in &v.terms {
            let n = occ.len();
            if n + 1 > self.n_max {
                out.truncated = true;
                continue;
            }
            out.add_term(occ.with(mode), amp * ((n + 1) as f64).sqrt());
        }
        out
    }

    /// `b_ι*`, the adjoint of [`FockSpace::create`]: `ê_m ↦ (k/√n) ê_{m−ι}`
    /// where `k` is the multiplicity of `ι` in `m`.
    pub fn annihilate(&self, mode: Mode, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        out.truncated = v.truncated;
        for (occ, amp) in &v.terms {
            let k = occ.count(mode);
            if k == 0 {
                continue;
            }
            let n = occ.len() as f64;
            let rest = occ.without(mode).expect("mode present");
            out.add_term(rest, amp * (k as f64 / n.sqrt()));
        }
        out
    }

    pub fn number(&self, v: &FockVector) -> FockVector {
        FockVector {
            terms: v
                .terms
                .iter()
                .filter(|(k, _)| !k.is_empty())
                .map(|(k, a)| (k.clone(), a * k.len() as f64))
                .collect(),
            truncated: v.truncated,
        }
    }

    /// Every multiset basis vector over `modes` with at most `n_max` particles.
    pub fn basis_states(&self, modes: &[Mode]) -> Vec<OccBasisVector> {
        let mut out = vec![OccBasisVector::vacuum()];
        let mut layer = vec![(OccBasisVector::vacuum(), 0usize)];
        for _ in 0..self.n_max {
            let mut next = Vec::new();
            for (occ, start) in &layer {
                for (i, &m) in modes.iter().enumerate().skip(*start) {
                    next.push((occ.with(m), i));
                }
            }
            out.extend(next.iter().map(|(o, _)| o.clone()));
            layer = next;
        }
        out
    }

    /// Dimension check for `Sym^n` of the `(2λ+1)`-dimensional mode space.
    pub fn check_dimension(&self, lambda: u32, n: usize) -> Result<usize> {
        let dim = sym_power_dimension(lambda, n);
        if dim > self.max_dim || n > self.n_max {
            return Err(Error::DimensionOverflow {
                lambda,
                n,
                dim,
                limit: self.max_dim,
            });
        }
        Ok(dim)
    }

    /// Orthonormal coupled basis of `Sym^n[λ]`; see [`CoupledBasis::build`].
    pub fn couple_basis(&self, lambda: u32, n: usize) -> Result<Vec<CoupledVector>> {
        Ok(CoupledBasis::build(self, lambda, n)?.vectors())
    }
}
