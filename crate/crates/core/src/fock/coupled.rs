use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::{inner, FockSpace, FockVector, Mode, OccBasisVector};
use crate::error::Result;
use crate::wigner::{self, triangle};

/// Post-projection norm below which a Gram–Schmidt candidate is discarded.
pub const NULL_THRESHOLD: f64 = 1e-10;

/// One vector `v_{λⁿΛM}` of the coupled basis, multiplicity index included.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledVector {
    pub lambda: u32,
    pub n: usize,
    pub big_lambda: u32,
    pub m: i32,
    pub mult: usize,
    pub vector: FockVector,
}

/// A `(2Λ+1)`-dimensional multiplet of the coupled basis.
#[derive(Clone, Debug)]
pub struct CoupledFamily {
    pub big_lambda: u32,
    pub mult: usize,
    /// Components indexed by `M + Λ`.
    pub components: Vec<FockVector>,
    /// Gram–Schmidt coefficients on the parent candidates, keyed by parent
    /// family index.
    pub combination: Vec<(usize, f64)>,
}

impl CoupledFamily {
    pub fn component(&self, m: i32) -> &FockVector {
        &self.components[(m + self.big_lambda as i32) as usize]
    }
}

/// Orthonormal basis of `Sym^n[λ]` adapted to the total projection.
///
/// Built by induction on `n`: each parent multiplet of `Sym^{n−1}[λ]` is
/// coupled with one more `λ` boson to total `Λ`, the resulting candidates are
/// orthonormalized at `M = Λ` in parent order (ascending `Λ′`, then
/// multiplicity), and the same combination is applied at every other `M`.
/// The candidate Gram matrix does not depend on `M`, so every family is a
/// proper multiplet.
#[derive(Debug)]
pub struct CoupledBasis {
    pub lambda: u32,
    pub n: usize,
    /// Sorted by `(Λ, mult)`.
    pub families: Vec<CoupledFamily>,
    pub parent: Option<Arc<CoupledBasis>>,
}

type CacheKey = (u32, usize);

static CACHE: Lazy<RwLock<HashMap<CacheKey, Arc<CoupledBasis>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

impl CoupledBasis {
    /// Builds (or fetches) the coupled basis of `Sym^n[λ]`.
    pub fn build(space: &FockSpace, lambda: u32, n: usize) -> Result<Arc<CoupledBasis>> {
        space.check_dimension(lambda, n)?;
        if let Some(b) = CACHE.read().get(&(lambda, n)) {
            return Ok(Arc::clone(b));
        }
        let basis = if n == 0 {
            CoupledBasis {
                lambda,
                n,
                families: vec![CoupledFamily {
                    big_lambda: 0,
                    mult: 0,
                    components: vec![FockVector::vacuum()],
                    combination: Vec::new(),
                }],
                parent: None,
            }
        } else {
            let parent = Self::build(space, lambda, n - 1)?;
            Self::extend(parent)
        };
        let basis = Arc::new(basis);
        Ok(Arc::clone(
            CACHE.write().entry((lambda, n)).or_insert(basis),
        ))
    }

    fn extend(parent: Arc<CoupledBasis>) -> CoupledBasis {
        let lambda = parent.lambda;
        let n = parent.n + 1;
        let mut families = Vec::new();
        for big_lambda in 0..=(n as u32 * lambda) {
            let cands: Vec<usize> = parent
                .families
                .iter()
                .enumerate()
                .filter(|(_, f)| triangle(f.big_lambda, lambda, big_lambda))
                .map(|(i, _)| i)
                .collect();
            let top = big_lambda as i32;
            let cand_vectors: Vec<FockVector> = cands
                .iter()
                .map(|&i| couple_with_mode(&parent.families[i], lambda, big_lambda, top))
                .collect();

            let mut accepted: Vec<(FockVector, Vec<f64>)> = Vec::new();
            for (ci, cand) in cand_vectors.iter().enumerate() {
                let mut v = cand.clone();
                let mut coef = vec![0.0; cands.len()];
                coef[ci] = 1.0;
                for (u, ucoef) in &accepted {
                    let p = inner(u, &v).re;
                    v.axpy(Complex64::new(-p, 0.0), u);
                    for (c, uc) in coef.iter_mut().zip(ucoef) {
                        *c -= p * uc;
                    }
                }
                let norm = v.norm_sqr().sqrt();
                if norm < NULL_THRESHOLD {
                    continue;
                }
                let v = &v * (1.0 / norm);
                coef.iter_mut().for_each(|c| *c /= norm);
                accepted.push((v, coef));
            }

            for (mult, (_, coef)) in accepted.into_iter().enumerate() {
                let combination: Vec<(usize, f64)> = cands
                    .iter()
                    .zip(&coef)
                    .filter(|(_, c)| c.abs() > 0.0)
                    .map(|(&i, &c)| (i, c))
                    .collect();
                let components = (-top..=top)
                    .map(|m| {
                        let mut out = FockVector::zero();
                        for &(i, c) in &combination {
                            let cand = couple_with_mode(&parent.families[i], lambda, big_lambda, m);
                            out.axpy(Complex64::new(c, 0.0), &cand);
                        }
                        out
                    })
                    .collect();
                families.push(CoupledFamily {
                    big_lambda,
                    mult,
                    components,
                    combination,
                });
            }
        }
        CoupledBasis {
            lambda,
            n,
            families,
            parent: Some(parent),
        }
    }

    pub fn family(&self, big_lambda: u32, mult: usize) -> Option<&CoupledFamily> {
        self.families
            .iter()
            .find(|f| f.big_lambda == big_lambda && f.mult == mult)
    }

    pub fn family_index(&self, big_lambda: u32, mult: usize) -> Option<usize> {
        self.families
            .iter()
            .position(|f| f.big_lambda == big_lambda && f.mult == mult)
    }

    pub fn multiplicity(&self, big_lambda: u32) -> usize {
        self.families.iter().filter(|f| f.big_lambda == big_lambda).count()
    }

    pub fn dimension(&self) -> usize {
        self.families.iter().map(|f| f.components.len()).sum()
    }

    pub fn vectors(&self) -> Vec<CoupledVector> {
        self.families
            .iter()
            .flat_map(|f| {
                let top = f.big_lambda as i32;
                (-top..=top).map(move |m| CoupledVector {
                    lambda: self.lambda,
                    n: self.n,
                    big_lambda: f.big_lambda,
                    m,
                    mult: f.mult,
                    vector: f.component(m).clone(),
                })
            })
            .collect()
    }

    /// `c_ρ(λⁿγ) = ⟨v_γ, ê_ρ⟩` for an ordered sequence `ρ`.
    pub fn coefficient(&self, family: &CoupledFamily, m: i32, rho: &[i32]) -> Complex64 {
        if rho.iter().sum::<i32>() != m || m.unsigned_abs() > family.big_lambda {
            return Complex64::default();
        }
        let occ = OccBasisVector::from_modes(rho.iter().map(|&r| Mode::new(self.lambda, r)).collect());
        family.component(m).amplitude(&occ).conj() * occ.weight()
    }
}

/// `{v_{λ^{n−1}Λ′} ⊗̂ e_λ}_{ΛM}`: the parent multiplet coupled with one more
/// `λ` boson to total `(Λ, M)`.
pub fn couple_with_mode(parent: &CoupledFamily, lambda: u32, big_lambda: u32, m: i32) -> FockVector {
    let mut out = FockVector::zero();
    let lp = parent.big_lambda as i32;
    for mp in -lp..=lp {
        let rho = m - mp;
        if rho.unsigned_abs() > lambda {
            continue;
        }
        let cg = wigner::cg(parent.big_lambda, lambda, big_lambda, mp, rho, m);
        if cg == 0.0 {
            continue;
        }
        let mode = Mode::new(lambda, rho);
        for (occ, amp) in parent.component(mp).terms() {
            out.add_term(occ.with(mode), amp * cg);
        }
    }
    out
}

/// `dim Sym^n` of a `(2λ+1)`-dimensional space.
pub fn sym_power_dimension(lambda: u32, n: usize) -> usize {
    let d = 2 * lambda as usize + 1;
    // C(d+n−1, n), computed incrementally to stay exact.
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * (d + i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Number of multisets of size `n` over `{−λ..λ}` with sum `m`.
fn projection_count(lambda: u32, n: usize, m: i64) -> u64 {
    let top = 2 * i64::from(lambda);
    let target = m + n as i64 * i64::from(lambda);
    if target < 0 || target > n as i64 * top {
        return 0;
    }
    let target = target as usize;
    // ways[j][s]: multisets of size j with shifted sum s using values seen so far
    let mut ways = vec![vec![0u64; target + 1]; n + 1];
    ways[0][0] = 1;
    for v in 0..=top as usize {
        for j in 1..=n {
            for s in v..=target {
                ways[j][s] += ways[j - 1][s - v];
            }
        }
    }
    ways[n][target]
}

/// How many times `[Λ]` occurs in `Sym^n[λ]`.
pub fn sym_power_multiplicity(lambda: u32, n: usize, big_lambda: u32) -> usize {
    let a = projection_count(lambda, n, i64::from(big_lambda));
    let b = projection_count(lambda, n, i64::from(big_lambda) + 1);
    (a - b) as usize
}

/// Key of [`coeff_table`]: ordered projections and the coupled label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffKey {
    pub rho: Vec<i32>,
    pub big_lambda: u32,
    pub m: i32,
    pub mult: usize,
}

/// All coefficients `c_ρ(λⁿΛM)` with `Σρ = M`.
pub fn coeff_table(basis: &CoupledBasis) -> BTreeMap<CoeffKey, Complex64> {
    let lambda = basis.lambda as i32;
    let mut out = BTreeMap::new();
    for rho in sequences(lambda, basis.n) {
        let m: i32 = rho.iter().sum();
        for f in &basis.families {
            if m.unsigned_abs() > f.big_lambda {
                continue;
            }
            let c = basis.coefficient(f, m, &rho);
            out.insert(
                CoeffKey {
                    rho: rho.clone(),
                    big_lambda: f.big_lambda,
                    m,
                    mult: f.mult,
                },
                c,
            );
        }
    }
    out
}

/// Every ordered sequence in `{−λ..λ}^n`.
pub(crate) fn sequences(lambda: i32, n: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                (-lambda..=lambda).map(move |r| {
                    let mut t = s.clone();
                    t.push(r);
                    t
                })
            })
            .collect();
    }
    out
}
