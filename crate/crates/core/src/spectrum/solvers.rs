//! Block eigensolves and the scalar fixed-point closures.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DVector, SymmetricEigen};

use super::pv::{pv_integrate, PoleReport, PvTerm};
use super::selfenergy::{n1_amplitudes, sigma1_terms, TwoPhononKernel};
use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_block_with, tables_for, tau, u_lambda_l, BlockMatrix, ChannelLabel, Truncation};
use crate::model::{AngulonModel, KGrid, MeasureConfig};
use crate::scfp::ScfpTable;
use crate::wigner::phase;

/// Scan step, in units of `c`.
pub const SCAN_STEP: f64 = 0.05;
/// Lowest energy scanned, in units of `c`.
pub const SCAN_FLOOR: f64 = -50.0;
/// Distance kept from fixed-`k` poles, in units of `c`.
pub const POLE_MARGIN: f64 = 1e-6;
/// Required `|g(ℰ)|` at an accepted root.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Anything that carries a wavenumber grid. Solvers read only the grid, never
/// the weights of a [`MeasureConfig`].
pub trait GridSource {
    fn grid(&self) -> &KGrid;
}

impl GridSource for KGrid {
    fn grid(&self) -> &KGrid {
        self
    }
}

impl GridSource for MeasureConfig {
    fn grid(&self) -> &KGrid {
        &self.grid
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSolution {
    pub l: u32,
    pub k: f64,
    pub energy: f64,
    /// Unit-norm amplitudes in channel order.
    pub coordinates: Vec<(ChannelLabel, f64)>,
    /// Largest row residual of the eigen-system.
    pub residual: f64,
}

impl EigenSolution {
    pub fn amplitude(&self, label: &ChannelLabel) -> Option<f64> {
        self.coordinates.iter().find(|(c, _)| c == label).map(|(_, v)| *v)
    }
}

/// Row-by-row residual of the eigen-system: the vacuum row
/// `(cL(L+1) − E) c_L + Σ (−1)^λ √(2λ+1) U_{λL}(L0Jλ) c_{Jλ¹λ}` and, for each
/// excited row, the kinetic term, the `τ` term to `n+1`, the `υ` term to
/// `n−1` (present only for `n ≥ 2`) and the vacuum term for `n = 1`.
pub fn closure_residual(
    block: &BlockMatrix,
    model: &AngulonModel,
    tables: &HashMap<u32, Arc<ScfpTable>>,
    energy: f64,
    psi: &[f64],
) -> Result<f64> {
    let l = block.l;
    let k = block.k;
    let omega = model.omega(k);
    let c = model.c;
    let mut worst = 0.0f64;
    for (i, row) in block.channels.iter().enumerate() {
        let mut r;
        if row.is_vacuum() {
            r = (c * f64::from(l * (l + 1)) - energy) * psi[i];
            for (j, col) in block.channels.iter().enumerate() {
                if col.n == 1 && col.big_lambda == col.lambda {
                    let u = model.coupling(col.lambda, k);
                    r += phase(i64::from(col.lambda))
                        * f64::from(2 * col.lambda + 1).sqrt()
                        * u_lambda_l(col.lambda, l, l, 0, col.j, col.lambda, u)
                        * psi[j];
                }
            }
        } else {
            let lambda = row.lambda;
            let u = model.coupling(lambda, k);
            r = (c * f64::from(row.j * (row.j + 1)) + row.n as f64 * omega - energy) * psi[i];
            for (j, col) in block.channels.iter().enumerate() {
                if col.is_vacuum() {
                    if row.n == 1 && row.big_lambda == lambda {
                        r += phase(i64::from(lambda))
                            * f64::from(2 * lambda + 1).sqrt()
                            * u_lambda_l(lambda, l, row.j, lambda, l, 0, u)
                            * psi[j];
                    }
                    continue;
                }
                if col.lambda != lambda {
                    continue;
                }
                let coupling = u_lambda_l(lambda, l, row.j, row.big_lambda, col.j, col.big_lambda, u);
                if coupling == 0.0 {
                    continue;
                }
                let (rl, cl) = ((row.big_lambda, row.mult), (col.big_lambda, col.mult));
                if col.n == row.n + 1 {
                    let table = table_for(tables, lambda)?;
                    r += coupling * tau(lambda, row.n, cl, rl, table)? * psi[j];
                } else if row.n >= 2 && col.n + 1 == row.n {
                    let table = table_for(tables, lambda)?;
                    r += coupling * tau(lambda, col.n, rl, cl, table)? * psi[j];
                }
            }
        }
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

fn table_for(tables: &HashMap<u32, Arc<ScfpTable>>, lambda: u32) -> Result<&ScfpTable> {
    tables
        .get(&lambda)
        .map(|t| &**t)
        .ok_or_else(|| Error::MissingEntry(format!("no SCFP table for lambda = {lambda}")))
}

/// Dense eigensolve of the `(L, k)` block; eigenvalues ascending, each
/// eigenvector normalized with a nonnegative vacuum amplitude.
pub fn solve_block(l: u32, k: f64, model: &AngulonModel, trunc: &Truncation) -> Result<Vec<EigenSolution>> {
    let tables = tables_for(trunc)?;
    let block = assemble_block_with(l, k, model, trunc, &tables)?;
    let eig = SymmetricEigen::try_new(block.entries.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Eigen(format!("no convergence for L={l}, k={k}")))?;
    let mut order: Vec<usize> = (0..block.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut out = Vec::with_capacity(order.len());
    for idx in order {
        let energy = eig.eigenvalues[idx];
        let mut v: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
        v /= v.norm();
        if v[0] < 0.0 {
            v = -v;
        }
        let psi: Vec<f64> = v.iter().copied().collect();
        let residual = closure_residual(&block, model, &tables, energy, &psi)?;
        out.push(EigenSolution {
            l,
            k,
            energy,
            coordinates: block.channels.iter().copied().zip(psi).collect(),
            residual,
        });
    }
    Ok(out)
}

/// Eigenvalues of a block, ascending.
pub fn block_spectrum(block: &BlockMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(block.entries.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Amplitudes at one grid point relative to a unit vacuum amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct KCoordinates {
    pub k: f64,
    pub amplitudes: Vec<(ChannelLabel, f64)>,
}

impl KCoordinates {
    /// Vacuum first, scaled to unit norm.
    pub fn normalized(&self, l: u32) -> Vec<(ChannelLabel, f64)> {
        let norm = (1.0 + self.amplitudes.iter().map(|(_, a)| a * a).sum::<f64>()).sqrt();
        std::iter::once((ChannelLabel::vacuum(l), 1.0 / norm))
            .chain(self.amplitudes.iter().map(|&(c, a)| (c, a / norm)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSolution {
    pub l: u32,
    pub energy: f64,
    /// `|g(ℰ)|` of the scalar equation.
    pub residual: f64,
    /// Poles excluded by the principal value at `ℰ`.
    pub poles: Vec<PoleReport>,
    /// True when the closure returned its upper bound (`cL(L+1)` or 0)
    /// because the self-energy was not positive there.
    pub at_bound: bool,
    pub coordinates: Vec<KCoordinates>,
}

struct Root {
    energy: f64,
    residual: f64,
}

/// Downward scan from `start` in steps of [`SCAN_STEP`] until `g` changes
/// sign, then bisection with a final secant polish. Sign changes caused by
/// poles are recognized by a large `|g|` after refinement and skipped.
fn find_root<G: FnMut(f64) -> Result<f64>>(mut g: G, start: f64, c: f64) -> Result<Root> {
    let step = SCAN_STEP * c;
    let floor = SCAN_FLOOR * c;
    let mut hi = start;
    let mut g_hi = g(hi)?;
    if g_hi == 0.0 {
        return Ok(Root {
            energy: hi,
            residual: 0.0,
        });
    }
    while hi > floor {
        let lo = (hi - step).max(floor);
        let g_lo = g(lo)?;
        if g_lo == 0.0 {
            return Ok(Root {
                energy: lo,
                residual: 0.0,
            });
        }
        if g_lo.signum() != g_hi.signum() {
            let root = refine(&mut g, lo, g_lo, hi, g_hi)?;
            if root.residual < RESIDUAL_TOL {
                return Ok(root);
            }
        }
        hi = lo;
        g_hi = g_lo;
        if lo == floor {
            break;
        }
    }
    Err(Error::NoBracket { start, floor })
}

fn refine<G: FnMut(f64) -> Result<f64>>(g: &mut G, mut lo: f64, mut g_lo: f64, mut hi: f64, mut g_hi: f64) -> Result<Root> {
    for _ in 0..200 {
        let tol = 1e-12 * (1.0 + 0.5 * (lo + hi).abs());
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(Root {
                energy: mid,
                residual: 0.0,
            });
        }
        if gm.signum() == g_lo.signum() {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
            g_hi = gm;
        }
    }
    let secant = lo - g_lo * (hi - lo) / (g_hi - g_lo);
    let mut best = if g_lo.abs() < g_hi.abs() { (lo, g_lo) } else { (hi, g_hi) };
    if secant > lo && secant < hi {
        let gs = g(secant)?;
        if gs.abs() < best.1.abs() {
            best = (secant, gs);
        }
    }
    Ok(Root {
        energy: best.0,
        residual: best.1.abs(),
    })
}

fn couplings_vanish(model: &AngulonModel, grid: &KGrid) -> bool {
    grid.points()
        .iter()
        .all(|&k| (0..=model.lambda_max()).all(|l| model.coupling(l, k) == 0.0))
}

/// `N = 1` closure: `ℰ = cL(L+1) − pv∫ Σ_L^(1)(ℰ, k) dk`, with
/// `ℰ = cL(L+1)` when the self-energy there is not positive.
pub fn solve_n1<G: GridSource + ?Sized>(l: u32, model: &AngulonModel, source: &G) -> Result<FixedPointSolution> {
    let grid = source.grid();
    model.audit(grid)?;
    let e0 = model.c * f64::from(l * (l + 1));
    let integral = |e: f64| -> Result<(f64, Vec<PoleReport>)> {
        let terms = sigma1_terms(l, e, model);
        let r = pv_integrate(&terms, grid)?;
        Ok((r.value, r.poles))
    };
    let (energy, residual, at_bound) = if couplings_vanish(model, grid) {
        (e0, 0.0, true)
    } else {
        let mut start = e0;
        if grid.is_point_mass() {
            let k = grid.kmin();
            let floor = sigma1_terms(l, 0.0, model)
                .iter()
                .filter(|t| (t.numerator)(k) != 0.0)
                .map(|t| (t.denominator)(k))
                .fold(f64::INFINITY, f64::min);
            start = start.min(floor - POLE_MARGIN * model.c);
        }
        let (s0, _) = integral(start)?;
        if start == e0 && s0 <= 0.0 {
            (e0, 0.0, true)
        } else {
            let root = find_root(|e| Ok(e - e0 + integral(e)?.0), start, model.c)?;
            (root.energy, root.residual, false)
        }
    };
    let poles = integral(energy).map(|(_, p)| p).unwrap_or_default();
    let coordinates = grid
        .points()
        .iter()
        .map(|&k| KCoordinates {
            k,
            amplitudes: n1_amplitudes(l, energy, k, model)
                .into_iter()
                .map(|(j, lambda, a)| (ChannelLabel::excited(j, lambda, 1, lambda, 0), a))
                .collect(),
        })
        .collect();
    Ok(FixedPointSolution {
        l,
        energy,
        residual,
        poles,
        at_bound,
        coordinates,
    })
}

/// `N = 2`, `L = 0` closure: `ℰ = −pv∫ Σ_0^(1,2)(ℰ, k) dk`, with `ℰ = 0`
/// when the self-energy at 0 is not positive. With `with_epsilon = false`
/// the two-phonon shift is dropped.
pub fn solve_n2_l0<G: GridSource + ?Sized>(
    model: &AngulonModel,
    source: &G,
    kernel: &TwoPhononKernel,
    with_epsilon: bool,
) -> Result<FixedPointSolution> {
    let grid = source.grid();
    model.audit(grid)?;
    let integral = |e: f64| -> Result<(f64, Vec<PoleReport>)> {
        let terms: Vec<PvTerm<'_>> = kernel.sigma12_terms(e, model, with_epsilon);
        let r = pv_integrate(&terms, grid)?;
        Ok((r.value, r.poles))
    };
    let (energy, residual, at_bound) = if couplings_vanish(model, grid) {
        (0.0, 0.0, true)
    } else {
        let mut start = 0.0;
        if grid.is_point_mass() {
            let k = grid.kmin();
            let floor = if with_epsilon {
                kernel.pole_floor(k, model)
            } else {
                (0..=kernel.lambda_max)
                    .filter(|&lam| model.coupling(lam, k) != 0.0)
                    .map(|lam| model.c * f64::from(lam * (lam + 1)) + model.omega(k))
                    .fold(f64::INFINITY, f64::min)
            };
            start = f64::min(start, floor - POLE_MARGIN * model.c);
        }
        let (s0, _) = integral(start)?;
        if start == 0.0 && s0 <= 0.0 {
            (0.0, 0.0, true)
        } else {
            let root = find_root(|e| Ok(e + integral(e)?.0), start, model.c)?;
            (root.energy, root.residual, false)
        }
    };
    let poles = integral(energy).map(|(_, p)| p).unwrap_or_default();
    let mut coordinates = Vec::with_capacity(grid.len());
    for &k in grid.points() {
        let (one, two) = kernel.amplitudes(energy, k, model)?;
        let mut amplitudes: Vec<(ChannelLabel, f64)> = one
            .into_iter()
            .map(|(lambda, a)| (ChannelLabel::excited(lambda, lambda, 1, lambda, 0), a))
            .collect();
        amplitudes.extend(
            two.into_iter()
                .map(|(lambda, big, a)| (ChannelLabel::excited(big, lambda, 2, big, 0), a)),
        );
        coordinates.push(KCoordinates { k, amplitudes });
    }
    Ok(FixedPointSolution {
        l: 0,
        energy,
        residual,
        poles,
        at_bound,
        coordinates,
    })
}

/// Largest channelwise deviation between closed-form coordinates and a
/// block eigenvector, both normalized with a positive vacuum amplitude.
/// Channels missing from the closed form count as zero.
pub fn coordinate_deviation(closed: &[(ChannelLabel, f64)], eigen: &EigenSolution) -> f64 {
    let lookup: HashMap<ChannelLabel, f64> = closed.iter().copied().collect();
    eigen
        .coordinates
        .iter()
        .map(|(c, v)| (lookup.get(c).copied().unwrap_or(0.0) - v).abs())
        .fold(0.0, f64::max)
}
