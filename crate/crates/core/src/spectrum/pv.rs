//! Principal-value quadrature over a wavenumber grid.
//!
//! Each integrand is a sum of terms `n(k)/d(k)`. Zeros of a denominator are
//! located by sign changes between grid points and refined by bisection. Around
//! a pole `k*` the integral over the window `(k*−Δ, k*+Δ)` is written as
//! `∫_δ^Δ [f(k*+t) + f(k*−t)] dt`, in which the `1/(k−k*)` parts cancel; the
//! `δ → 0` limit is taken by Richardson extrapolation over `δ₀, δ₀/2, δ₀/4`.
//! The paired integrand is even in `t`, so the error expansion runs in odd
//! powers of `δ`.

use super::quadrature::Adaptive;
use crate::error::{Error, Result};
use crate::model::KGrid;

type Func<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// `numerator(k) / denominator(k)`.
pub struct PvTerm<'a> {
    pub numerator: Func<'a>,
    pub denominator: Func<'a>,
}

impl<'a> PvTerm<'a> {
    pub fn new<N, D>(numerator: N, denominator: D) -> Self
    where
        N: Fn(f64) -> f64 + Send + Sync + 'a,
        D: Fn(f64) -> f64 + Send + Sync + 'a,
    {
        Self {
            numerator: Box::new(numerator),
            denominator: Box::new(denominator),
        }
    }

    pub fn eval(&self, k: f64) -> f64 {
        (self.numerator)(k) / (self.denominator)(k)
    }
}

/// An excluded neighbourhood `(k − window, k + window)` of a pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleReport {
    pub term: usize,
    pub k: f64,
    pub window: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PvResult {
    pub value: f64,
    pub poles: Vec<PoleReport>,
}

#[derive(Clone, Copy, Debug)]
pub struct PvOptions {
    /// `δ₀ = delta_fraction · Δ`.
    pub delta_fraction: f64,
    /// Poles closer than this (relative to the grid span) to an edge or to
    /// each other are rejected.
    pub min_window: f64,
    pub quad: Adaptive,
}

impl Default for PvOptions {
    fn default() -> Self {
        Self {
            delta_fraction: 1e-2,
            min_window: 1e-9,
            quad: Adaptive {
                abs_tol: 1e-15,
                rel_tol: 1e-13,
                max_panels: 200,
            },
        }
    }
}

pub fn pv_integrate(terms: &[PvTerm<'_>], grid: &KGrid) -> Result<PvResult> {
    pv_integrate_with(terms, grid, &PvOptions::default())
}

pub fn pv_integrate_with(terms: &[PvTerm<'_>], grid: &KGrid, opts: &PvOptions) -> Result<PvResult> {
    if grid.is_point_mass() {
        let k = grid.kmin();
        let mut value = 0.0;
        for (i, t) in terms.iter().enumerate() {
            let d = (t.denominator)(k);
            if d == 0.0 {
                return Err(Error::PoleAtK {
                    j: i as u32,
                    k,
                    energy: f64::NAN,
                });
            }
            value += (t.numerator)(k) / d;
        }
        return Ok(PvResult {
            value,
            poles: Vec::new(),
        });
    }

    let mut poles = Vec::new();
    let mut smooth: Vec<&PvTerm<'_>> = Vec::new();
    let mut value = 0.0;
    for (i, term) in terms.iter().enumerate() {
        if grid.points().iter().all(|&k| (term.numerator)(k) == 0.0) {
            continue;
        }
        let found = locate_poles(&*term.denominator, grid)?;
        if found.is_empty() {
            smooth.push(term);
            continue;
        }
        let windows = windows(&found, grid, opts)?;
        for (&k, &w) in found.iter().zip(&windows) {
            value += pole_window(term, k, w, opts);
            poles.push(PoleReport { term: i, k, window: w });
        }
        let excluded: Vec<(f64, f64)> = found.iter().zip(&windows).map(|(&k, &w)| (k - w, k + w)).collect();
        value += integrate_outside(|k| term.eval(k), grid, &excluded, opts);
    }
    if !smooth.is_empty() {
        value += integrate_outside(|k| smooth.iter().map(|t| t.eval(k)).sum(), grid, &[], opts);
    }
    Ok(PvResult { value, poles })
}

/// Simple zeros of `d` between grid points, ascending.
pub fn locate_poles(d: &(dyn Fn(f64) -> f64 + Send + Sync + '_), grid: &KGrid) -> Result<Vec<f64>> {
    let pts = grid.points();
    let vals: Vec<f64> = pts.iter().map(|&k| d(k)).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let span = grid.kmax() - grid.kmin();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        if vals[i] == 0.0 {
            let interior = i > 0 && i + 1 < pts.len();
            if !interior {
                return Err(Error::PoleNearEdge { k: pts[i], margin: 0.0 });
            }
            if vals[i - 1].signum() == vals[i + 1].signum() {
                return Err(Error::NonSimplePole { k: pts[i] });
            }
            out.push(pts[i]);
            continue;
        }
        if i + 1 < pts.len() && vals[i + 1] != 0.0 && vals[i].signum() != vals[i + 1].signum() {
            let (mut lo, mut hi) = (pts[i], pts[i + 1]);
            let neg_lo = vals[i] < 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let v = d(mid);
                if v == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (v < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let k = 0.5 * (lo + hi);
            let h = 1e-6 * span.max(k);
            let slope = (d(k + h) - d(k - h)) / (2.0 * h);
            if slope.abs() * span < 1e-9 * scale {
                return Err(Error::NonSimplePole { k });
            }
            out.push(k);
        }
    }
    Ok(out)
}

fn windows(poles: &[f64], grid: &KGrid, opts: &PvOptions) -> Result<Vec<f64>> {
    let (a, b) = (grid.kmin(), grid.kmax());
    let min = opts.min_window * (b - a);
    poles
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut room = (k - a).min(b - k);
            if room < min {
                return Err(Error::PoleNearEdge { k, margin: room });
            }
            if i > 0 {
                room = room.min(0.5 * (k - poles[i - 1]));
            }
            if i + 1 < poles.len() {
                room = room.min(0.5 * (poles[i + 1] - k));
            }
            if room < min {
                return Err(Error::NonSimplePole { k });
            }
            Ok(0.5 * room)
        })
        .collect()
}

fn pole_window(term: &PvTerm<'_>, k: f64, window: f64, opts: &PvOptions) -> f64 {
    let g = |t: f64| term.eval(k + t) + term.eval(k - t);
    let d0 = opts.delta_fraction * window;
    let outer = opts.quad.integrate(g, d0, window).0;
    let mid = opts.quad.integrate(g, 0.5 * d0, d0).0;
    let inner = opts.quad.integrate(g, 0.25 * d0, 0.5 * d0).0;
    let i1 = outer;
    let i2 = outer + mid;
    let i4 = i2 + inner;
    let r1 = 2.0 * i2 - i1;
    let r2 = 2.0 * i4 - i2;
    (8.0 * r2 - r1) / 7.0
}

/// Panel-wise adaptive quadrature over the grid minus the excluded intervals.
fn integrate_outside<F: Fn(f64) -> f64>(f: F, grid: &KGrid, excluded: &[(f64, f64)], opts: &PvOptions) -> f64 {
    let mut total = 0.0;
    for (p, q) in grid.panels() {
        let mut pieces = vec![(p, q)];
        for &(lo, hi) in excluded {
            pieces = pieces
                .into_iter()
                .flat_map(|(a, b)| {
                    let mut keep = Vec::with_capacity(2);
                    if hi <= a || lo >= b {
                        keep.push((a, b));
                    } else {
                        if lo > a {
                            keep.push((a, lo));
                        }
                        if hi < b {
                            keep.push((hi, b));
                        }
                    }
                    keep
                })
                .collect();
        }
        for (a, b) in pieces {
            total += opts.quad.integrate(&f, a, b).0;
        }
    }
    total
}
