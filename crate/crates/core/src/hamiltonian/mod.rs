//! Fixed-`(L, k)` blocks of the angulon operator.
//!
//! A block acts on the vacuum channel `|L M_L⟩ ⊗ 𝟙` and on excited channels
//! `h_{JΓL}` with `Γ = (λⁿ, Λ, mult)`. Entries are closed-form in terms of
//! reduced spherical-harmonic elements, 6j symbols and SCFPs; no `M_L`
//! appears anywhere, so every block is `(2L+1)`-fold degenerate.

mod channels;

pub use channels::{enumerate_channels, ChannelLabel, Truncation};

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::AngulonModel;
use crate::numfmt::sig15;
use crate::scfp::{shared_oracle, ScfpKey, ScfpTable};
use crate::wigner::{phase, reduced_y_f64, six_j_f64};

/// `U_{λL}(J′Λ′JΛ) = (−1)^{J+L} U (J′‖Y_λ‖J) {J′ Λ′ L; Λ J λ}`.
#[allow(clippy::too_many_arguments)]
pub fn u_lambda_l(lambda: u32, l: u32, jp: u32, big_p: u32, j: u32, big: u32, coupling: f64) -> f64 {
    if coupling == 0.0 {
        return 0.0;
    }
    let y = reduced_y_f64(jp, lambda, j);
    if y == 0.0 {
        return 0.0;
    }
    phase(i64::from(j + l)) * coupling * y * six_j_f64(jp, big_p, l, big, j, lambda)
}

/// `τ(λⁿ Λ′ Λ)` between `Λ` (multiplicity `m`) at `n` particles and `Λ′`
/// (multiplicity `m′`) at `n+1`.
pub fn tau(lambda: u32, n: usize, big_p: (u32, usize), big: (u32, usize), table: &ScfpTable) -> Result<f64> {
    let sign = phase(i64::from(big_p.0));
    if n == 0 {
        let hit = big == (0, 0) && big_p == (lambda, 0);
        return Ok(if hit { sign * f64::from(2 * big_p.0 + 1).sqrt() } else { 0.0 });
    }
    let key = ScfpKey {
        lambda,
        n: n + 1,
        parent: big.0,
        parent_mult: big.1,
        daughter: big_p.0,
        daughter_mult: big_p.1,
    };
    let scfp = table.value(&key)?;
    Ok(sign * (((n + 1) as f64) * f64::from(2 * big_p.0 + 1)).sqrt() * scfp)
}

/// `(τ(λⁿΛ′Λ), υ(λⁿΛ′Λ))` with `υ(λⁿΛ′Λ) = τ(λ^{n−1}ΛΛ′)`; multiplicity
/// indices are taken as 0.
pub fn tau_upsilon(lambda: u32, n: usize, big_p: u32, big: u32, table: &ScfpTable) -> Result<(f64, f64)> {
    let t = tau(lambda, n, (big_p, 0), (big, 0), table)?;
    let u = if n == 0 {
        0.0
    } else {
        tau(lambda, n - 1, (big, 0), (big_p, 0), table)?
    };
    Ok((t, u))
}

/// Dense real symmetric block at fixed `(L, k)`.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    pub l: u32,
    pub k: f64,
    pub channels: Vec<ChannelLabel>,
    pub entries: DMatrix<f64>,
}

impl BlockMatrix {
    pub fn dim(&self) -> usize {
        self.channels.len()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let m = &self.entries;
        (m - m.transpose()).amax()
    }

    /// `row_label,col_label,value` for every entry, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row_label,col_label,value\n");
        for (i, a) in self.channels.iter().enumerate() {
            for (j, b) in self.channels.iter().enumerate() {
                let _ = writeln!(out, "\"{a}\",\"{b}\",{}", sig15(self.entries[(i, j)]));
            }
        }
        out
    }

    pub fn manifest(&self) -> String {
        let mut out = String::from("index,label\n");
        for (i, c) in self.channels.iter().enumerate() {
            let _ = writeln!(out, "{i},\"{c}\"");
        }
        out
    }
}

/// Oracle SCFP tables for every `λ` of the truncation, deep enough for the
/// `n → n+1` couplings.
pub fn tables_for(trunc: &Truncation) -> Result<HashMap<u32, Arc<ScfpTable>>> {
    let mut out = HashMap::new();
    if trunc.n_max >= 2 {
        for lambda in trunc.lambdas() {
            out.insert(lambda, shared_oracle(lambda, trunc.n_max)?);
        }
    }
    Ok(out)
}

/// Assembles the block with SCFPs from the shared oracle tables.
pub fn assemble_block(l: u32, k: f64, model: &AngulonModel, trunc: &Truncation) -> Result<BlockMatrix> {
    let tables = tables_for(trunc)?;
    assemble_block_with(l, k, model, trunc, &tables)
}

pub fn assemble_block_with(
    l: u32,
    k: f64,
    model: &AngulonModel,
    trunc: &Truncation,
    tables: &HashMap<u32, Arc<ScfpTable>>,
) -> Result<BlockMatrix> {
    let channels = enumerate_channels(l, trunc)?;
    let omega = model.omega(k);
    let couplings: Vec<f64> = (0..=trunc.lambda_max).map(|lam| model.coupling(lam, k)).collect();
    if !omega.is_finite() || couplings.iter().any(|u| !u.is_finite()) {
        return Err(Error::Unbounded(format!("model not finite at k = {k}")));
    }
    let dim = channels.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (i, row) in channels.iter().enumerate() {
        for (j, col) in channels.iter().enumerate() {
            m[(i, j)] = entry(l, row, col, model.c, omega, &couplings, tables)?;
        }
    }
    Ok(BlockMatrix {
        l,
        k,
        channels,
        entries: m,
    })
}

fn entry(
    l: u32,
    row: &ChannelLabel,
    col: &ChannelLabel,
    c: f64,
    omega: f64,
    couplings: &[f64],
    tables: &HashMap<u32, Arc<ScfpTable>>,
) -> Result<f64> {
    if row == col {
        return Ok(c * f64::from(row.j * (row.j + 1)) + row.n as f64 * omega);
    }
    match (row.is_vacuum(), col.is_vacuum()) {
        (true, true) => Ok(0.0),
        (true, false) => Ok(vacuum_coupling(l, col, couplings)),
        (false, true) => Ok(vacuum_coupling(l, row, couplings)),
        (false, false) => {
            if row.lambda != col.lambda {
                return Ok(0.0);
            }
            let lambda = row.lambda;
            let u = u_lambda_l(lambda, l, row.j, row.big_lambda, col.j, col.big_lambda, couplings[lambda as usize]);
            if u == 0.0 {
                return Ok(0.0);
            }
            let table = || {
                tables
                    .get(&lambda)
                    .ok_or_else(|| Error::MissingEntry(format!("no SCFP table for lambda = {lambda}")))
            };
            let (rl, cl) = ((row.big_lambda, row.mult), (col.big_lambda, col.mult));
            if row.n == col.n + 1 {
                Ok(u * tau(lambda, col.n, rl, cl, table()?)?)
            } else if col.n == row.n + 1 {
                Ok(u * tau(lambda, row.n, cl, rl, table()?)?)
            } else {
                Ok(0.0)
            }
        }
    }
}

/// `(−1)^λ √(2λ+1) U_{λL}(L0Jλ)`, nonzero only for `n = 1`, `Λ = λ`.
fn vacuum_coupling(l: u32, ch: &ChannelLabel, couplings: &[f64]) -> f64 {
    if ch.n != 1 || ch.big_lambda != ch.lambda {
        return 0.0;
    }
    let lambda = ch.lambda;
    phase(i64::from(lambda))
        * f64::from(2 * lambda + 1).sqrt()
        * u_lambda_l(lambda, l, l, 0, ch.j, lambda, couplings[lambda as usize])
}
