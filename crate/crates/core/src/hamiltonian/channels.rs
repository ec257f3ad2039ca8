use std::fmt;

use crate::error::{Error, Result};
use crate::fock::sym_power_multiplicity;

/// Channel of a fixed-`L` block. The vacuum channel has `n = 0` and `J = L`;
/// its `λ`, `Λ` and `mult` are zero. The derived order is
/// `(n, λ, Λ, J, mult)`, so the vacuum sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelLabel {
    pub n: usize,
    pub lambda: u32,
    pub big_lambda: u32,
    pub j: u32,
    pub mult: usize,
}

impl ChannelLabel {
    pub fn vacuum(l: u32) -> Self {
        Self {
            n: 0,
            lambda: 0,
            big_lambda: 0,
            j: l,
            mult: 0,
        }
    }

    pub fn excited(j: u32, lambda: u32, n: usize, big_lambda: u32, mult: usize) -> Self {
        Self {
            n,
            lambda,
            big_lambda,
            j,
            mult,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.n == 0
    }
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vacuum() {
            write!(f, "J={},vacuum", self.j)
        } else {
            write!(
                f,
                "J={},lam={},n={},Lam={},m={}",
                self.j, self.lambda, self.n, self.big_lambda, self.mult
            )
        }
    }
}

/// Phonon-number cutoff, active phonon momenta `lambda_min..=lambda_max`,
/// and a cap on the block dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub n_max: usize,
    pub lambda_min: u32,
    pub lambda_max: u32,
    pub cap: usize,
}

impl Truncation {
    pub const DEFAULT_CAP: usize = 4096;

    pub fn new(n_max: usize, lambda_max: u32) -> Self {
        Self {
            n_max,
            lambda_min: 0,
            lambda_max,
            cap: Self::DEFAULT_CAP,
        }
    }

    pub fn with_lambda_min(self, lambda_min: u32) -> Self {
        Self { lambda_min, ..self }
    }

    pub fn with_cap(self, cap: usize) -> Self {
        Self { cap, ..self }
    }

    pub fn lambdas(&self) -> impl Iterator<Item = u32> {
        self.lambda_min..=self.lambda_max
    }
}

/// Vacuum, then every single-`λ` channel with `triangle(J, Λ, L)` and
/// parity `(−1)^{J+nλ} = (−1)^L`, sorted by `(n, λ, Λ, J, mult)`.
pub fn enumerate_channels(l: u32, trunc: &Truncation) -> Result<Vec<ChannelLabel>> {
    if trunc.n_max == 0 {
        return Err(Error::InvalidParameter("truncation needs N >= 1".into()));
    }
    if trunc.lambda_min > trunc.lambda_max {
        return Err(Error::InvalidParameter("lambda_min exceeds lambda_max".into()));
    }
    let mut out = vec![ChannelLabel::vacuum(l)];
    for n in 1..=trunc.n_max {
        for lambda in trunc.lambdas() {
            for big in 0..=(n as u32 * lambda) {
                let mult = sym_power_multiplicity(lambda, n, big);
                if mult == 0 {
                    continue;
                }
                for j in l.abs_diff(big)..=l + big {
                    if !(u64::from(j) + n as u64 * u64::from(lambda) + u64::from(l)).is_multiple_of(2) {
                        continue;
                    }
                    for m in 0..mult {
                        out.push(ChannelLabel::excited(j, lambda, n, big, m));
                        if out.len() > trunc.cap {
                            return Err(Error::ChannelCap {
                                count: out.len(),
                                cap: trunc.cap,
                            });
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
