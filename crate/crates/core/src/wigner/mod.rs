//! Exact angular-momentum algebra over integer momenta.
//!
//! Values are computed with the Racah single-sum formulas in big-rational
//! arithmetic and memoized. The free functions use a process-wide
//! [`AngularAlgebra`]; construct your own to change the factorial table size.

mod racah;
mod sqrt_rational;

use once_cell::sync::Lazy;

pub use racah::{AngularAlgebra, FactorialTable, ReducedY};
pub use sqrt_rational::{ExactSum, SqrtRational, Surd};

/// Default bound used to size the factorial table.
pub const DEFAULT_MAX_MOMENTUM: u32 = 12;

static GLOBAL: Lazy<AngularAlgebra> = Lazy::new(AngularAlgebra::default);

/// The shared cache used by the free functions in this module.
pub fn algebra() -> &'static AngularAlgebra {
    &GLOBAL
}

pub fn clebsch_gordan(j1: u32, j2: u32, j: u32, m1: i32, m2: i32, m: i32) -> SqrtRational {
    GLOBAL.clebsch_gordan(j1, j2, j, m1, m2, m)
}

pub fn cg(j1: u32, j2: u32, j: u32, m1: i32, m2: i32, m: i32) -> f64 {
    GLOBAL.clebsch_gordan_f64(j1, j2, j, m1, m2, m)
}

pub fn six_j(j1: u32, j2: u32, j3: u32, j4: u32, j5: u32, j6: u32) -> SqrtRational {
    GLOBAL.six_j(j1, j2, j3, j4, j5, j6)
}

pub fn six_j_f64(j1: u32, j2: u32, j3: u32, j4: u32, j5: u32, j6: u32) -> f64 {
    GLOBAL.six_j_f64(j1, j2, j3, j4, j5, j6)
}

pub fn reduced_y(jp: u32, lam: u32, j: u32) -> ReducedY {
    GLOBAL.reduced_y(jp, lam, j)
}

pub fn reduced_y_f64(jp: u32, lam: u32, j: u32) -> f64 {
    GLOBAL.reduced_y_f64(jp, lam, j)
}

/// Whether `c` lies in the coupling range of `a ⊗ b`.
pub fn triangle(a: u32, b: u32, c: u32) -> bool {
    c >= a.abs_diff(b) && c <= a + b
}

/// `(-1)^n` for a possibly negative exponent.
pub fn phase(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
