//! Angulon operator toolkit: exact angular-momentum algebra, a symmetric Fock
//! space oracle, fractional-parentage tables, block Hamiltonians and spectral
//! solvers for few-phonon excitations of a rotating impurity.

pub mod error;
pub mod wigner;

pub use error::{Error, Result};
pub use wigner::{ExactSum, SqrtRational, Surd};
pub mod fock;
pub mod hamiltonian;
pub mod model;
pub mod numfmt;
pub mod scfp;
pub mod spectrum;
