//! Spectral solvers for the angulon block problem.

pub mod pv;
pub mod quadrature;
pub mod selfenergy;
pub mod solvers;
pub mod sweep;
