//! Shared fixtures for the benchmarks.

use angulon::model::{toy_model, AngulonModel, KGrid, ModelConfig, ToyParams};

/// Default helium configuration at `rho_tilde`, with its grid.
pub fn helium(rho_tilde: f64) -> (AngulonModel, KGrid) {
    let cfg = ModelConfig::default();
    let model = cfg.model_at(rho_tilde).expect("default helium model is valid");
    (model, cfg.grid().expect("default grid is valid"))
}

/// A three-channel toy model with moderate couplings.
pub fn toy() -> AngulonModel {
    toy_model(ToyParams {
        u: vec![0.8, 1.1, 0.6],
        ..ToyParams::default()
    })
}
