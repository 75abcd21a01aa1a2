//! Biot–Savart vector potentials, the curl check, and the decay envelope of
//! the potential with its explicit constants.

mod biot_savart;
mod fit;
mod envelope;
mod potential;

pub use biot_savart::{
    biot_savart, biot_savart_many, curl_residual, BiotSavartEstimate, BiotSavartOptions, BiotSavartPotential,
};
pub use fit::{fit_decay_exponent, DecayFit};
pub use envelope::{potential_envelope, log_kernel, EnvelopeConstants, CONSTANT_CROSS_CHECK};
pub use potential::{GaugePotential, GaugeTag, PotentialDecay};
