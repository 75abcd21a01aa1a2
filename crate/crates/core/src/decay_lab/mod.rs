//! Decay machinery for zero modes: the exponent bootstrap, envelope
//! propagation, the partial-wave radial system and sphere-norm fits.

mod bootstrap;
mod envelopes;
mod fit;
mod radial;

pub use bootstrap::{bootstrap_exponents, parse_rational, predicted_steps, BootstrapRow, BootstrapRun, BootstrapState};
pub use envelopes::{
    propagate_coefficients_exact, propagate_envelopes, DecayEnvelope, EnvelopeTarget, GrowthEnvelope,
    PropagatedEnvelopes,
};
pub use fit::{fit_norms, fit_sphere_norm_decay, NormFit, SphereNormFits, SUPER_POLYNOMIAL_DRIFT, VANISHING_FRACTION};
pub use radial::{integrate_inward, integrate_radial_system, Coupling, InwardReport, RadialOptions, RadialSolution};
