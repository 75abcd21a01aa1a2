//! Pauli algebra, spherical spinors, the operator `K = -1 - σ·L`, sphere
//! quadrature, partial-wave projection, and two pointwise identity checks.

pub mod checks;
pub mod field;
pub mod grid;
pub mod harmonics;
pub mod pauli;
pub mod sphere;
pub mod spinors;

pub use checks::{radial_factorization_residual, sphere_norm_derivative_check};
pub use field::{AnalyticSpinor, FnSpinor, SpinorField};
pub use grid::{GridSpec, SpinorGrid, SpinorLayout};
pub use pauli::{sigma, sigma_dot, sigma_dot_apply, sigma_dot_real, sigma_p};
pub use sphere::{
    apply_k, partial_wave_project, sample_sphere, sphere_inner, sphere_norm, ChannelBasis, KImage,
    PartialWaveProjection, ProjectionOptions,
};
pub use spinors::{channels_up_to, spherical_spinor, Channel};
