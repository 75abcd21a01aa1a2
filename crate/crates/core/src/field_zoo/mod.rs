//! Magnetic field models: closed-form curls of explicit potentials, fields
//! derived from a nowhere-vanishing spinor, and checks of the integrability
//! and decay hypotheses.

mod builtins;
mod config;
mod derive;
mod vector;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use builtins::{
    builtin, gaussian_swirl, loss_yau, loss_yau_spinor, rational_swirl, zero_field, FieldModel, LossYauSpinor,
    BUILTIN_LABELS,
};
pub use config::{load_field, normalize_label, DecaySpec, FieldKind, FieldSpec};
pub use derive::{derive_pair_from_spinor, loss_yau_derived, DeriveOptions, PinnedPotential, ZeroModeTriple};
pub use vector::{
    curl_central, curl_fourth_order, divergence_fd, jacobian_central, jacobian_fourth_order, FnField, NumericalCurl,
    Scaled, VectorField,
};

use crate::error::{Error, Result};
use crate::linalg::{fibonacci_sphere, norm3, scale3, Vec3};
use crate::quadrature::{integrate, integrate_half_line, Tolerance};

/// `|B(x)| ≤ C_B |x|^(-2-β)` for `|x| ≥ r₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDecay {
    #[serde(rename = "C_B")]
    pub c_b: f64,
    pub beta: f64,
    pub r0: f64,
}

impl FieldDecay {
    pub fn new(c_b: f64, beta: f64, r0: f64) -> Result<Self> {
        if !(c_b >= 0.0) || !c_b.is_finite() {
            return Err(Error::InvalidArgument(format!("C_B must be finite and nonnegative, got {c_b}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
        }
        if !(r0 >= 0.0) || !r0.is_finite() {
            return Err(Error::InvalidArgument(format!("r0 must be nonnegative, got {r0}")));
        }
        Ok(Self { c_b, beta, r0 })
    }

    pub fn envelope(&self, r: f64) -> f64 {
        self.c_b * r.powf(-2.0 - self.beta)
    }
}

#[derive(Clone)]
pub struct MagneticField {
    pub label: String,
    pub evaluator: Arc<dyn VectorField>,
    pub decay: Option<FieldDecay>,
}

impl MagneticField {
    pub fn new(label: impl Into<String>, evaluator: Arc<dyn VectorField>) -> Self {
        Self { label: label.into(), evaluator, decay: None }
    }

    pub fn with_decay(mut self, decay: FieldDecay) -> Self {
        self.decay = Some(decay);
        self
    }

    /// `c · B`, with the envelope constant scaled by `|c|`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            label: format!("{}*{c}", self.label),
            evaluator: Arc::new(Scaled { factor: c, inner: self.evaluator.clone() }),
            decay: self.decay.map(|d| FieldDecay { c_b: d.c_b * c.abs(), ..d }),
        }
    }

    #[inline]
    pub fn eval(&self, x: Vec3) -> Vec3 {
        self.evaluator.value(x)
    }
}

impl VectorField for MagneticField {
    fn value(&self, x: Vec3) -> Vec3 {
        self.evaluator.value(x)
    }
}

impl std::fmt::Debug for MagneticField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MagneticField").field("label", &self.label).field("decay", &self.decay).finish_non_exhaustive()
    }
}

pub fn eval_field(field: &MagneticField, x: Vec3) -> Vec3 {
    field.eval(x)
}

/// Quadrature settings for [`lp_norm`].
#[derive(Clone, Copy, Debug)]
pub struct LpQuadrature {
    /// Trapezoid nodes in the azimuth on each sphere.
    pub n_phi: usize,
    /// Tolerance of the adaptive rule in `cos θ` on each sphere.
    pub angular: Tolerance,
    pub radial: Tolerance,
    /// Length scale of the field's core, used to place radial breakpoints.
    pub radial_scale: f64,
}

impl Default for LpQuadrature {
    fn default() -> Self {
        Self {
            n_phi: 48,
            angular: Tolerance::new(1e-13, 1e-11),
            radial: Tolerance::new(1e-12, 1e-10),
            radial_scale: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Error estimate of `value` propagated from the quadrature.
    pub error: f64,
    /// `∫|B|^p`.
    pub integral: f64,
    /// Part of `integral` extrapolated beyond the last radial shell.
    pub tail: f64,
}

/// `(∫|B|^p)^(1/p)` by radial shells around the origin. On each sphere the
/// polar integral is adaptive, so kinks of `|B|^p` along zero sets of `B`
/// are resolved.
pub fn lp_norm(field: &MagneticField, p: f64, quad: &LpQuadrature) -> Result<NormEstimate> {
    let shell = shell_integrand(field, p, quad)?;
    let s = quad.radial_scale;
    let est = integrate_half_line(shell, &[0.0, 0.25 * s, 0.5 * s, s, 2.0 * s, 4.0 * s], quad.radial)?;
    let integral = est.value[0].max(0.0);
    let value = integral.powf(1.0 / p);
    let error = if integral > 0.0 { value / (p * integral) * est.error } else { est.error.powf(1.0 / p) };
    Ok(NormEstimate { value, error, integral, tail: est.tail[0] })
}

/// `∫_{|x| < r_max} |B|^p`, with the quadrature error estimate.
pub fn lp_integral_ball(field: &MagneticField, p: f64, r_max: f64, quad: &LpQuadrature) -> Result<(f64, f64)> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r_max}")));
    }
    let shell = shell_integrand(field, p, quad)?;
    let mut breaks = vec![0.0];
    let mut r = 0.25 * quad.radial_scale;
    while r < r_max {
        breaks.push(r);
        r *= 2.0;
    }
    breaks.push(r_max);
    let est = integrate(shell, &breaks, quad.radial);
    Ok((est.value[0].max(0.0), est.error))
}

fn shell_integrand<'a>(field: &'a MagneticField, p: f64, quad: &LpQuadrature) -> Result<impl Fn(f64) -> [f64; 1] + 'a> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("p must be in [1, ∞), got {p}")));
    }
    if quad.n_phi < 4 {
        return Err(Error::InvalidArgument("n_phi must be at least 4".into()));
    }
    let dphi = 2.0 * std::f64::consts::PI / quad.n_phi as f64;
    let trig: Vec<(f64, f64)> = (0..quad.n_phi).map(|k| ((k as f64 + 0.5) * dphi).sin_cos()).collect();
    let angular = quad.angular;
    Ok(move |r: f64| {
        let ring = |t: f64| {
            let st = (1.0 - t * t).max(0.0).sqrt();
            let sum: f64 = trig.iter().map(|&(sp, cp)| norm3(field.eval([r * st * cp, r * st * sp, r * t])).powf(p)).sum();
            [sum * dphi]
        };
        let est = integrate(ring, &[-1.0, -0.5, 0.0, 0.5, 1.0], angular);
        [r * r * est.value[0]]
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub r: f64,
    /// `max_ω |B(rω)| r^(2+β)`.
    pub max_ratio: f64,
    pub direction_index: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub decay: FieldDecay,
    pub rows: Vec<DecayRow>,
    pub pass: bool,
}

/// Relative slack on the comparison `ratio ≤ C_B`, absorbing rounding in
/// fields that saturate their envelope exactly.
pub const DECAY_SLACK: f64 = 1e-12;

pub fn decay_report(field: &MagneticField, radii: &[f64], directions: &[Vec3]) -> Result<DecayReport> {
    let decay = field.decay.ok_or_else(|| Error::MissingDecay(field.label.clone()))?;
    if directions.is_empty() {
        return Err(Error::InvalidArgument("no directions".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r >= decay.r0) || !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("radius {r} is below r0 = {}", decay.r0)));
        }
        let weight = r.powf(2.0 + decay.beta);
        let (direction_index, max_ratio) = directions
            .iter()
            .map(|&w| {
                let n = norm3(w);
                norm3(field.eval(scale3(r / n, w))) * weight
            })
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        let pass = max_ratio <= decay.c_b * (1.0 + DECAY_SLACK);
        rows.push(DecayRow { r, max_ratio, direction_index, pass });
    }
    let pass = rows.iter().all(|row| row.pass);
    Ok(DecayReport { decay, rows, pass })
}

/// Default probe directions for envelope checks.
pub fn default_directions() -> Vec<Vec3> {
    fibonacci_sphere(64)
}
