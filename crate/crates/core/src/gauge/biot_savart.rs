use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_zoo::{curl_central, MagneticField, VectorField};
use crate::linalg::{add3, cross3, frame_from_axis, norm3, scale3, sub3, Vec3};
use crate::quadrature::{integrate, integrate_half_line, Tolerance};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BiotSavartOptions {
    /// Trapezoid nodes in the azimuth around the axis pointing at the origin.
    pub n_phi: usize,
    /// Polar breakpoints at `π 2^-k`, `k = 0..=polar_levels`.
    pub polar_levels: u32,
    #[serde(skip)]
    pub angular: Tolerance,
    #[serde(skip)]
    pub radial: Tolerance,
    /// Length scale of the field's core, used to place radial breakpoints.
    pub scale: f64,
}

impl Default for BiotSavartOptions {
    fn default() -> Self {
        Self {
            n_phi: 32,
            polar_levels: 8,
            angular: Tolerance::new(1e-10, 1e-8),
            radial: Tolerance::new(1e-9, 1e-7),
            scale: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BiotSavartEstimate {
    pub value: Vec3,
    pub error: f64,
}

/// `A(x) = (1/4π) ∫ B(y) × (x-y)/|x-y|³ dy`.
///
/// With `y = x + ρω` this is `-(1/4π) ∫₀^∞ dρ ∫_{S²} B(x+ρω) × ω dω`; the
/// Jacobian cancels the kernel, so the integrand is bounded. The angular rule
/// puts its pole on the ray towards the origin, where the field concentrates.
pub fn biot_savart<B: VectorField + ?Sized>(field: &B, x: Vec3, opts: &BiotSavartOptions) -> Result<BiotSavartEstimate> {
    if !x.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite evaluation point {x:?}")));
    }
    if opts.n_phi < 4 {
        return Err(Error::InvalidArgument("n_phi must be at least 4".into()));
    }
    let [e1, e2, e3] = frame_from_axis(scale3(-1.0, x));
    let dphi = 2.0 * PI / opts.n_phi as f64;
    let trig: Vec<(f64, f64)> = (0..opts.n_phi).map(|k| ((k as f64 + 0.5) * dphi).sin_cos()).collect();
    let mut polar: Vec<f64> = (0..=opts.polar_levels).rev().map(|k| PI * 0.5f64.powi(k as i32)).collect();
    polar.insert(0, 0.0);

    let shell = |rho: f64| -> [f64; 3] {
        let ring = |theta: f64| -> [f64; 3] {
            let (st, ct) = theta.sin_cos();
            let mut acc = [0.0; 3];
            for &(sp, cp) in &trig {
                let w = add3(scale3(ct, e3), add3(scale3(st * cp, e1), scale3(st * sp, e2)));
                let b = field.value(add3(x, scale3(rho, w)));
                let c = cross3(b, w);
                for i in 0..3 {
                    acc[i] += c[i];
                }
            }
            scale3(st * dphi, acc)
        };
        let inner = integrate(ring, &polar, opts.angular);
        scale3(-1.0 / (4.0 * PI), inner.value)
    };

    let s = opts.scale;
    let d = norm3(x);
    let mut breaks = vec![0.0, 0.5 * s, s, 2.0 * s, 4.0 * s];
    for off in [-2.0 * s, -s, -0.5 * s, 0.0, 0.5 * s, s, 2.0 * s] {
        breaks.push(d + off);
    }
    breaks.retain(|&b| b >= 0.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * s);
    let est = integrate_half_line(shell, &breaks, opts.radial)?;
    Ok(BiotSavartEstimate { value: est.value, error: est.error })
}

/// [`biot_savart`] at many points; results keep the input order.
pub fn biot_savart_many<B: VectorField + ?Sized>(
    field: &B,
    points: &[Vec3],
    opts: &BiotSavartOptions,
) -> Vec<Result<BiotSavartEstimate>> {
    points.par_iter().map(|&x| biot_savart(field, x, opts)).collect()
}

/// The Biot–Savart potential of a field as a lazily evaluated vector field;
/// points where the quadrature fails evaluate to NaN.
pub struct BiotSavartPotential {
    pub field: MagneticField,
    pub options: BiotSavartOptions,
}

impl VectorField for BiotSavartPotential {
    fn value(&self, x: Vec3) -> Vec3 {
        biot_savart(&self.field, x, &self.options).map(|e| e.value).unwrap_or([f64::NAN; 3])
    }
}

/// `|curl_h A(x) - B(x)|` with second-order central differences.
pub fn curl_residual<A: VectorField + ?Sized, B: VectorField + ?Sized>(a: &A, b: &B, x: Vec3, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    Ok(norm3(sub3(curl_central(a, x, h), b.value(x))))
}
