//! Sphere inner products, the operator `K = -1 - σ·L` through its channel
//! decomposition, and partial-wave projection of spinor fields.

use num_complex::Complex64;
use serde::Serialize;

use super::field::SpinorField;
use super::spinors::{channels_up_to, eval_channel, Channel};
use crate::error::{Error, Result};
use crate::linalg::{inner2, norm2_sq, scale3, Spinor, Vec3, ZERO_SPINOR};
use crate::quadrature::SphereQuadrature;

/// Values of a spinor field at the nodes of a sphere rule, at one radius.
#[derive(Clone, Debug)]
pub struct SphereSamples {
    pub radius: f64,
    pub values: Vec<Spinor>,
}

pub fn sample_sphere<S: SpinorField + ?Sized>(f: &S, radius: f64, quad: &SphereQuadrature) -> SphereSamples {
    let values = quad.nodes().iter().map(|&w| f.value(scale3(radius, w))).collect();
    SphereSamples { radius, values }
}

/// `∫_{S²} ⟨f, g⟩ dω` from samples at the nodes of `quad`.
pub fn sphere_inner(f: &[Spinor], g: &[Spinor], quad: &SphereQuadrature) -> Result<Complex64> {
    if f.len() != quad.len() || g.len() != quad.len() {
        return Err(Error::InvalidArgument(format!(
            "sample count {} / {} does not match sphere rule with {} nodes",
            f.len(),
            g.len(),
            quad.len()
        )));
    }
    Ok(f.iter().zip(g).zip(quad.weights()).map(|((a, b), &w)| w * inner2(a, b)).sum())
}

pub fn sphere_norm(f: &[Spinor], quad: &SphereQuadrature) -> Result<f64> {
    Ok(sphere_inner(f, f, quad)?.re.max(0.0).sqrt())
}

/// Spherical spinors tabulated at the nodes of a sphere rule.
#[derive(Clone, Debug)]
pub struct ChannelBasis {
    channels: Vec<Channel>,
    quad: SphereQuadrature,
    table: Vec<Vec<Spinor>>,
}

impl ChannelBasis {
    /// Basis for `|κ| ≤ kappa_max` on a rule of the given degree.
    pub fn new(kappa_max: i32, degree: usize) -> Result<Self> {
        if kappa_max < 1 {
            return Err(Error::InvalidArgument("kappa_max must be at least 1".into()));
        }
        let quad = SphereQuadrature::new(degree);
        let channels = channels_up_to(kappa_max);
        let table = channels
            .iter()
            .map(|&ch| quad.nodes().iter().map(|&w| eval_channel(ch, w)).collect())
            .collect();
        Ok(Self { channels, quad, table })
    }

    /// Degree that resolves products of two channels up to `kappa_max`
    /// with room for a low-order angular factor.
    pub fn default_degree(kappa_max: i32) -> usize {
        2 * kappa_max as usize + 4
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn quadrature(&self) -> &SphereQuadrature {
        &self.quad
    }

    pub fn table(&self) -> &[Vec<Spinor>] {
        &self.table
    }

    /// Coefficients `⟨Ω_a, f⟩` for samples at the rule nodes.
    pub fn project(&self, samples: &[Spinor]) -> Vec<Complex64> {
        self.table
            .iter()
            .map(|omega| {
                omega
                    .iter()
                    .zip(samples)
                    .zip(self.quad.weights())
                    .map(|((o, s), &w)| w * inner2(o, s))
                    .sum()
            })
            .collect()
    }

    /// `Σ c_a Ω_a` at the rule nodes.
    pub fn resum_nodes(&self, coeffs: &[Complex64]) -> Vec<Spinor> {
        let mut out = vec![ZERO_SPINOR; self.quad.len()];
        for (c, omega) in coeffs.iter().zip(&self.table) {
            for (o, v) in out.iter_mut().zip(omega) {
                o[0] += c * v[0];
                o[1] += c * v[1];
            }
        }
        out
    }

    /// Relative L²(S²) distance between samples and their projection.
    pub fn truncation_residual(&self, samples: &[Spinor], coeffs: &[Complex64]) -> f64 {
        let resummed = self.resum_nodes(coeffs);
        let mut diff = 0.0;
        let mut total = 0.0;
        for ((s, p), &w) in samples.iter().zip(&resummed).zip(self.quad.weights()) {
            diff += w * (norm2_sq(&[s[0] - p[0], s[1] - p[1]]));
            total += w * norm2_sq(s);
        }
        if total == 0.0 {
            0.0
        } else {
            (diff / total).sqrt()
        }
    }
}

/// Evaluate `Σ c_a Ω_a(ω)`.
pub fn resum(channels: &[Channel], coeffs: &[Complex64], omega: Vec3) -> Spinor {
    let mut out = ZERO_SPINOR;
    for (&ch, c) in channels.iter().zip(coeffs) {
        let v = eval_channel(ch, omega);
        out[0] += c * v[0];
        out[1] += c * v[1];
    }
    out
}

/// `K f` represented by its channel coefficients.
#[derive(Clone, Debug)]
pub struct KImage {
    pub channels: Vec<Channel>,
    /// Coefficients of `K f`, i.e. `κ_a ⟨Ω_a, f⟩`.
    pub coefficients: Vec<Complex64>,
    /// Relative part of `f` not captured by the channels.
    pub truncation_residual: f64,
}

impl KImage {
    pub fn eval(&self, omega: Vec3) -> Spinor {
        resum(&self.channels, &self.coefficients, omega)
    }
}

/// Applies `K = -1 - σ·L` to a spinor function on S² by projecting onto
/// channels `|κ| ≤ kappa_max` and multiplying each coefficient by κ.
pub fn apply_k<F>(f: F, basis: &ChannelBasis, tolerance: f64) -> Result<KImage>
where
    F: Fn(Vec3) -> Spinor,
{
    let samples: Vec<Spinor> = basis.quadrature().nodes().iter().map(|&w| f(w)).collect();
    let coeffs = basis.project(&samples);
    let residual = basis.truncation_residual(&samples, &coeffs);
    if residual > tolerance {
        return Err(Error::Truncation { residual, tolerance });
    }
    let coefficients = basis
        .channels()
        .iter()
        .zip(&coeffs)
        .map(|(ch, c)| c * ch.kappa as f64)
        .collect();
    Ok(KImage { channels: basis.channels().to_vec(), coefficients, truncation_residual: residual })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProjectionOptions {
    pub kappa_max: i32,
    pub quad_degree: usize,
    /// Residuals above this are reported as warnings.
    pub tolerance: f64,
}

impl ProjectionOptions {
    pub fn new(kappa_max: i32) -> Self {
        Self { kappa_max, quad_degree: 2 * kappa_max as usize + 8, tolerance: 1e-6 }
    }
}

/// Channel amplitudes of a spinor field on a set of spheres.
#[derive(Clone, Debug)]
pub struct PartialWaveProjection {
    pub channels: Vec<Channel>,
    pub radii: Vec<f64>,
    /// `amplitudes[i][a] = ⟨Ω_a, ψ(r_i ·)⟩`
    pub amplitudes: Vec<Vec<Complex64>>,
    /// Sphere norm of the κ > 0 part.
    pub norm_plus: Vec<f64>,
    /// Sphere norm of the κ < 0 part.
    pub norm_minus: Vec<f64>,
    /// Full sphere norm of ψ (independent of truncation).
    pub sphere_norm: Vec<f64>,
    pub truncation_residual: Vec<f64>,
    pub warnings: Vec<String>,
}

impl PartialWaveProjection {
    /// The κ > 0 part `g₊` evaluated at a point on sphere `i`.
    pub fn plus_at(&self, i: usize, omega: Vec3) -> Spinor {
        self.part_at(i, omega, true)
    }

    /// The κ < 0 part `g₋` evaluated at a point on sphere `i`.
    pub fn minus_at(&self, i: usize, omega: Vec3) -> Spinor {
        self.part_at(i, omega, false)
    }

    fn part_at(&self, i: usize, omega: Vec3, positive: bool) -> Spinor {
        let coeffs: Vec<Complex64> = self
            .channels
            .iter()
            .zip(&self.amplitudes[i])
            .map(|(ch, &c)| if ch.is_positive() == positive { c } else { Complex64::new(0.0, 0.0) })
            .collect();
        resum(&self.channels, &coeffs, omega)
    }
}

/// Projects `ψ` onto the channels `|κ| ≤ kappa_max` on each sphere and splits
/// the result into its `K > 0` and `K < 0` parts.
pub fn partial_wave_project<S: SpinorField + ?Sized>(
    psi: &S,
    radii: &[f64],
    opts: ProjectionOptions,
) -> Result<PartialWaveProjection> {
    if radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("projection radii must be positive and finite".into()));
    }
    let basis = ChannelBasis::new(opts.kappa_max, opts.quad_degree)?;
    let mut out = PartialWaveProjection {
        channels: basis.channels().to_vec(),
        radii: radii.to_vec(),
        amplitudes: Vec::with_capacity(radii.len()),
        norm_plus: Vec::with_capacity(radii.len()),
        norm_minus: Vec::with_capacity(radii.len()),
        sphere_norm: Vec::with_capacity(radii.len()),
        truncation_residual: Vec::with_capacity(radii.len()),
        warnings: Vec::new(),
    };
    for &r in radii {
        let samples = sample_sphere(psi, r, basis.quadrature());
        let coeffs = basis.project(&samples.values);
        let residual = basis.truncation_residual(&samples.values, &coeffs);
        if residual > opts.tolerance {
            out.warnings.push(format!(
                "r = {r}: truncation residual {residual:.3e} exceeds {:.3e}",
                opts.tolerance
            ));
        }
        let (mut plus, mut minus) = (0.0, 0.0);
        for (ch, c) in basis.channels().iter().zip(&coeffs) {
            if ch.is_positive() {
                plus += c.norm_sqr();
            } else {
                minus += c.norm_sqr();
            }
        }
        out.norm_plus.push(plus.sqrt());
        out.norm_minus.push(minus.sqrt());
        out.sphere_norm.push(sphere_norm(&samples.values, basis.quadrature())?);
        out.truncation_residual.push(residual);
        out.amplitudes.push(coeffs);
    }
    Ok(out)
}
