//! Power-law fits of the `K > 0` and `K < 0` sphere norms of a spinor field.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::fit_decay_exponent;
use crate::spinor_calculus::{partial_wave_project, ProjectionOptions, SpinorField};

/// Local slopes whose spread exceeds this mark a fit as super-polynomial.
pub const SUPER_POLYNOMIAL_DRIFT: f64 = 1.0;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NormFit {
    /// `‖·‖(r) ≈ constant · r^{-exponent}` over the whole window. For a
    /// super-polynomial decay this is the steepest local slope, a lower bound.
    pub exponent: Option<f64>,
    pub constant: Option<f64>,
    pub residual: Option<f64>,
    /// Exponents between consecutive radii.
    pub local_exponents: Vec<f64>,
    pub super_polynomial: bool,
    pub note: Option<String>,
}

/// Parts below this fraction of the full sphere norm count as vanishing.
pub const VANISHING_FRACTION: f64 = 1e-10;

/// Fits `norms ≈ C r^{-e}`; vanishing norms skip the fit with a note.
pub fn fit_norms(radii: &[f64], norms: &[f64]) -> Result<NormFit> {
    fit_against(radii, norms, None)
}

fn fit_against(radii: &[f64], norms: &[f64], reference: Option<&[f64]>) -> Result<NormFit> {
    if radii.len() != norms.len() {
        return Err(Error::InvalidArgument("radii and norms differ in length".into()));
    }
    let floor = |i: usize| reference.map_or(f64::MIN_POSITIVE, |r| VANISHING_FRACTION * r[i]).max(f64::MIN_POSITIVE);
    if norms.iter().enumerate().any(|(i, &n)| !(n > floor(i))) {
        return Ok(NormFit {
            exponent: None,
            constant: None,
            residual: None,
            local_exponents: Vec::new(),
            super_polynomial: false,
            note: Some("norm vanishes on part of the window; fit skipped".into()),
        });
    }
    let samples: Vec<(f64, f64)> = radii.iter().cloned().zip(norms.iter().cloned()).collect();
    let fit = fit_decay_exponent(&samples)?;
    let local: Vec<f64> = samples
        .windows(2)
        .map(|w| -(w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln())
        .collect();
    let (first, last) = (local[0], local[local.len() - 1]);
    let monotone = local.windows(2).all(|w| w[1] >= w[0]);
    let super_polynomial = monotone && last - first > SUPER_POLYNOMIAL_DRIFT.max(0.5 * first.abs());
    Ok(NormFit {
        exponent: Some(if super_polynomial { last } else { fit.exponent }),
        constant: Some(fit.constant),
        residual: Some(fit.residual),
        local_exponents: local,
        super_polynomial,
        note: super_polynomial.then(|| format!("decay faster than any power; exponent exceeds {last:.3}")),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereNormFits {
    pub radii: Vec<f64>,
    pub norm_plus: Vec<f64>,
    pub norm_minus: Vec<f64>,
    pub plus: NormFit,
    pub minus: NormFit,
    pub warnings: Vec<String>,
}

/// Projects `ψ` on the spheres, splits by the sign of `K` and fits each part.
pub fn fit_sphere_norm_decay<S: SpinorField + ?Sized>(psi: &S, radii: &[f64], kappa_max: i32) -> Result<SphereNormFits> {
    if radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("radii must be increasing".into()));
    }
    let proj = partial_wave_project(psi, radii, ProjectionOptions::new(kappa_max))?;
    Ok(SphereNormFits {
        plus: fit_against(radii, &proj.norm_plus, Some(&proj.sphere_norm))?,
        minus: fit_against(radii, &proj.norm_minus, Some(&proj.sphere_norm))?,
        radii: radii.to_vec(),
        norm_plus: proj.norm_plus,
        norm_minus: proj.norm_minus,
        warnings: proj.warnings,
    })
}
