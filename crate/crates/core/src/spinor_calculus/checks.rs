//! Pointwise numerical checks of two identities used in the decay analysis:
//! the radial factorization `σ·p = -i σ·x̂ (∂_r + (K+1)/r)` and the derivative
//! of the sphere norm `d/dr ‖f‖ = ‖f‖⁻¹ Re⟨f, ∂_r f⟩`.

use num_complex::Complex64;

use super::field::SpinorField;
use super::pauli::{sigma_dot_apply, sigma_p};
use super::sphere::{resum, sample_sphere, sphere_norm, ChannelBasis};
use crate::error::{Error, Result};
use crate::linalg::{add3, axis, inner2, norm2_sq, norm3, scale2, scale3, sub2, Spinor, Vec3, I};
use crate::quadrature::SphereQuadrature;

const FACTORIZATION_TRUNCATION_TOL: f64 = 1e-8;

fn centered_gradient<S: SpinorField + ?Sized>(psi: &S, x: Vec3, h: f64) -> [Spinor; 3] {
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 3];
    for (j, slot) in g.iter_mut().enumerate() {
        let e = scale3(h, axis(j));
        let d = sub2(&psi.value(add3(x, e)), &psi.value(add3(x, scale3(-1.0, e))));
        *slot = scale2(Complex64::from(0.5 / h), &d);
    }
    g
}

/// `|σ·pψ(x) + i σ·x̂ (∂_r + (K+1)/r) ψ(x)|`.
///
/// The left side uses Cartesian central differences, `∂_r` a central
/// difference along x̂, and `K` acts through the channel expansion of ψ on the
/// sphere of radius |x| truncated at `kappa_max`.
pub fn radial_factorization_residual<S: SpinorField + ?Sized>(
    psi: &S,
    x: Vec3,
    h: f64,
    kappa_max: i32,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let r = norm3(x);
    if r < 10.0 * h {
        return Err(Error::InvalidArgument(format!(
            "|x| = {r} is below 10h = {}; the 1/r factor is too close to singular",
            10.0 * h
        )));
    }
    let lhs = sigma_p(&centered_gradient(psi, x, h));

    let xhat = scale3(1.0 / r, x);
    let dr = scale2(
        Complex64::from(0.5 / h),
        &sub2(&psi.value(add3(x, scale3(h, xhat))), &psi.value(add3(x, scale3(-h, xhat)))),
    );
    let basis = ChannelBasis::new(kappa_max, ChannelBasis::default_degree(kappa_max) + 4)?;
    let samples = sample_sphere(psi, r, basis.quadrature());
    let coeffs = basis.project(&samples.values);
    let truncation = basis.truncation_residual(&samples.values, &coeffs);
    if truncation > FACTORIZATION_TRUNCATION_TOL {
        return Err(Error::Truncation { residual: truncation, tolerance: FACTORIZATION_TRUNCATION_TOL });
    }
    let shifted: Vec<Complex64> = basis
        .channels()
        .iter()
        .zip(&coeffs)
        .map(|(ch, c)| c * (ch.kappa as f64 + 1.0))
        .collect();
    let k_plus_one = resum(basis.channels(), &shifted, xhat);
    let bracket = [dr[0] + k_plus_one[0] / r, dr[1] + k_plus_one[1] / r];
    let rhs = scale2(-I, &sigma_dot_apply(xhat, &bracket));
    Ok(norm2_sq(&sub2(&lhs, &rhs)).sqrt())
}

/// `|D_h‖f‖(r) - ‖f‖⁻¹(r) Re⟨f, ∂_r f⟩(r)|` with `D_h` the central
/// difference of the quadrature sphere norm. Where `‖f‖(r) = 0` the
/// derivative is taken to be 0.
pub fn sphere_norm_derivative_check<S: SpinorField + ?Sized>(
    f: &S,
    r: f64,
    h: f64,
    quad: &SphereQuadrature,
) -> Result<f64> {
    if !(r > 0.0) || !(h > 0.0) || h >= r {
        return Err(Error::InvalidArgument("need 0 < h < r".into()));
    }
    let norm_at = |rho: f64| sphere_norm(&sample_sphere(f, rho, quad).values, quad);
    let dh = (norm_at(r + h)? - norm_at(r - h)?) / (2.0 * h);
    let here = sample_sphere(f, r, quad);
    let n = sphere_norm(&here.values, quad)?;
    let derivative = if n > 0.0 {
        let radial: Vec<Spinor> = quad.nodes().iter().map(|&w| f.radial_derivative(scale3(r, w))).collect();
        let re: f64 = here
            .values
            .iter()
            .zip(&radial)
            .zip(quad.weights())
            .map(|((a, b), &w)| w * inner2(a, b).re)
            .sum();
        re / n
    } else {
        0.0
    };
    Ok((dh - derivative).abs())
}
