//! Pauli matrices and the σ·v map.

use num_complex::Complex64;

use crate::linalg::{Mat2, Spinor, Vec3, I};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn sigma(j: usize) -> Mat2 {
    match j {
        0 => [[ZERO, ONE], [ONE, ZERO]],
        1 => [[ZERO, -I], [I, ZERO]],
        2 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index {j} out of range"),
    }
}

/// `v₁σ₁ + v₂σ₂ + v₃σ₃` for a complex three-vector.
pub fn sigma_dot(v: [Complex64; 3]) -> Mat2 {
    [[v[2], v[0] - I * v[1]], [v[0] + I * v[1], -v[2]]]
}

pub fn sigma_dot_real(v: Vec3) -> Mat2 {
    sigma_dot([v[0].into(), v[1].into(), v[2].into()])
}

#[inline]
pub fn sigma_apply(j: usize, s: &Spinor) -> Spinor {
    match j {
        0 => [s[1], s[0]],
        1 => [-I * s[1], I * s[0]],
        _ => [s[0], -s[1]],
    }
}

#[inline]
pub fn sigma_dot_apply(v: Vec3, s: &Spinor) -> Spinor {
    let lo = Complex64::new(v[0], -v[1]);
    let hi = Complex64::new(v[0], v[1]);
    [v[2] * s[0] + lo * s[1], hi * s[0] - v[2] * s[1]]
}

/// `σ·p ψ = -i Σ σ_j ∂_j ψ` from the Cartesian gradient of ψ.
#[inline]
pub fn sigma_p(grad: &[Spinor; 3]) -> Spinor {
    let [dx, dy, dz] = grad;
    // σ·∇ψ, then multiply by -i
    let up = dz[0] + dx[1] - I * dy[1];
    let down = dx[0] + I * dy[0] - dz[1];
    [-I * up, -I * down]
}
