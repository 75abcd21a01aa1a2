//! Three-vectors and two-component spinors as plain arrays.

use num_complex::Complex64;

pub type Vec3 = [f64; 3];
pub type Spinor = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

pub const ZERO_SPINOR: Spinor = [Complex64::new(0.0, 0.0); 2];
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale3(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn axis(j: usize) -> Vec3 {
    let mut e = [0.0; 3];
    e[j] = 1.0;
    e
}

/// Orthonormal frame whose third vector is `n` (normalized).
pub fn frame_from_axis(n: Vec3) -> [Vec3; 3] {
    let nn = norm3(n);
    let e3 = if nn > 0.0 { scale3(1.0 / nn, n) } else { [0.0, 0.0, 1.0] };
    let helper = if e3[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = cross3(helper, e3);
    let e1 = scale3(1.0 / norm3(e1), e1);
    let e2 = cross3(e3, e1);
    [e1, e2, e3]
}

#[inline]
pub fn spinor(a: Complex64, b: Complex64) -> Spinor {
    [a, b]
}

/// `<a, b>` in C², antilinear in the first slot.
#[inline]
pub fn inner2(a: &Spinor, b: &Spinor) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

#[inline]
pub fn norm2_sq(a: &Spinor) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr()
}

#[inline]
pub fn add2(a: &Spinor, b: &Spinor) -> Spinor {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub2(a: &Spinor, b: &Spinor) -> Spinor {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale2(s: Complex64, a: &Spinor) -> Spinor {
    [s * a[0], s * a[1]]
}

#[inline]
pub fn mat2_apply(m: &Mat2, v: &Spinor) -> Spinor {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Largest singular value of a 2×2 complex matrix.
pub fn mat2_opnorm(m: &Mat2) -> f64 {
    // eigenvalues of M^*M from trace and determinant
    let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    (0.5 * tr + disc).max(0.0).sqrt()
}

/// `n` nearly uniform unit vectors on a Fibonacci spiral.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let s = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [s * phi.cos(), s * phi.sin(), z]
        })
        .collect()
}
