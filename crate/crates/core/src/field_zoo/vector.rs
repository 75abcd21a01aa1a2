use std::sync::Arc;

use crate::linalg::{add3, axis, scale3, sub3, Vec3};

/// A vector field on R³.
pub trait VectorField: Send + Sync {
    fn value(&self, x: Vec3) -> Vec3;
}

/// Vector field from a closure.
pub struct FnField<F>(pub F);

impl<F> VectorField for FnField<F>
where
    F: Fn(Vec3) -> Vec3 + Send + Sync,
{
    fn value(&self, x: Vec3) -> Vec3 {
        (self.0)(x)
    }
}

impl<T: VectorField + ?Sized> VectorField for Arc<T> {
    fn value(&self, x: Vec3) -> Vec3 {
        (**self).value(x)
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn value(&self, x: Vec3) -> Vec3 {
        (**self).value(x)
    }
}

/// `c · F`.
pub struct Scaled<T> {
    pub factor: f64,
    pub inner: T,
}

impl<T: VectorField> VectorField for Scaled<T> {
    fn value(&self, x: Vec3) -> Vec3 {
        scale3(self.factor, self.inner.value(x))
    }
}

/// `J[i][j] = ∂_j F_i` by second-order central differences.
pub fn jacobian_central<F: VectorField + ?Sized>(f: &F, x: Vec3, h: f64) -> [[f64; 3]; 3] {
    let mut jac = [[0.0; 3]; 3];
    for j in 0..3 {
        let e = scale3(h, axis(j));
        let d = sub3(f.value(add3(x, e)), f.value(sub3(x, e)));
        for i in 0..3 {
            jac[i][j] = d[i] / (2.0 * h);
        }
    }
    jac
}

/// `J[i][j] = ∂_j F_i` by fourth-order central differences.
pub fn jacobian_fourth_order<F: VectorField + ?Sized>(f: &F, x: Vec3, h: f64) -> [[f64; 3]; 3] {
    let mut jac = [[0.0; 3]; 3];
    for j in 0..3 {
        let e = axis(j);
        let p1 = f.value(add3(x, scale3(h, e)));
        let m1 = f.value(add3(x, scale3(-h, e)));
        let p2 = f.value(add3(x, scale3(2.0 * h, e)));
        let m2 = f.value(add3(x, scale3(-2.0 * h, e)));
        for i in 0..3 {
            jac[i][j] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
        }
    }
    jac
}

fn curl_of(jac: [[f64; 3]; 3]) -> Vec3 {
    [jac[2][1] - jac[1][2], jac[0][2] - jac[2][0], jac[1][0] - jac[0][1]]
}

/// Second-order central-difference curl.
pub fn curl_central<F: VectorField + ?Sized>(f: &F, x: Vec3, h: f64) -> Vec3 {
    curl_of(jacobian_central(f, x, h))
}

/// Fourth-order central-difference curl.
pub fn curl_fourth_order<F: VectorField + ?Sized>(f: &F, x: Vec3, h: f64) -> Vec3 {
    curl_of(jacobian_fourth_order(f, x, h))
}

/// Second-order central-difference divergence.
pub fn divergence_fd<F: VectorField + ?Sized>(f: &F, x: Vec3, h: f64) -> f64 {
    let j = jacobian_central(f, x, h);
    j[0][0] + j[1][1] + j[2][2]
}

/// Fourth-order curl evaluated lazily; used for fields derived from potentials
/// that have no closed-form derivatives. The step is `step · max(1, |x|)`,
/// which keeps rounding noise decaying with the field far out.
pub struct NumericalCurl<T> {
    pub potential: T,
    pub step: f64,
}

impl<T: VectorField> VectorField for NumericalCurl<T> {
    fn value(&self, x: Vec3) -> Vec3 {
        curl_fourth_order(&self.potential, x, self.step * crate::linalg::norm3(x).max(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curl_of_linear_rotation() {
        let f = FnField(|x: Vec3| [-x[1], x[0], 0.0]);
        let c = curl_central(&f, [0.3, 0.2, -1.0], 0.1);
        assert!((c[2] - 2.0).abs() < 1e-12 && c[0].abs() < 1e-12 && c[1].abs() < 1e-12);
        assert!(divergence_fd(&f, [1.0, 2.0, 3.0], 0.1).abs() < 1e-12);
    }

    #[test]
    fn fourth_order_beats_second_order() {
        let f = FnField(|x: Vec3| [x[1].sin() * x[2], x[0].exp(), (x[0] * x[1]).cos()]);
        let x: Vec3 = [0.4, -0.7, 0.9];
        let exact = [-x[0] * (x[0] * x[1]).sin(), x[1].sin() + x[1] * (x[0] * x[1]).sin(), x[0].exp() - x[1].cos() * x[2]];
        let c2 = curl_central(&f, x, 1e-2);
        let c4 = curl_fourth_order(&f, x, 1e-2);
        let e2 = crate::linalg::norm3(sub3(c2, exact));
        let e4 = crate::linalg::norm3(sub3(c4, exact));
        assert!(e4 < 1e-8 && e2 > 10.0 * e4, "{e2} {e4}");
    }
}
