//! Smooth two-component spinor fields on R³.

use num_complex::Complex64;

use crate::linalg::{add3, axis, scale2, scale3, sub2, Spinor, Vec3, ZERO_SPINOR};

/// Step for the default fourth-order central-difference gradient.
pub const GRADIENT_STEP: f64 = 1e-3;

/// A spinor-valued function on R³ with (possibly numerical) first derivatives.
pub trait SpinorField: Send + Sync {
    fn value(&self, x: Vec3) -> Spinor;

    /// `[∂₁ψ, ∂₂ψ, ∂₃ψ]`; defaults to a fourth-order central difference.
    fn gradient(&self, x: Vec3) -> [Spinor; 3] {
        central_gradient(self, x, GRADIENT_STEP)
    }

    /// `x̂·∇ψ`.
    fn radial_derivative(&self, x: Vec3) -> Spinor {
        let r = crate::linalg::norm3(x);
        let g = self.gradient(x);
        let mut out = ZERO_SPINOR;
        for (j, gj) in g.iter().enumerate() {
            let c = Complex64::from(x[j] / r);
            out[0] += c * gj[0];
            out[1] += c * gj[1];
        }
        out
    }
}

/// Fourth-order central-difference gradient with step `h`.
pub fn central_gradient<S: SpinorField + ?Sized>(f: &S, x: Vec3, h: f64) -> [Spinor; 3] {
    let mut out = [ZERO_SPINOR; 3];
    for (j, slot) in out.iter_mut().enumerate() {
        let e = axis(j);
        let p1 = f.value(add3(x, scale3(h, e)));
        let m1 = f.value(add3(x, scale3(-h, e)));
        let p2 = f.value(add3(x, scale3(2.0 * h, e)));
        let m2 = f.value(add3(x, scale3(-2.0 * h, e)));
        let near = scale2(Complex64::from(8.0), &sub2(&p1, &m1));
        let far = sub2(&p2, &m2);
        *slot = scale2(Complex64::from(1.0 / (12.0 * h)), &sub2(&near, &far));
    }
    out
}

/// Spinor field from a closure; derivatives by finite differences.
pub struct FnSpinor<F>(pub F);

impl<F> SpinorField for FnSpinor<F>
where
    F: Fn(Vec3) -> Spinor + Send + Sync,
{
    fn value(&self, x: Vec3) -> Spinor {
        (self.0)(x)
    }
}

/// Spinor field from a value closure and a closed-form gradient closure.
pub struct AnalyticSpinor<F, G> {
    pub value: F,
    pub gradient: G,
}

impl<F, G> SpinorField for AnalyticSpinor<F, G>
where
    F: Fn(Vec3) -> Spinor + Send + Sync,
    G: Fn(Vec3) -> [Spinor; 3] + Send + Sync,
{
    fn value(&self, x: Vec3) -> Spinor {
        (self.value)(x)
    }

    fn gradient(&self, x: Vec3) -> [Spinor; 3] {
        (self.gradient)(x)
    }
}

impl<T: SpinorField + ?Sized> SpinorField for std::sync::Arc<T> {
    fn value(&self, x: Vec3) -> Spinor {
        (**self).value(x)
    }

    fn gradient(&self, x: Vec3) -> [Spinor; 3] {
        (**self).gradient(x)
    }
}

impl<T: SpinorField + ?Sized> SpinorField for &T {
    fn value(&self, x: Vec3) -> Spinor {
        (**self).value(x)
    }

    fn gradient(&self, x: Vec3) -> [Spinor; 3] {
        (**self).gradient(x)
    }
}
