use std::sync::Arc;

use num_complex::Complex64;

use super::{FieldDecay, FnField, MagneticField};
use crate::error::{Error, Result};
use crate::gauge::{GaugePotential, GaugeTag, PotentialDecay};
use crate::linalg::{add2, dot3, norm2_sq, scale2, Spinor, Vec3, I};
use crate::spinor_calculus::{sigma_dot_apply, SpinorField};

pub const BUILTIN_LABELS: [&str; 5] = ["gaussian-swirl", "rational-swirl", "loss-yau", "loss-yau-derived", "zero"];

/// A magnetic field together with whatever exact companions are known for it.
#[derive(Clone)]
pub struct FieldModel {
    pub field: MagneticField,
    pub potential: Option<GaugePotential>,
    pub spinor: Option<Arc<dyn SpinorField>>,
}

impl FieldModel {
    pub fn label(&self) -> &str {
        &self.field.label
    }
}

impl std::fmt::Debug for FieldModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldModel")
            .field("field", &self.field)
            .field("potential", &self.potential)
            .field("spinor", &self.spinor.is_some())
            .finish()
    }
}

/// `A = c e^(-r²)(-y, x, 0)` and its curl.
pub fn gaussian_swirl(amplitude: f64) -> FieldModel {
    let c = amplitude;
    let a = move |x: Vec3| {
        let g = c * (-dot3(x, x)).exp();
        [-g * x[1], g * x[0], 0.0]
    };
    let b = move |x: Vec3| {
        let g = c * (-dot3(x, x)).exp();
        let rho2 = x[0] * x[0] + x[1] * x[1];
        [2.0 * x[0] * x[2] * g, 2.0 * x[1] * x[2] * g, 2.0 * g * (1.0 - rho2)]
    };
    // max_t 2 e^(-t)(1+t) t² ≈ 3.63 bounds |B| r⁴.
    let decay = FieldDecay { c_b: 4.0 * c.abs(), beta: 2.0, r0: 0.0 };
    FieldModel {
        field: MagneticField::new("gaussian-swirl", Arc::new(FnField(b))).with_decay(decay),
        potential: Some(GaugePotential::new("gaussian-swirl", Arc::new(FnField(a)), GaugeTag::ClosedForm)),
        spinor: None,
    }
}

/// `A = c (1+r²)^(-s) (-y, x, 0)` and its curl; Coulomb gauge.
pub fn rational_swirl(s: f64, amplitude: f64) -> Result<FieldModel> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("rational-swirl exponent must be positive, got {s}")));
    }
    let c = amplitude;
    let a = move |x: Vec3| {
        let f = c * (1.0 + dot3(x, x)).powf(-s);
        [-f * x[1], f * x[0], 0.0]
    };
    let b = move |x: Vec3| {
        let q = 1.0 + dot3(x, x);
        let f = c * q.powf(-s);
        let fr = -2.0 * s * f / q;
        let rho2 = x[0] * x[0] + x[1] * x[1];
        [-x[0] * x[2] * fr, -x[1] * x[2] * fr, 2.0 * f + rho2 * fr]
    };
    let mut field = MagneticField::new("rational-swirl", Arc::new(FnField(b)));
    let mut potential = GaugePotential::new("rational-swirl", Arc::new(FnField(a)), GaugeTag::ClosedForm);
    if s > 1.0 {
        // |B| ≤ 2|c| max(1, s-1) (1+r²)^(-s) and |A| ≤ |c| r (1+r²)^(-s).
        field = field.with_decay(FieldDecay { c_b: 2.0 * c.abs() * (s - 1.0).max(1.0), beta: 2.0 * s - 2.0, r0: 1.0 });
        potential = potential.with_decay(PotentialDecay { c_a: c.abs(), alpha: 2.0 * s - 2.0, r1: 0.0 });
    }
    Ok(FieldModel { field, potential: Some(potential), spinor: None })
}

/// `ψ(x) = (1+|x|²)^(-3/2) (I + iσ·x) φ₀`, with closed-form gradient.
#[derive(Clone, Copy, Debug)]
pub struct LossYauSpinor {
    pub seed: Spinor,
}

impl LossYauSpinor {
    /// Normalizes `seed`.
    pub fn new(seed: Spinor) -> Result<Self> {
        let n = norm2_sq(&seed).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("seed spinor must be nonzero".into()));
        }
        Ok(Self { seed: scale2(Complex64::from(1.0 / n), &seed) })
    }

    fn core(&self, x: Vec3) -> Spinor {
        add2(&self.seed, &scale2(I, &sigma_dot_apply(x, &self.seed)))
    }
}

impl Default for LossYauSpinor {
    fn default() -> Self {
        Self { seed: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)] }
    }
}

impl SpinorField for LossYauSpinor {
    fn value(&self, x: Vec3) -> Spinor {
        let f = (1.0 + dot3(x, x)).powf(-1.5);
        scale2(Complex64::from(f), &self.core(x))
    }

    fn gradient(&self, x: Vec3) -> [Spinor; 3] {
        let q = 1.0 + dot3(x, x);
        let f = q.powf(-1.5);
        let df = -3.0 * q.powf(-2.5);
        let core = self.core(x);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 3];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut e = [0.0; 3];
            e[j] = 1.0;
            let dcore = scale2(I, &sigma_dot_apply(e, &self.seed));
            *slot = add2(&scale2(Complex64::from(df * x[j]), &core), &scale2(Complex64::from(f), &dcore));
        }
        out
    }
}

pub fn loss_yau_spinor() -> LossYauSpinor {
    LossYauSpinor::default()
}

/// Closed-form potential and field pinned by [`LossYauSpinor`] with seed (1, 0):
/// `A = 3(2(xz-y), 2(x+yz), 1+z²-x²-y²)/(1+r²)²`, `B = 4A/(1+r²)`,
/// `|A| = 3/(1+r²)`, `|B| = 12/(1+r²)²`.
pub fn loss_yau() -> FieldModel {
    fn a(x: Vec3) -> Vec3 {
        let q = 1.0 + dot3(x, x);
        let s = 3.0 / (q * q);
        [
            s * 2.0 * (x[0] * x[2] - x[1]),
            s * 2.0 * (x[0] + x[1] * x[2]),
            s * (1.0 + x[2] * x[2] - x[0] * x[0] - x[1] * x[1]),
        ]
    }
    let b = |x: Vec3| {
        let s = 4.0 / (1.0 + dot3(x, x));
        let v = a(x);
        [s * v[0], s * v[1], s * v[2]]
    };
    FieldModel {
        field: MagneticField::new("loss-yau", Arc::new(FnField(b)))
            .with_decay(FieldDecay { c_b: 12.0, beta: 2.0, r0: 0.0 }),
        potential: Some(
            GaugePotential::new("loss-yau", Arc::new(FnField(a)), GaugeTag::ClosedForm)
                .with_decay(PotentialDecay { c_a: 3.0, alpha: 1.0, r1: 0.0 }),
        ),
        spinor: Some(Arc::new(LossYauSpinor::default())),
    }
}

pub fn zero_field() -> FieldModel {
    FieldModel {
        field: MagneticField::new("zero", Arc::new(FnField(|_| [0.0; 3])))
            .with_decay(FieldDecay { c_b: 0.0, beta: 2.0, r0: 0.0 }),
        potential: Some(GaugePotential::zero()),
        spinor: None,
    }
}

/// Built-in field by label with default parameters.
pub fn builtin(label: &str) -> Result<FieldModel> {
    match super::normalize_label(label).as_str() {
        "gaussian-swirl" => Ok(gaussian_swirl(1.0)),
        "rational-swirl" => rational_swirl(2.0, 1.0),
        "loss-yau" => Ok(loss_yau()),
        "loss-yau-derived" => super::loss_yau_derived(LossYauSpinor::default(), &Default::default()).map(Into::into),
        "zero" => Ok(zero_field()),
        _ => Err(Error::UnknownField(label.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_zoo::{curl_fourth_order, divergence_fd};
    use crate::linalg::{norm3, sub3};

    fn probes() -> Vec<Vec3> {
        vec![[0.5, -0.3, 1.1], [1.2, 0.7, -0.4], [-2.0, 0.1, 0.3], [0.05, 0.02, -0.01], [3.0, -2.5, 1.5]]
    }

    #[test]
    fn closed_form_fields_are_curls_of_their_potentials() {
        for model in [gaussian_swirl(1.3), rational_swirl(2.0, 0.7).unwrap(), rational_swirl(3.5, 1.0).unwrap(), loss_yau()] {
            let a = model.potential.as_ref().unwrap();
            for x in probes() {
                let c = curl_fourth_order(a, x, 1e-3);
                let b = model.field.eval(x);
                assert!(norm3(sub3(c, b)) < 1e-9 * (1.0 + norm3(b)), "{} at {x:?}: {c:?} vs {b:?}", model.label());
            }
        }
    }

    #[test]
    fn oracle_values() {
        let g = gaussian_swirl(1.0);
        assert_eq!(g.field.eval([0.0; 3]), [0.0, 0.0, 2.0]);
        let a = g.potential.unwrap().eval([1.0, 0.0, 0.0]);
        assert!((a[1] - (-1f64).exp()).abs() < 1e-16 && a[0] == 0.0);

        let ly = loss_yau();
        assert_eq!(ly.field.eval([0.0; 3]), [0.0, 0.0, 12.0]);
        let b = ly.field.eval([0.5, -0.3, 1.1]);
        let expect = [1.2302960399846213, 0.24605920799692426, 1.3533256439830834];
        assert!(norm3(sub3(b, expect)) < 1e-14, "{b:?}");
        let a = ly.potential.unwrap().eval([0.5, -0.3, 1.1]);
        let expect = [0.78431372549019608, 0.15686274509803922, 0.86274509803921569];
        assert!(norm3(sub3(a, expect)) < 1e-14, "{a:?}");
    }

    #[test]
    fn loss_yau_magnitudes() {
        let ly = loss_yau();
        let psi = LossYauSpinor::default();
        for x in probes() {
            let q = 1.0 + dot3(x, x);
            assert!((norm3(ly.potential.as_ref().unwrap().eval(x)) - 3.0 / q).abs() < 1e-14);
            assert!((norm3(ly.field.eval(x)) - 12.0 / (q * q)).abs() < 1e-13);
            assert!((norm2_sq(&psi.value(x)).sqrt() - 1.0 / q).abs() < 1e-15);
        }
    }

    #[test]
    fn loss_yau_gradient_matches_differences() {
        let psi = LossYauSpinor::new([Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.8)]).unwrap();
        for x in probes() {
            let exact = psi.gradient(x);
            let fd = crate::spinor_calculus::field::central_gradient(&psi, x, 1e-3);
            for j in 0..3 {
                for c in 0..2 {
                    assert!((exact[j][c] - fd[j][c]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn divergence_free_at_second_order() {
        for model in [gaussian_swirl(1.0), rational_swirl(2.0, 1.0).unwrap(), loss_yau()] {
            for x in probes() {
                let d1 = divergence_fd(&model.field, x, 0.02).abs();
                let d2 = divergence_fd(&model.field, x, 0.01).abs();
                assert!(d2 < 1e-3, "{}: {d2}", model.label());
                if d1 > 1e-9 {
                    assert!((d1 / d2 - 4.0).abs() < 0.2, "{}: ratio {}", model.label(), d1 / d2);
                }
            }
        }
    }
}
