use std::sync::Arc;

use num_complex::Complex64;

use super::builtins::{FieldModel, LossYauSpinor};
use super::{FieldDecay, MagneticField, NumericalCurl, VectorField};
use crate::error::{Error, Result};
use crate::gauge::{GaugePotential, GaugeTag, PotentialDecay};
use crate::linalg::{fibonacci_sphere, inner2, norm2_sq, scale2, scale3, sub2, Spinor, Vec3};
use crate::spinor_calculus::pauli::sigma_apply;
use crate::spinor_calculus::{sigma_dot_apply, sigma_p, SpinorField};

#[derive(Clone, Debug)]
pub struct DeriveOptions {
    /// Points at which ψ is checked for vanishing and for pinnability.
    pub probes: Vec<Vec3>,
    /// Relative tolerance on `Im⟨ψ, σ·pψ⟩ / |ψ|²`.
    pub pin_tolerance: f64,
    /// Step of the fourth-order difference used for `B = curl A`.
    pub curl_step: f64,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        let mut probes = vec![[0.0; 3]];
        for r in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
            probes.extend(fibonacci_sphere(32).into_iter().map(|w| scale3(r, w)));
        }
        Self { probes, pin_tolerance: 1e-6, curl_step: 1e-3 }
    }
}

/// `A_j = Re⟨ψ, σ_j σ·p ψ⟩ / |ψ|²`, the unique real A with `σ·pψ = σ·A ψ`
/// whenever one exists.
pub struct PinnedPotential {
    pub spinor: Arc<dyn SpinorField>,
}

struct Pinning {
    psi: Spinor,
    sigma_p_psi: Spinor,
    norm_sq: f64,
}

impl PinnedPotential {
    fn pinning(&self, x: Vec3) -> Pinning {
        let psi = self.spinor.value(x);
        let sigma_p_psi = sigma_p(&self.spinor.gradient(x));
        Pinning { psi, sigma_p_psi, norm_sq: norm2_sq(&psi) }
    }

    /// `Im⟨ψ, σ·pψ⟩ / |ψ|²`; zero exactly when an A exists at x.
    pub fn defect(&self, x: Vec3) -> f64 {
        let p = self.pinning(x);
        inner2(&p.psi, &p.sigma_p_psi).im / p.norm_sq
    }
}

impl VectorField for PinnedPotential {
    fn value(&self, x: Vec3) -> Vec3 {
        let p = self.pinning(x);
        if p.norm_sq == 0.0 {
            return [f64::NAN; 3];
        }
        [0, 1, 2].map(|j| inner2(&p.psi, &sigma_apply(j, &p.sigma_p_psi)).re / p.norm_sq)
    }
}

/// A potential, its field, and a spinor annihilated by `σ·(p-A)`.
#[derive(Clone)]
pub struct ZeroModeTriple {
    pub potential: GaugePotential,
    pub field: MagneticField,
    pub spinor: Arc<dyn SpinorField>,
    pub seed: Spinor,
}

impl ZeroModeTriple {
    /// `|σ·(p-A)ψ(x)| / |ψ(x)|`.
    pub fn pointwise_residual(&self, x: Vec3) -> f64 {
        let psi = self.spinor.value(x);
        let lhs = sigma_p(&self.spinor.gradient(x));
        let rhs = sigma_dot_apply(self.potential.eval(x), &psi);
        (norm2_sq(&sub2(&lhs, &rhs)) / norm2_sq(&psi)).sqrt()
    }
}

impl std::fmt::Debug for ZeroModeTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZeroModeTriple")
            .field("potential", &self.potential)
            .field("field", &self.field)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

impl From<ZeroModeTriple> for FieldModel {
    fn from(t: ZeroModeTriple) -> Self {
        FieldModel { field: t.field, potential: Some(t.potential), spinor: Some(t.spinor) }
    }
}

/// Builds `(A, B = curl A, ψ)` from a nowhere-vanishing spinor by pinning A
/// pointwise. The spinor's `gradient` is the derivative oracle.
pub fn derive_pair_from_spinor(
    label: &str,
    spinor: Arc<dyn SpinorField>,
    opts: &DeriveOptions,
) -> Result<ZeroModeTriple> {
    if opts.probes.is_empty() {
        return Err(Error::InvalidArgument("no probe points".into()));
    }
    let values: Vec<Spinor> = opts.probes.iter().map(|&x| spinor.value(x)).collect();
    let scale = values.iter().map(norm2_sq).fold(0.0, f64::max);
    for (&x, v) in opts.probes.iter().zip(&values) {
        let n = norm2_sq(v);
        if !(n > 1e-24 * scale) {
            return Err(Error::VanishingSpinor { point: x });
        }
    }
    let pinned = PinnedPotential { spinor: spinor.clone() };
    for &x in &opts.probes {
        let p = pinned.pinning(x);
        let defect = inner2(&p.psi, &p.sigma_p_psi).im / p.norm_sq;
        let size = 1.0 + (norm2_sq(&p.sigma_p_psi) / p.norm_sq).sqrt();
        if defect.abs() > opts.pin_tolerance * size {
            return Err(Error::NotPinnable { point: x, defect });
        }
    }
    let origin = spinor.value([0.0; 3]);
    let seed = match norm2_sq(&origin).sqrt() {
        n if n > 0.0 => scale2(Complex64::from(1.0 / n), &origin),
        _ => values[0],
    };
    let potential: Arc<PinnedPotential> = Arc::new(pinned);
    let field = NumericalCurl { potential: potential.clone(), step: opts.curl_step };
    Ok(ZeroModeTriple {
        potential: GaugePotential::new(label, potential, GaugeTag::ClosedForm),
        field: MagneticField::new(label, Arc::new(field)),
        spinor,
        seed,
    })
}

/// The triple pinned by `(1+|x|²)^(-3/2)(I + iσ·x)φ₀`. A different seed only
/// rotates the fields, so the magnitudes `|A| = 3/(1+r²)` and
/// `|B| = 12/(1+r²)²` give the decay metadata.
pub fn loss_yau_derived(spinor: LossYauSpinor, opts: &DeriveOptions) -> Result<ZeroModeTriple> {
    let mut t = derive_pair_from_spinor("loss-yau-derived", Arc::new(spinor), opts)?;
    t.field.decay = Some(FieldDecay { c_b: 12.0, beta: 2.0, r0: 0.0 });
    t.potential.decay = Some(PotentialDecay { c_a: 3.0, alpha: 1.0, r1: 0.0 });
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_zoo::builtins::loss_yau;
    use crate::linalg::{norm3, sub3};
    use crate::spinor_calculus::FnSpinor;

    #[test]
    fn derived_loss_yau_matches_closed_form() {
        let t = loss_yau_derived(LossYauSpinor::default(), &DeriveOptions::default()).unwrap();
        let exact = loss_yau();
        let probes = [[0.5, -0.3, 1.1], [0.0, 0.0, 0.0], [2.0, 1.0, -3.0], [-0.2, 0.9, 0.4]];
        for x in probes {
            let a = t.potential.eval(x);
            let ae = exact.potential.as_ref().unwrap().eval(x);
            assert!(norm3(sub3(a, ae)) < 1e-13, "{a:?} {ae:?}");
            let b = t.field.eval(x);
            let be = exact.field.eval(x);
            assert!(norm3(sub3(b, be)) < 1e-8, "{b:?} {be:?}");
            assert!(t.pointwise_residual(x) < 1e-13);
        }
        let b0 = t.field.eval([0.0; 3]);
        assert!(norm3(sub3(b0, [0.0, 0.0, 12.0])) < 1e-8);
    }

    #[test]
    fn constant_spinor_gives_zero_fields() {
        let c = FnSpinor(|_| [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let t = derive_pair_from_spinor("const", Arc::new(c), &DeriveOptions::default()).unwrap();
        assert_eq!(t.potential.eval([0.3, 1.0, -2.0]), [0.0; 3]);
        assert_eq!(t.field.eval([0.3, 1.0, -2.0]), [0.0; 3]);
    }

    #[test]
    fn vanishing_spinor_rejected() {
        let psi = FnSpinor(|x: Vec3| [Complex64::new(x[0], 0.0), Complex64::new(x[1], x[2])]);
        let err = derive_pair_from_spinor("v", Arc::new(psi), &DeriveOptions::default()).unwrap_err();
        assert!(matches!(err, Error::VanishingSpinor { .. }), "{err}");
    }

    #[test]
    fn unpinnable_spinor_rejected() {
        // σ·pψ = -iψ for ψ = e^z (1, 0), so Im⟨ψ, σ·pψ⟩/|ψ|² = -1.
        let psi = FnSpinor(|x: Vec3| [Complex64::new(x[2].exp(), 0.0), Complex64::new(0.0, 0.0)]);
        let opts = DeriveOptions { probes: vec![[0.0; 3], [1.0, 0.5, -0.5]], ..Default::default() };
        let err = derive_pair_from_spinor("u", Arc::new(psi), &opts).unwrap_err();
        assert!(matches!(err, Error::NotPinnable { .. }), "{err}");
    }
}
