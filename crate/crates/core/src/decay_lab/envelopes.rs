//! One step of the integral inequalities that improve decay envelopes of the
//! sphere norms `‖g₋‖²` and `‖ḡ₊‖² = r⁴‖g₊‖²`, given `‖g‖² ≤ C r^{-ε}` and
//! `‖σ_A(rω)‖ ≤ C_A r^{-1-α}` for `r ≥ r₁`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeTarget {
    SphereNormSqPlus,
    SphereNormSqMinus,
    BarPlus,
}

/// `bound(r) = c · r^{-exponent}` for `r ≥ valid_from`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayEnvelope {
    pub c: f64,
    pub exponent: f64,
    pub valid_from: f64,
    pub applies_to: EnvelopeTarget,
}

impl DecayEnvelope {
    pub fn new(c: f64, exponent: f64, valid_from: f64, applies_to: EnvelopeTarget) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() || !exponent.is_finite() || !(valid_from > 0.0) {
            return Err(Error::InvalidArgument("envelope needs finite C ≥ 0, finite exponent, valid_from > 0".into()));
        }
        Ok(Self { c, exponent, valid_from, applies_to })
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.c * r.powf(-self.exponent)
    }
}

/// Growth bound `‖ḡ₊‖²(r) ≤ coefficient · G(r) + boundary` with
/// `G(r) = r^k - r₁^k` for `k = growth_exponent ≠ 0` and `ln(r/r₁)` at `k = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthEnvelope {
    pub coefficient: f64,
    pub growth_exponent: f64,
    pub logarithmic: bool,
    pub boundary: f64,
    pub r1: f64,
}

impl GrowthEnvelope {
    pub fn eval(&self, r: f64) -> f64 {
        let g = if self.logarithmic {
            (r / self.r1).ln()
        } else {
            r.powf(self.growth_exponent) - self.r1.powf(self.growth_exponent)
        };
        self.coefficient * g + self.boundary
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropagatedEnvelopes {
    pub bar_plus: GrowthEnvelope,
    pub minus: DecayEnvelope,
}

/// `C` and `C_A` from the inputs, `ε` and `α` exponents, `r₁` the start of
/// validity, and `boundary = ‖ḡ₊‖²(r₁)` measured.
pub fn propagate_envelopes(c: f64, c_a: f64, eps: f64, alpha: f64, r1: f64, boundary: f64) -> Result<PropagatedEnvelopes> {
    if !(eps + alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("ε + α = {} must be positive", eps + alpha)));
    }
    if !(c >= 0.0 && c_a >= 0.0 && r1 > 0.0 && boundary >= 0.0) || ![c, c_a, eps, alpha, r1, boundary].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("envelope inputs must be finite and nonnegative with r₁ > 0".into()));
    }
    let k = 4.0 - eps - alpha;
    let logarithmic = k == 0.0;
    let bar_plus = GrowthEnvelope {
        coefficient: if logarithmic { 4.0 * c * c_a } else { 4.0 * c * c_a / k },
        growth_exponent: k,
        logarithmic,
        boundary,
        r1,
    };
    let minus = DecayEnvelope::new(2.0 * c * c_a / (eps + alpha), eps + alpha, r1, EnvelopeTarget::SphereNormSqMinus)?;
    Ok(PropagatedEnvelopes { bar_plus, minus })
}

/// Exact coefficients `(4CC_A/(4-ε-α), 2CC_A/(ε+α))`; the first is
/// `4CC_A` in the logarithmic case.
pub fn propagate_coefficients_exact(
    c: &BigRational,
    c_a: &BigRational,
    eps: &BigRational,
    alpha: &BigRational,
) -> Result<(BigRational, BigRational)> {
    let sum = eps + alpha;
    if !sum.is_positive() {
        return Err(Error::InvalidArgument(format!("ε + α = {sum} must be positive")));
    }
    let four = BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    let k = &four - &sum;
    let plus = if k.is_zero() { &four * c * c_a } else { &four * c * c_a / k };
    Ok((plus, two * c * c_a / sum))
}
