//! Spherical spinors `Ω_{κ,m}`: joint eigenfunctions of `J², J_z` and
//! `K = -1 - σ·L` on L²(S², C²).
//!
//! Convention: `j = |κ| - 1/2`, orbital `l = κ` for κ > 0 and `l = -κ - 1`
//! for κ < 0, coupled as `Σ_μ ⟨l, m-μ; 1/2, μ | j, m⟩ Y_{l,m-μ} χ_μ` with
//! Condon–Shortley harmonics. Constant spinors live in κ = -1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::harmonics::{clebsch_gordan, spherical_harmonic};
use crate::error::{Error, Result};
use crate::linalg::{Spinor, Vec3};

/// One partial-wave channel `(κ, m)`, with `m` stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Channel {
    pub kappa: i32,
    pub two_m: i32,
}

impl Channel {
    pub fn new(kappa: i32, two_m: i32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidArgument("kappa = 0 is not a K eigenvalue".into()));
        }
        if two_m % 2 == 0 || two_m.abs() > 2 * kappa.abs() - 1 {
            return Err(Error::InvalidArgument(format!(
                "m = {}/2 is not allowed for kappa = {kappa}",
                two_m
            )));
        }
        Ok(Self { kappa, two_m })
    }

    pub fn two_j(&self) -> i32 {
        2 * self.kappa.abs() - 1
    }

    pub fn l(&self) -> i32 {
        if self.kappa > 0 {
            self.kappa
        } else {
            -self.kappa - 1
        }
    }

    pub fn m(&self) -> f64 {
        self.two_m as f64 / 2.0
    }

    pub fn is_positive(&self) -> bool {
        self.kappa > 0
    }
}

/// Every channel with `|κ| ≤ kappa_max`, ordered κ = -1, 1, -2, 2, … and
/// ascending m within each κ.
pub fn channels_up_to(kappa_max: i32) -> Vec<Channel> {
    let mut out = Vec::new();
    for k in 1..=kappa_max {
        for kappa in [-k, k] {
            for two_m in (-(2 * k - 1)..=(2 * k - 1)).step_by(2) {
                out.push(Channel { kappa, two_m });
            }
        }
    }
    out
}

/// `Ω_{κ,m}(ω)` for a unit vector ω.
pub fn spherical_spinor(kappa: i32, two_m: i32, omega: Vec3) -> Result<Spinor> {
    let ch = Channel::new(kappa, two_m)?;
    Ok(eval_channel(ch, omega))
}

pub(crate) fn eval_channel(ch: Channel, omega: Vec3) -> Spinor {
    let l = ch.l();
    let two_j = ch.two_j();
    let mut out = [Complex64::new(0.0, 0.0); 2];
    // μ = +1/2 fills the upper component, μ = -1/2 the lower one
    for (slot, two_mu) in [(0usize, 1i32), (1, -1)] {
        let two_ml = ch.two_m - two_mu;
        if two_ml.abs() > 2 * l {
            continue;
        }
        let c = clebsch_gordan(2 * l, two_ml, 1, two_mu, two_j, ch.two_m);
        if c != 0.0 {
            out[slot] = c * spherical_harmonic(l, two_ml / 2, omega);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner2;
    use crate::quadrature::SphereQuadrature;
    use std::f64::consts::PI;

    #[test]
    fn kappa_minus_one_is_constant() {
        let c = (4.0 * PI).sqrt().recip();
        for w in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [-0.36, 0.48, -0.8]] {
            let s = spherical_spinor(-1, 1, w).unwrap();
            assert!((s[0].re - c).abs() < 1e-15 && s[0].im.abs() < 1e-15);
            assert!(s[1].norm() < 1e-15);
        }
    }

    #[test]
    fn invalid_channels_rejected() {
        assert!(spherical_spinor(0, 1, [0.0, 0.0, 1.0]).is_err());
        assert!(spherical_spinor(1, 3, [0.0, 0.0, 1.0]).is_err());
        assert!(spherical_spinor(2, 0, [0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn channel_counting() {
        let ch = channels_up_to(3);
        assert_eq!(ch.len(), 2 * 3 * 4);
        assert!(ch.iter().all(|c| c.kappa != 0));
    }

    #[test]
    fn orthonormal_at_sufficient_degree() {
        // l ≤ 4 for |κ| ≤ 4, so degree 9 integrates every product exactly
        let q = SphereQuadrature::new(9);
        let chans = channels_up_to(4);
        for a in &chans {
            for b in &chans {
                let s: Complex64 = q
                    .nodes()
                    .iter()
                    .zip(q.weights())
                    .map(|(&w, &wt)| wt * inner2(&eval_channel(*a, w), &eval_channel(*b, w)))
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((s - expect).norm() < 1e-12, "{a:?} {b:?} {s}");
            }
        }
    }
}
