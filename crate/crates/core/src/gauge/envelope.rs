use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate_half_line, integrate_scalar, Tolerance};

/// Constants of the decay bound `|A(x)| ≤ envelope(|x|)` for `|x| ≥ r₁`.
///
/// `envelope` bounds `4π ∫ |B(y)| |x-y|^-2 dy`; the Biot–Savart potential
/// with the `1/4π` prefactor is bounded by `envelope / (16π²)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnvelopeConstants {
    #[serde(rename = "C_B")]
    pub c_b: f64,
    pub beta: f64,
    pub r0: f64,
    pub norm_b_32: f64,
    pub r1: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    /// `a` at which `a^β ∫_a^{1/2} k` is maximal.
    pub c1_argmax: f64,
    /// `C₁`, `C₂` recomputed with an independent rule.
    pub c1_check: f64,
    pub c2_check: f64,
}

/// Agreement required between the two rules for `C₁` and `C₂`.
pub const CONSTANT_CROSS_CHECK: f64 = 1e-8;

/// `t^(-β-1) ln((1+t)/|1-t|)`.
pub fn log_kernel(beta: f64, t: f64) -> f64 {
    let l = 2.0 * t.min(1.0 / t).atanh();
    t.powf(-beta - 1.0) * l
}

fn inner_adaptive(beta: f64, a: f64) -> f64 {
    let mut breaks = vec![a];
    let mut b = 2.0 * a;
    while b < 0.5 {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(0.5);
    integrate_scalar(|t| log_kernel(beta, t), &breaks, Tolerance::new(0.0, 1e-13)).0
}

/// `∫_a^{1/2} k` by Gauss–Legendre in `u = ln t`.
fn inner_log_gl(beta: f64, a: f64, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (lo, hi) = (a.ln(), 0.5f64.ln());
    let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    nodes.0.iter().zip(&nodes.1).map(|(&x, &w)| {
        let t = (c + h * x).exp();
        w * h * log_kernel(beta, t) * t
    }).sum()
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        if (hi - lo).abs() < 1e-12 * hi.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `C₁ = 2π sup_{a ∈ (0,1/2]} a^β ∫_a^{1/2} k(t) dt`, returned with its maximizer.
fn c1_constant(beta: f64) -> (f64, f64) {
    // sup over a in log space: scan, then refine around the best sample
    let lo_exp = -30.0f64;
    let n = 240;
    let grid: Vec<f64> = (0..=n).map(|i| lo_exp + (0.5f64.ln() - lo_exp) * i as f64 / n as f64).collect();
    let g = |u: f64| {
        let a = u.exp();
        a.powf(beta) * inner_adaptive(beta, a)
    };
    let vals: Vec<f64> = grid.iter().map(|&u| g(u)).collect();
    let best = vals.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).map(|(i, _)| i).unwrap();
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(n)];
    let u = golden_max(g, lo, hi);
    (2.0 * PI * g(u), u.exp())
}

/// `C₂ = 2π ∫_{1/2}^∞ k(t) dt`.
fn c2_adaptive(beta: f64) -> Result<f64> {
    let est = integrate_half_line(|t| [log_kernel(beta, t)], &[0.5, 0.75, 1.0, 1.5, 2.0], Tolerance::new(0.0, 1e-13))?;
    Ok(2.0 * PI * est.value[0])
}

/// `C₂` by fixed Gauss–Legendre rules after substitutions that remove the
/// logarithmic singularity at `t = 1` and map the tail to a finite range.
fn c2_substituted(beta: f64) -> f64 {
    let (x, w) = gauss_legendre(200);
    let on_unit = |f: &dyn Fn(f64) -> f64| -> f64 { x.iter().zip(&w).map(|(&x, &w)| 0.5 * w * f(0.5 * (x + 1.0))).sum() };
    // t = 1 - v³/2 on [1/2, 1]; t = 1 + v³ on [1, 2]
    let left = on_unit(&|v| 1.5 * v * v * log_kernel(beta, 1.0 - 0.5 * v * v * v));
    let right = on_unit(&|v| 3.0 * v * v * log_kernel(beta, 1.0 + v * v * v));
    // t = 2 e^y on [2, ∞): integrand decays like e^(-(β+1)y)
    let span = 60.0 / (beta + 1.0);
    let (xt, wt) = gauss_legendre(400);
    let tail: f64 = xt.iter().zip(&wt).map(|(&x, &w)| {
        let y = 0.5 * span * (x + 1.0);
        let t = 2.0 * y.exp();
        0.5 * span * w * log_kernel(beta, t) * t
    }).sum();
    2.0 * PI * (left + right + tail)
}

pub fn potential_envelope(c_b: f64, beta: f64, r0: f64, norm_b_32: f64) -> Result<EnvelopeConstants> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Hypothesis(format!("decay exponent beta must be positive, got {beta}")));
    }
    for (name, v) in [("C_B", c_b), ("r0", r0), ("norm_B_32", norm_b_32)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    let r1 = (2.0 * r0).powi(2).max(1.0);
    let alpha = (beta / 2.0).min(0.5);
    let (c1, c1_argmax) = c1_constant(beta);
    let gl = gauss_legendre(128);
    let c1_check = 2.0 * PI * c1_argmax.powf(beta) * inner_log_gl(beta, c1_argmax, &gl);
    let c2 = c2_adaptive(beta)?;
    let c2_check = c2_substituted(beta);
    for (v, check) in [(c1, c1_check), (c2, c2_check)] {
        let err = (v - check).abs();
        if err > CONSTANT_CROSS_CHECK * v.abs() {
            return Err(Error::QuadratureTolerance { error: err, tolerance: CONSTANT_CROSS_CHECK * v.abs() });
        }
    }
    Ok(EnvelopeConstants { c_b, beta, r0, norm_b_32, r1, alpha, c1, c2, c1_argmax, c1_check, c2_check })
}

impl EnvelopeConstants {
    pub fn r_x(&self, r: f64) -> f64 {
        r.sqrt() / 2.0
    }

    /// `4π ‖B‖_{3/2} (2⁵π/3)^(1/3) r^(-3/2)`.
    pub fn near_term(&self, r: f64) -> f64 {
        4.0 * PI * self.norm_b_32 * (32.0 * PI / 3.0).cbrt() * r.powf(-1.5)
    }

    /// `4π C_B (C₁ 2^β r^(-1-β/2) + C₂ r^(-1-β))`.
    pub fn far_term(&self, r: f64) -> f64 {
        let b = self.beta;
        4.0 * PI * self.c_b * (self.c1 * 2f64.powf(b) * r.powf(-1.0 - b / 2.0) + self.c2 * r.powf(-1.0 - b))
    }

    pub fn envelope(&self, r: f64) -> f64 {
        self.near_term(r) + self.far_term(r)
    }

    /// Bound on the `1/4π`-normalized Biot–Savart potential.
    pub fn envelope_biot_savart(&self, r: f64) -> f64 {
        self.envelope(r) / (16.0 * PI * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_and_exponent() {
        let c = potential_envelope(1.0, 2.0, 3.0, 1.0).unwrap();
        assert_eq!((c.r1, c.alpha), (36.0, 0.5));
        let c = potential_envelope(1.0, 0.2, 0.0, 1.0).unwrap();
        assert_eq!(c.r1, 1.0);
        assert!((c.alpha - 0.1).abs() < 1e-16);
        assert!(matches!(potential_envelope(1.0, 0.0, 0.0, 1.0), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn kernel_matches_log_form() {
        for t in [0.01f64, 0.3, 0.99, 1.01, 2.5, 40.0] {
            let direct = t.powf(-3.0) * ((1.0 + t) / (1.0 - t).abs()).ln();
            assert!((log_kernel(2.0, t) - direct).abs() < 1e-12 * direct.abs());
        }
    }

    #[test]
    fn constants_match_high_precision_values() {
        // 30-digit reference quadrature
        let table = [
            (2.0, 1.64364685890479644, 22.9205475000287809),
            (0.2, 4.33939960580579603, 22.8100336868101962),
            (1.0, 2.40371421842026494, 20.7083537713392160),
            (4.0, 1.04387104032457079, 40.5462079309263884),
        ];
        for (beta, c1, c2) in table {
            let c = potential_envelope(1.0, beta, 0.0, 1.0).unwrap();
            assert!((c.c1 - c1).abs() < 1e-11 * c1, "beta {beta}: C1 {} vs {c1}", c.c1);
            assert!((c.c2 - c2).abs() < 1e-11 * c2, "beta {beta}: C2 {} vs {c2}", c.c2);
        }
    }

    #[test]
    fn c1_is_a_supremum() {
        let c = potential_envelope(1.0, 2.0, 0.0, 0.0).unwrap();
        for a in [1e-4, 1e-2, 0.05, 0.1, 0.2, 0.4] {
            assert!(2.0 * PI * a * a * inner_adaptive(2.0, a) <= c.c1 * (1.0 + 1e-12));
        }
    }
}
