//! One-dimensional adaptive Gauss–Kronrod integration, Gauss–Legendre rules,
//! product rules on the unit sphere, and half-line integrals with power-law
//! tail extrapolation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec3;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-9)
    }
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_intervals: 4000 }
    }

    fn target(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[inline]
fn max_abs<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn gk15<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> ([f64; N], f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    for c in 0..N {
        kronrod[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
    }
    for (k, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let f1 = f(center - half * x);
        let f2 = f(center + half * x);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kronrod[c] += w * s;
            if k % 2 == 1 {
                gauss[c] += WG[k / 2] * s;
            }
        }
    }
    let mut err = 0.0_f64;
    for c in 0..N {
        kronrod[c] *= half;
        gauss[c] *= half;
        err = err.max((kronrod[c] - gauss[c]).abs());
    }
    (kronrod, err)
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

/// Globally adaptive G7–K15 integration of a vector-valued integrand over
/// consecutive intervals given by `breakpoints` (at least two, increasing).
pub fn integrate<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: F,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Estimate<N> {
    assert!(breakpoints.len() >= 2, "need at least one interval");
    let mut pieces: Vec<Piece<N>> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (value, error) = gk15(&f, w[0], w[1]);
            Piece { a: w[0], b: w[1], value, error }
        })
        .collect();
    let mut evaluations = 15 * pieces.len();
    let summarize = |pieces: &[Piece<N>]| {
        let mut total = [0.0; N];
        let mut err = 0.0;
        for p in pieces {
            for c in 0..N {
                total[c] += p.value[c];
            }
            err += p.error;
        }
        (total, err)
    };
    loop {
        let (total, err) = summarize(&pieces);
        if err <= tol.target(max_abs(&total)) {
            return Estimate { value: total, error: err, evaluations, converged: true };
        }
        if pieces.len() >= tol.max_intervals {
            return Estimate { value: total, error: err, evaluations, converged: false };
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let Piece { a, b, .. } = pieces[worst];
        let mid = 0.5 * (a + b);
        if !(mid > a && mid < b) {
            return Estimate { value: total, error: err, evaluations, converged: false };
        }
        let (v1, e1) = gk15(&f, a, mid);
        let (v2, e2) = gk15(&f, mid, b);
        evaluations += 30;
        pieces[worst] = Piece { a, b: mid, value: v1, error: e1 };
        pieces.insert(worst + 1, Piece { a: mid, b, value: v2, error: e2 });
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], tol: Tolerance) -> (f64, f64) {
    let est = integrate(|x| [f(x)], breakpoints, tol);
    (est.value[0], est.error)
}

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on S²: Gauss–Legendre in cos θ and the trapezoid rule in φ.
///
/// Integrates every spherical harmonic of degree ≤ `degree` exactly.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    degree: usize,
    n_polar: usize,
    n_azimuth: usize,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(degree: usize) -> Self {
        let n_polar = degree / 2 + 1;
        let n_azimuth = degree + 1;
        let (cos_nodes, cos_weights) = gauss_legendre(n_polar);
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        let dphi = 2.0 * PI / n_azimuth as f64;
        for (&ct, &wt) in cos_nodes.iter().zip(&cos_weights) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for k in 0..n_azimuth {
                let phi = dphi * k as f64;
                nodes.push([st * phi.cos(), st * phi.sin(), ct]);
                weights.push(wt * dphi);
            }
        }
        Self { degree, n_polar, n_azimuth, nodes, weights }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_polar, self.n_azimuth)
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(Vec3) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&w, &q)| q * f(w)).sum()
    }
}

/// Result of a half-line integral.
#[derive(Clone, Copy, Debug)]
pub struct HalfLine<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    /// Contribution extrapolated beyond the last integrated shell.
    pub tail: [f64; N],
    pub shells: usize,
}

/// Integrates over `[breakpoints[0], ∞)`.
///
/// The finite range given by `breakpoints` is integrated adaptively; beyond it
/// the half-line is cut into dyadic shells `[R 2^k, R 2^(k+1)]`. Once the shell
/// contributions fall off geometrically the remainder is summed as a geometric
/// series, which is exact for a power-law integrand. A shell ratio that does
/// not drop below one signals a non-summable tail.
pub fn integrate_half_line<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: F,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<HalfLine<N>> {
    const MIN_SHELLS: usize = 4;
    const MAX_SHELLS: usize = 64;

    let head = integrate(&f, breakpoints, tol);
    let mut value = head.value;
    let mut error = head.error;
    let mut r = *breakpoints.last().expect("nonempty breakpoints");
    if r <= 0.0 {
        r = 1.0;
        let e = integrate(&f, &[*breakpoints.last().unwrap(), r], tol);
        for c in 0..N {
            value[c] += e.value[c];
        }
        error += e.error;
    }
    let mut magnitudes: Vec<f64> = Vec::new();
    let mut last_shell;
    let mut shells = 0;
    loop {
        let shell = integrate(&f, &[r, 2.0 * r], tol);
        shells += 1;
        for c in 0..N {
            value[c] += shell.value[c];
        }
        error += shell.error;
        let m = max_abs(&shell.value);
        magnitudes.push(m);
        last_shell = shell.value;
        r *= 2.0;
        let target = tol.target(max_abs(&value));
        let k = magnitudes.len();
        if k >= 2 && magnitudes[k - 1] == 0.0 && magnitudes[k - 2] == 0.0 {
            return Ok(HalfLine { value, error, tail: [0.0; N], shells });
        }
        if k >= MIN_SHELLS {
            let q1 = magnitudes[k - 1] / magnitudes[k - 2].max(f64::MIN_POSITIVE);
            let q2 = magnitudes[k - 2] / magnitudes[k - 3].max(f64::MIN_POSITIVE);
            let q = q1.max(q2);
            if q < 0.95 {
                let factor = q1 / (1.0 - q1);
                let tail_mag = magnitudes[k - 1] * q / (1.0 - q);
                let spread = magnitudes[k - 1] * (q2 / (1.0 - q2) - factor).abs();
                if tail_mag <= target || spread <= target {
                    let mut tail = [0.0; N];
                    for c in 0..N {
                        tail[c] = last_shell[c] * factor;
                        value[c] += tail[c];
                    }
                    // extrapolation uncertainty: spread of the ratio estimates
                    error += spread;
                    return Ok(HalfLine { value, error, tail, shells });
                }
            }
            if k >= MAX_SHELLS {
                if q >= 0.999 {
                    return Err(Error::NonConvergentTail {
                        ratio: q,
                        estimate: magnitudes[k - 1] / (1.0 - q.min(0.999_999)),
                    });
                }
                let factor = q / (1.0 - q);
                let mut tail = [0.0; N];
                for c in 0..N {
                    tail[c] = last_shell[c] * factor;
                    value[c] += tail[c];
                }
                error += magnitudes[k - 1] * factor;
                return Ok(HalfLine { value, error, tail, shells });
            }
            if k >= 12 && q >= 0.999 {
                return Err(Error::NonConvergentTail { ratio: q, estimate: f64::INFINITY });
            }
        }
    }
}
