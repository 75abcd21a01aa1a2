use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::vecops::{norm_sq, weighted_norm_sq};
use crate::error::{Error, Result};
use crate::field_zoo::{lp_integral_ball, LpQuadrature, MagneticField, VectorField};
use crate::linalg::{norm3, Spinor, Vec3};
use crate::quadrature::Tolerance;
use crate::spinor_calculus::GridSpec;

// The tail fraction is compared against thresholds around 1e-3, and fields
// built from a finite-difference curl cannot reach the default tolerances.
const TAIL_QUADRATURE: LpQuadrature = LpQuadrature {
    n_phi: 32,
    angular: Tolerance::new(1e-12, 1e-8),
    radial: Tolerance::new(1e-12, 1e-8),
    radial_scale: 1.0,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Discretization of `σ·(-i∇ - A)` on the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Central differences with A sampled at the grid points.
    #[default]
    Centered,
    /// Central differences with link phases `exp(-i∫A·dl)` along grid edges.
    Peierls,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FormOptions {
    pub scheme: Scheme,
    /// Warn when the fraction of `∫|B|` outside the box exceeds this.
    pub tail_fraction: f64,
    /// Compute the exterior mass (one extra `L¹` quadrature).
    pub check_tail: bool,
}

impl Default for FormOptions {
    fn default() -> Self {
        Self { scheme: Scheme::Centered, tail_fraction: 1e-3, check_tail: true }
    }
}

/// The forms `(g, P g) = h³‖D g‖²` and `(g, |B| g) = h³ Σ |B(x_i)| |g(x_i)|²`
/// on a cell-centred grid, with zero values outside the box.
///
/// Vectors are flat, point-major and spin-interleaved: entry `2p + s` is spin
/// component `s` at grid point `p` ([`GridSpec::index`]).
#[derive(Clone, Debug)]
pub struct FormPair {
    pub spec: GridSpec,
    pub scheme: Scheme,
    /// `A` at the grid points (centred scheme).
    potential: Vec<Vec3>,
    /// Forward link phases per point and axis (Peierls scheme).
    links: Vec<[Complex64; 3]>,
    /// `|B|` at the grid points.
    pub weight: Vec<f64>,
    /// Estimated fraction of `∫|B|` outside the box, when computed.
    pub exterior_fraction: Option<f64>,
    pub warnings: Vec<String>,
}

pub(crate) fn grid_points(spec: &GridSpec) -> Vec<Vec3> {
    let n = spec.n() as isize;
    let mut pts = Vec::with_capacity(spec.len());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                pts.push(spec.point(i, j, k));
            }
        }
    }
    pts
}

/// `∫_x^{x+h e_d} A_d` by three-point Gauss–Legendre.
pub(crate) fn link_integral<A: VectorField + ?Sized>(a: &A, x: Vec3, d: usize, h: f64) -> f64 {
    let s = 15f64.sqrt() / 10.0;
    [(0.5 - s, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + s, 5.0 / 18.0)]
        .iter()
        .map(|&(t, w)| {
            let mut y = x;
            y[d] += t * h;
            w * a.value(y)[d]
        })
        .sum::<f64>()
        * h
}

impl FormPair {
    /// Forms from sampled data; `potential` and `weight` are per grid point.
    pub fn from_samples(spec: GridSpec, potential: Vec<Vec3>, weight: Vec<f64>) -> Result<Self> {
        if potential.len() != spec.len() || weight.len() != spec.len() {
            return Err(Error::InvalidArgument("sample arrays do not match the grid".into()));
        }
        if weight.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
        }
        Ok(Self {
            spec,
            scheme: Scheme::Centered,
            potential,
            links: Vec::new(),
            weight,
            exterior_fraction: None,
            warnings: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// Length of a flat spinor vector on this grid.
    pub fn dim(&self) -> usize {
        2 * self.spec.len()
    }

    /// `out = D v` with zero exterior values.
    pub fn apply_d(&self, v: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(v.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        let n = self.n();
        let strides = [n * n, n, 1];
        let inv2h = 0.5 / self.spec.h;
        let zero = Complex64::new(0.0, 0.0);
        out.par_chunks_mut(2 * n * n).enumerate().for_each(|(i, slab)| {
            for j in 0..n {
                for k in 0..n {
                    let idx = [i, j, k];
                    let p = (i * n + j) * n + k;
                    let mut ups = [[zero; 2]; 3];
                    let mut dns = [[zero; 2]; 3];
                    for d in 0..3 {
                        let fwd = if idx[d] + 1 < n { Some(p + strides[d]) } else { None };
                        let bwd = if idx[d] > 0 { Some(p - strides[d]) } else { None };
                        let (mut up, mut dn) = ([zero; 2], [zero; 2]);
                        match self.scheme {
                            Scheme::Centered => {
                                if let Some(q) = fwd {
                                    up = [v[2 * q], v[2 * q + 1]];
                                }
                                if let Some(q) = bwd {
                                    dn = [v[2 * q], v[2 * q + 1]];
                                }
                            }
                            Scheme::Peierls => {
                                if let Some(q) = fwd {
                                    let u = self.links[p][d];
                                    up = [u * v[2 * q], u * v[2 * q + 1]];
                                }
                                if let Some(q) = bwd {
                                    let u = self.links[q][d].conj();
                                    dn = [u * v[2 * q], u * v[2 * q + 1]];
                                }
                            }
                        }
                        ups[d] = up;
                        dns[d] = dn;
                    }
                    let a = (self.scheme == Scheme::Centered).then(|| self.potential[p]);
                    let [r0, r1] = dirac_stencil(&ups, &dns, [v[2 * p], v[2 * p + 1]], a, inv2h);
                    let o = 2 * (j * n + k);
                    slab[o] = r0;
                    slab[o + 1] = r1;
                }
            }
        });
    }

    pub fn d(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply_d(v, &mut out);
        out
    }

    /// `D² v`.
    pub fn apply_p(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.d(&self.d(v))
    }

    /// `h³ ‖D g‖²`.
    pub fn p_form(&self, g: &[Complex64]) -> f64 {
        self.spec.cell_volume() * norm_sq(&self.d(g))
    }

    /// `h³ Σ |B| |g|²`.
    pub fn b_form(&self, g: &[Complex64]) -> f64 {
        self.spec.cell_volume() * weighted_norm_sq(g, &self.weight)
    }
}

/// The operator `D` for potential `a` on `spec` with the given per-point
/// weights.
pub(crate) fn sample_operator<A: VectorField + ?Sized>(
    a: &A,
    spec: GridSpec,
    scheme: Scheme,
    weight: Vec<f64>,
) -> Result<FormPair> {
    let pts = grid_points(&spec);
    match scheme {
        Scheme::Centered => {
            let potential: Vec<Vec3> = pts.par_iter().map(|&x| a.value(x)).collect();
            if potential.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("potential is not finite on the grid".into()));
            }
            FormPair::from_samples(spec, potential, weight)
        }
        Scheme::Peierls => {
            let h = spec.h;
            let phases: Vec<[f64; 3]> = pts.par_iter().map(|&x| [0, 1, 2].map(|d| link_integral(a, x, d, h))).collect();
            if phases.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("potential is not finite on the grid".into()));
            }
            let mut f = FormPair::from_samples(spec, vec![[0.0; 3]; spec.len()], weight)?;
            f.scheme = Scheme::Peierls;
            f.links = phases.into_iter().map(|t| t.map(|th| Complex64::from_polar(1.0, -th))).collect();
            Ok(f)
        }
    }
}

/// `-iσ·(up - dn)/(2h) - σ·A center`, with neighbour values already
/// multiplied by their link phases when `a` is `None`.
#[inline]
pub(crate) fn dirac_stencil(up: &[Spinor; 3], dn: &[Spinor; 3], center: Spinor, a: Option<Vec3>, inv2h: f64) -> Spinor {
    let g: [Spinor; 3] = std::array::from_fn(|d| [(up[d][0] - dn[d][0]) * inv2h, (up[d][1] - dn[d][1]) * inv2h]);
    let s0 = g[2][0] + g[0][1] - I * g[1][1];
    let s1 = g[0][0] + I * g[1][0] - g[2][1];
    let mut r = [-I * s0, -I * s1];
    if let Some(a) = a {
        let [v0, v1] = center;
        r[0] -= a[2] * v0 + Complex64::new(a[0], -a[1]) * v1;
        r[1] -= Complex64::new(a[0], a[1]) * v0 - a[2] * v1;
    }
    r
}

/// Samples `A` and `|B|` on the grid and builds the two forms.
pub fn assemble_forms<A: VectorField + ?Sized>(
    a: &A,
    b: &MagneticField,
    spec: GridSpec,
    opts: &FormOptions,
) -> Result<FormPair> {
    let pts = grid_points(&spec);
    let weight: Vec<f64> = pts.par_iter().map(|&x| norm3(b.eval(x))).collect();
    if let Some(i) = weight.iter().position(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument(format!("|B| is not finite at {:?}", pts[i])));
    }
    let mut forms = sample_operator(a, spec, opts.scheme, weight)?;
    if opts.check_tail {
        let inside: f64 = forms.weight.iter().sum::<f64>() * spec.cell_volume();
        match exterior_mass(b, spec.half_width) {
            Ok((total, bounded)) if total > 0.0 => {
                let fraction = (1.0 - inside / total).max(0.0);
                forms.exterior_fraction = Some(fraction);
                if fraction > opts.tail_fraction {
                    forms.warnings.push(format!(
                        "box [-{L}, {L}]³ misses a fraction {fraction:.3e} of ∫|B| (threshold {:.1e})",
                        opts.tail_fraction,
                        L = spec.half_width
                    ));
                }
                if !bounded {
                    forms.warnings.push(format!(
                        "∫|B| beyond radius {:.0} is not bounded by a decay envelope and was omitted",
                        TAIL_BALL * spec.half_width
                    ));
                }
            }
            Ok(_) => forms.exterior_fraction = Some(0.0),
            Err(e) => forms.warnings.push(format!("exterior |B| mass unknown: {e}")),
        }
    }
    Ok(forms)
}

/// Radius of the exactly integrated ball, in units of the box half-width.
const TAIL_BALL: f64 = 32.0;

/// `∫|B|` over the ball of radius `TAIL_BALL · L` plus, when the field has a
/// decay envelope `C_B r^(-2-β)` with `β > 1`, its integral beyond the ball.
/// Returns the total and whether the far part was bounded.
fn exterior_mass(b: &MagneticField, half_width: f64) -> Result<(f64, bool)> {
    let r = TAIL_BALL * half_width;
    let (ball, _) = lp_integral_ball(b, 1.0, r, &TAIL_QUADRATURE)?;
    match b.decay {
        Some(d) if d.beta > 1.0 && r >= d.r0 => {
            Ok((ball + 4.0 * std::f64::consts::PI * d.c_b * r.powf(1.0 - d.beta) / (d.beta - 1.0), true))
        }
        _ => Ok((ball, false)),
    }
}
