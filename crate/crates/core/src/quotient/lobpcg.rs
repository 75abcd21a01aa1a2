//! Smallest eigenvalue of `P g = λ |B| g` by block LOBPCG on the definite
//! pencil `(P, P + |B|)`, whose eigenvalues are `ν = λ/(1+λ)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::forms::FormPair;
use super::precond::FreePreconditioner;
use super::vecops::{add_weighted, combine, gram, norm_sq, weighted_norm_sq};
use super::delta_surrogate;
use crate::error::{Error, Result};
use crate::spinor_calculus::{SpinorGrid, SpinorLayout};

#[derive(Clone, Debug, Serialize)]
pub struct EigenOptions {
    /// Stop when `‖P g - λ|B| g‖ / ‖(P + |B|) g‖` falls below this.
    pub tol: f64,
    pub max_iter: usize,
    pub block: usize,
    pub seed: u64,
    /// Shift `c` in the preconditioner `(D₀² + c)⁻¹`.
    pub shift: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 2000, block: 3, seed: 0x5eed, shift: 1.0 }
    }
}

#[derive(Clone, Debug)]
pub struct RayleighResult {
    pub lambda_min: f64,
    pub delta_surrogate: f64,
    /// Minimizer normalized to `B_form(g, g) = 1`.
    pub minimizer: SpinorGrid,
    /// Ritz values `λ` of the whole block, ascending.
    pub ritz_values: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual of the minimizer.
    pub residual: f64,
    pub residual_history: Vec<f64>,
}

type Col = Vec<Complex64>;

fn hermitize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// B-orthonormalizes `span(S)` (dropping near-dependent directions) and
/// returns the coefficient matrix of the `m` lowest Ritz vectors.
fn rayleigh_ritz(s: &[&[Complex64]], a_s: &[&[Complex64]], weight: &[f64], m: usize) -> Option<(Vec<f64>, DMatrix<Complex64>)> {
    let b_s: Vec<Col> = s.iter().zip(a_s).map(|(x, ax)| add_weighted(ax, weight, x)).collect();
    let b_refs: Vec<&[Complex64]> = b_s.iter().map(|v| v.as_slice()).collect();
    let ga = hermitize(gram(s, a_s));
    let gb = hermitize(gram(s, &b_refs));
    let k = s.len();
    let dscale: Vec<f64> = (0..k).map(|i| 1.0 / gb[(i, i)].re.max(f64::MIN_POSITIVE).sqrt()).collect();
    let mut gbn = gb.clone();
    for i in 0..k {
        for j in 0..k {
            gbn[(i, j)] *= dscale[i] * dscale[j];
        }
    }
    let eig = SymmetricEigen::new(gbn);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..k).filter(|&i| eig.eigenvalues[i] > 1e-12 * top).collect();
    if keep.len() < m {
        return None;
    }
    let mut z = DMatrix::<Complex64>::zeros(k, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let inv = 1.0 / eig.eigenvalues[i].sqrt();
        for r in 0..k {
            z[(r, c)] = eig.eigenvectors[(r, i)] * (dscale[r] * inv);
        }
    }
    let h = hermitize(z.adjoint() * &ga * &z);
    let he = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..keep.len()).collect();
    order.sort_by(|&a, &b| he.eigenvalues[a].total_cmp(&he.eigenvalues[b]));
    let mut y = DMatrix::<Complex64>::zeros(keep.len(), m);
    for (c, &i) in order.iter().take(m).enumerate() {
        y.set_column(c, &he.eigenvectors.column(i));
    }
    let theta = order.iter().take(m).map(|&i| he.eigenvalues[i]).collect();
    Some((theta, z * y))
}

fn refs(v: &[Col]) -> Vec<&[Complex64]> {
    v.iter().map(|c| c.as_slice()).collect()
}

/// Minimizes `P_form(g, g) / B_form(g, g)` over grid spinors.
pub fn minimize_quotient(forms: &FormPair, opts: &EigenOptions) -> Result<RayleighResult> {
    let weight = &forms.weight;
    if weight.iter().all(|&w| w == 0.0) {
        return Err(Error::DegenerateForm);
    }
    let dim = forms.dim();
    let m = opts.block.max(1).min(dim / 3);
    if m == 0 || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument("grid too small or tolerance not positive".into()));
    }
    let pre = FreePreconditioner::new(forms.n(), forms.spec.h, opts.shift);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Col> = (0..m)
        .map(|_| (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    let mut ax: Vec<Col> = x.iter().map(|v| forms.apply_p(v)).collect();
    let (mut theta, c) = rayleigh_ritz(&refs(&x), &refs(&ax), weight, m).ok_or(Error::DegenerateForm)?;
    x = combine(&refs(&x), &c);
    ax = combine(&refs(&ax), &c);
    let mut p: Vec<Col> = Vec::new();
    let mut ap: Vec<Col> = Vec::new();
    let mut history = Vec::new();
    let mut iterations = 0;
    let residual = loop {
        let bx: Vec<Col> = x.iter().zip(&ax).map(|(v, av)| add_weighted(av, weight, v)).collect();
        let r: Vec<Col> = (0..m)
            .map(|j| ax[j].iter().zip(&bx[j]).map(|(a, b)| a - theta[j] * b).collect())
            .collect();
        let nu0 = theta[0].clamp(0.0, 1.0 - f64::EPSILON);
        let res0 = (norm_sq(&r[0]) / norm_sq(&bx[0])).sqrt() / (1.0 - nu0);
        history.push(res0);
        if res0 < opts.tol {
            break res0;
        }
        if iterations >= opts.max_iter || !res0.is_finite() {
            return Err(Error::NoConvergence { iterations, residual: res0 });
        }
        iterations += 1;
        let w: Vec<Col> = r.iter().map(|v| pre.apply(v)).collect();
        let aw: Vec<Col> = w.iter().map(|v| forms.apply_p(v)).collect();
        let mut s = refs(&x);
        s.extend(refs(&w));
        s.extend(refs(&p));
        let mut a_s = refs(&ax);
        a_s.extend(refs(&aw));
        a_s.extend(refs(&ap));
        let (th, c) = match rayleigh_ritz(&s, &a_s, weight, m) {
            Some(v) => v,
            None => {
                // Restart without search directions.
                s.truncate(2 * m);
                a_s.truncate(2 * m);
                rayleigh_ritz(&s, &a_s, weight, m).ok_or(Error::NoConvergence { iterations, residual: res0 })?
            }
        };
        let k = s.len();
        let tail = c.rows(m, k - m).into_owned();
        let new_p = combine(&s[m..], &tail);
        let new_ap = combine(&a_s[m..], &tail);
        let new_x = combine(&s, &c);
        let new_ax = combine(&a_s, &c);
        x = new_x;
        ax = new_ax;
        p = new_p;
        ap = new_ap;
        theta = th;
        if iterations % 25 == 0 {
            ax = x.iter().map(|v| forms.apply_p(v)).collect();
            ap = p.iter().map(|v| forms.apply_p(v)).collect();
        }
    };
    let nu0 = theta[0];
    if nu0 >= 1.0 {
        return Err(Error::DegenerateForm);
    }
    let to_lambda = |nu: f64| nu.max(0.0) / (1.0 - nu);
    let lambda_min = to_lambda(nu0);
    let bnorm = forms.spec.cell_volume() * weighted_norm_sq(&x[0], weight);
    if !(bnorm > 0.0) {
        return Err(Error::DegenerateForm);
    }
    let scale = 1.0 / bnorm.sqrt();
    let values = x[0].chunks_exact(2).map(|s| [s[0] * scale, s[1] * scale]).collect();
    Ok(RayleighResult {
        lambda_min,
        delta_surrogate: delta_surrogate(lambda_min)?,
        minimizer: SpinorGrid { layout: SpinorLayout::Cartesian(forms.spec), values },
        ritz_values: theta.iter().map(|&t| to_lambda(t)).collect(),
        iterations,
        residual,
        residual_history: history,
    })
}
