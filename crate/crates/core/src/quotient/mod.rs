//! Discrete Rayleigh quotient `‖D g‖² / ∫|B||g|²` on a box, its minimizer,
//! and grid residuals of candidate zero modes.

mod dump;
mod forms;
mod lobpcg;
mod precond;
mod vecops;

pub use dump::{read_spinor_grid, write_spinor_grid, DumpHeader};
pub use forms::{assemble_forms, FormOptions, FormPair, Scheme};
pub use lobpcg::{minimize_quotient, EigenOptions, RayleighResult};
pub use precond::FreePreconditioner;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field_zoo::VectorField;
use crate::linalg::ZERO_SPINOR;
use crate::spinor_calculus::{GridSpec, SpinorField, SpinorGrid, SpinorLayout};
use rayon::prelude::*;

/// `λ / (1 + λ)`, with `+∞ ↦ 1`.
pub fn delta_surrogate(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("quotient value must be nonnegative, got {lambda}")));
    }
    if lambda == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(lambda / (1.0 + lambda))
}

/// Where the residual takes its samples from.
pub enum SpinorSource<'a> {
    /// Grid values with zero exterior.
    Grid(&'a SpinorGrid),
    /// An evaluator; the stencil's ghost values one cell outside the box are
    /// taken from it as well.
    Evaluator(&'a dyn SpinorField),
}

/// `‖D ψ‖ / ‖ψ‖` over the grid points of `spec`.
pub fn zero_mode_residual<A: VectorField + ?Sized + Sync>(
    a: &A,
    psi: SpinorSource<'_>,
    spec: GridSpec,
    scheme: Scheme,
) -> Result<f64> {
    let (num, den) = match psi {
        SpinorSource::Grid(g) => {
            match &g.layout {
                SpinorLayout::Cartesian(s) if *s == spec => {}
                _ => return Err(Error::InvalidArgument("spinor grid does not match the requested grid".into())),
            }
            let op = forms::sample_operator(a, spec, scheme, vec![0.0; spec.len()])?;
            let v: Vec<Complex64> = g.values.iter().flat_map(|s| [s[0], s[1]]).collect();
            (vecops::norm_sq(&op.d(&v)), vecops::norm_sq(&v))
        }
        SpinorSource::Evaluator(f) => streamed_residual(a, f, spec, scheme),
    };
    if !(den > 0.0) {
        return Err(Error::VanishingSpinor { point: [0.0; 3] });
    }
    let res = (num / den).sqrt();
    if !res.is_finite() {
        return Err(Error::InvalidArgument("residual is not finite".into()));
    }
    Ok(res)
}

/// `(Σ|Dψ|², Σ|ψ|²)` with every stencil value, including the ghost layer
/// outside the box, taken from the evaluator. Runs slab by slab without
/// storing the grid.
fn streamed_residual<A: VectorField + ?Sized + Sync>(
    a: &A,
    psi: &dyn SpinorField,
    spec: GridSpec,
    scheme: Scheme,
) -> (f64, f64) {
    let n = spec.n() as isize;
    let h = spec.h;
    let inv2h = 0.5 / h;
    let parts: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (mut num, mut den) = (0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    let x = spec.point(i, j, k);
                    let center = psi.value(x);
                    let mut up = [ZERO_SPINOR; 3];
                    let mut dn = [ZERO_SPINOR; 3];
                    for d in 0..3 {
                        let mut xp = x;
                        xp[d] += h;
                        let mut xm = x;
                        xm[d] -= h;
                        up[d] = psi.value(xp);
                        dn[d] = psi.value(xm);
                        if scheme == Scheme::Peierls {
                            let fwd = Complex64::from_polar(1.0, -forms::link_integral(a, x, d, h));
                            let bwd = Complex64::from_polar(1.0, forms::link_integral(a, xm, d, h));
                            up[d] = [fwd * up[d][0], fwd * up[d][1]];
                            dn[d] = [bwd * dn[d][0], bwd * dn[d][1]];
                        }
                    }
                    let pot = (scheme == Scheme::Centered).then(|| a.value(x));
                    let r = forms::dirac_stencil(&up, &dn, center, pot, inv2h);
                    num += r[0].norm_sqr() + r[1].norm_sqr();
                    den += center[0].norm_sqr() + center[1].norm_sqr();
                }
            }
            (num, den)
        })
        .collect();
    parts.into_iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
}
