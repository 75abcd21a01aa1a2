//! Deterministic parallel kernels on flat complex vectors. Reductions are
//! split into fixed-size chunks whose partial sums are added in order, so the
//! result does not depend on the number of threads.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

pub(crate) const CHUNK: usize = 4096;

pub(crate) fn norm_sq(a: &[Complex64]) -> f64 {
    let parts: Vec<f64> = a.par_chunks(CHUNK).map(|x| x.iter().map(|u| u.norm_sqr()).sum()).collect();
    parts.into_iter().sum()
}

/// `Σ_p w_p |a_p|²` with `w` indexed per grid point and `a` spin-interleaved.
pub(crate) fn weighted_norm_sq(a: &[Complex64], w: &[f64]) -> f64 {
    let parts: Vec<f64> = a
        .par_chunks(2 * CHUNK)
        .zip(w.par_chunks(CHUNK))
        .map(|(x, ww)| x.chunks_exact(2).zip(ww).map(|(s, &wp)| wp * (s[0].norm_sqr() + s[1].norm_sqr())).sum())
        .collect();
    parts.into_iter().sum()
}

/// `G[i][j] = ⟨u_i, v_j⟩`.
pub(crate) fn gram(us: &[&[Complex64]], vs: &[&[Complex64]]) -> DMatrix<Complex64> {
    let len = us[0].len();
    let nchunks = len.div_ceil(CHUNK);
    let (m, k) = (us.len(), vs.len());
    let parts: Vec<Vec<Complex64>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let mut g = vec![Complex64::new(0.0, 0.0); m * k];
            for (i, u) in us.iter().enumerate() {
                let u = &u[lo..hi];
                for (j, v) in vs.iter().enumerate() {
                    g[i * k + j] = u.iter().zip(&v[lo..hi]).map(|(a, b)| a.conj() * b).sum();
                }
            }
            g
        })
        .collect();
    let mut out = DMatrix::zeros(m, k);
    for part in parts {
        for i in 0..m {
            for j in 0..k {
                out[(i, j)] += part[i * k + j];
            }
        }
    }
    out
}

/// Columns `Σ_j c[(j, col)] s_j`.
pub(crate) fn combine(s: &[&[Complex64]], c: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    let len = s[0].len();
    (0..c.ncols())
        .map(|col| {
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            out.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
                let lo = ci * CHUNK;
                for (j, sj) in s.iter().enumerate() {
                    let coef = c[(j, col)];
                    if coef == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (o, v) in chunk.iter_mut().zip(&sj[lo..]) {
                        *o += coef * v;
                    }
                }
            });
            out
        })
        .collect()
}

/// `a + w ∘ b` with per-point weights on spin-interleaved vectors.
pub(crate) fn add_weighted(a: &[Complex64], w: &[f64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = a.to_vec();
    out.par_chunks_mut(2 * CHUNK).zip(b.par_chunks(2 * CHUNK)).zip(w.par_chunks(CHUNK)).for_each(|((o, x), ww)| {
        for ((os, xs), &wp) in o.chunks_exact_mut(2).zip(x.chunks_exact(2)).zip(ww) {
            os[0] += wp * xs[0];
            os[1] += wp * xs[1];
        }
    });
    out
}
