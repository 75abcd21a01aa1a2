//! The partial-wave form of the zero-mode equation,
//! `g_a' = -(κ_a + 1)/r g_a + Σ_b M_ab(r) g_b` with
//! `M_ab(r) = ⟨Ω_a, iσ·ω σ·A(rω) Ω_b⟩`, integrated by an embedded
//! Dormand–Prince 5(4) pair.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_zoo::VectorField;
use crate::linalg::{mat2_apply, mat2_mul, scale3, Mat2, Spinor, I};
use crate::spinor_calculus::{sigma_dot_real, ChannelBasis, Channel};

#[derive(Clone, Debug, Serialize)]
pub struct RadialOptions {
    pub kappa_max: i32,
    /// Sphere rule degree for the coupling; `2κ_max + 4` when `None`.
    pub quad_degree: Option<usize>,
    pub rtol: f64,
    pub atol: f64,
    /// Steps shorter than `min_step · r` abort the sweep.
    pub min_step: f64,
    pub max_steps: usize,
}

impl RadialOptions {
    pub fn new(kappa_max: i32) -> Self {
        Self { kappa_max, quad_degree: None, rtol: 1e-10, atol: 1e-14, min_step: 1e-12, max_steps: 200_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialSolution {
    pub channels: Vec<Channel>,
    pub radii: Vec<f64>,
    /// `amplitudes[i][a] = g_a(radii[i])`.
    pub amplitudes: Vec<Vec<Complex64>>,
    pub norm_plus: Vec<f64>,
    pub norm_minus: Vec<f64>,
    /// Relative part of `σ_A g` outside the retained channels at each output radius.
    pub truncation_residual: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Per-radius coupling matrices with a small cache keyed by `r`.
pub struct Coupling<'a, A: VectorField + ?Sized> {
    potential: &'a A,
    basis: ChannelBasis,
    shift: Vec<f64>,
    cache: HashMap<u64, (DMatrix<Complex64>, Vec<Mat2>)>,
}

impl<'a, A: VectorField + ?Sized + Sync> Coupling<'a, A> {
    pub fn new(potential: &'a A, kappa_max: i32, degree: Option<usize>) -> Result<Self> {
        let basis = ChannelBasis::new(kappa_max, degree.unwrap_or(ChannelBasis::default_degree(kappa_max)))?;
        let shift = basis.channels().iter().map(|c| (c.kappa + 1) as f64).collect();
        Ok(Self { potential, basis, shift, cache: HashMap::new() })
    }

    pub fn channels(&self) -> &[Channel] {
        self.basis.channels()
    }

    fn node_operators(&self, r: f64) -> Vec<Mat2> {
        self.basis
            .quadrature()
            .nodes()
            .iter()
            .map(|&w| {
                let a = self.potential.value(scale3(r, w));
                let m = mat2_mul(&sigma_dot_real(w), &sigma_dot_real(a));
                m.map(|row| row.map(|z| I * z))
            })
            .collect()
    }

    fn entry(&mut self, r: f64) -> Result<&(DMatrix<Complex64>, Vec<Mat2>)> {
        if self.cache.len() > 64 {
            self.cache.clear();
        }
        let key = r.to_bits();
        if !self.cache.contains_key(&key) {
            let ops = self.node_operators(r);
            if ops.iter().flatten().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("potential is not finite on the sphere r = {r}")));
            }
            let table = self.basis.table();
            let n = table.len();
            let cols: Vec<Vec<Complex64>> = (0..n)
                .into_par_iter()
                .map(|b| {
                    let img: Vec<Spinor> = ops.iter().zip(&table[b]).map(|(t, o)| mat2_apply(t, o)).collect();
                    self.basis.project(&img)
                })
                .collect();
            let m = DMatrix::from_fn(n, n, |a, b| cols[b][a]);
            self.cache.insert(key, (m, ops));
        }
        Ok(&self.cache[&key])
    }

    /// `M(r)`.
    pub fn matrix(&mut self, r: f64) -> Result<DMatrix<Complex64>> {
        Ok(self.entry(r)?.0.clone())
    }

    fn rhs(&mut self, r: f64, g: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let shift = self.shift.clone();
        let (m, _) = self.entry(r)?;
        let mut out = m * g;
        for (o, (s, v)) in out.iter_mut().zip(shift.iter().zip(g.iter())) {
            *o -= v * (s / r);
        }
        Ok(out)
    }

    /// Relative L²(S²) norm of the part of `iσ·ω σ·A g` outside the basis.
    fn leakage(&mut self, r: f64, g: &DVector<Complex64>) -> Result<f64> {
        let coeffs: Vec<Complex64> = g.iter().cloned().collect();
        let values = self.basis.resum_nodes(&coeffs);
        let (_, ops) = self.entry(r)?;
        let img: Vec<Spinor> = ops.iter().zip(&values).map(|(t, v)| mat2_apply(t, v)).collect();
        let proj = self.basis.project(&img);
        Ok(self.basis.truncation_residual(&img, &proj))
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const TABLEAU: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrates from `r_start` to `r_end` (either direction), recording the
/// state at each of `outputs`, which must lie between the two and be ordered
/// along the sweep.
pub fn integrate_radial_system<P: VectorField + ?Sized + Sync>(
    potential: &P,
    opts: &RadialOptions,
    r_start: f64,
    r_end: f64,
    initial: &[Complex64],
    outputs: &[f64],
) -> Result<RadialSolution> {
    if !(r_start > 0.0 && r_end > 0.0) || !r_start.is_finite() || !r_end.is_finite() {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if !(opts.rtol > 0.0 && opts.atol >= 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    let mut coupling = Coupling::new(potential, opts.kappa_max, opts.quad_degree)?;
    let nc = coupling.channels().len();
    if initial.len() != nc {
        return Err(Error::InvalidArgument(format!("expected {nc} initial amplitudes, got {}", initial.len())));
    }
    let dir = if r_end >= r_start { 1.0 } else { -1.0 };
    let targets: Vec<f64> = if outputs.is_empty() { vec![r_end] } else { outputs.to_vec() };
    let within = |r: f64| (r - r_start) * dir >= 0.0 && (r_end - r) * dir >= 0.0;
    if targets.iter().any(|&r| !within(r)) || targets.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0) {
        return Err(Error::InvalidArgument("output radii must be ordered inside the sweep".into()));
    }
    let channels = coupling.channels().to_vec();
    let mut sol = RadialSolution {
        channels: channels.clone(),
        radii: Vec::new(),
        amplitudes: Vec::new(),
        norm_plus: Vec::new(),
        norm_minus: Vec::new(),
        truncation_residual: Vec::new(),
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let record = |r: f64, g: &DVector<Complex64>, c: &mut Coupling<P>, sol: &mut RadialSolution| -> Result<()> {
        let (mut p, mut m) = (0.0, 0.0);
        for (ch, v) in channels.iter().zip(g.iter()) {
            if ch.is_positive() {
                p += v.norm_sqr();
            } else {
                m += v.norm_sqr();
            }
        }
        sol.radii.push(r);
        sol.amplitudes.push(g.iter().cloned().collect());
        sol.norm_plus.push(p.sqrt());
        sol.norm_minus.push(m.sqrt());
        sol.truncation_residual.push(c.leakage(r, g)?);
        Ok(())
    };

    let mut r = r_start;
    let mut g = DVector::from_column_slice(initial);
    let mut h = dir * 0.01 * r_start.max(1e-3);
    let mut k1 = coupling.rhs(r, &g)?;
    for &target in &targets {
        while (target - r) * dir > 0.0 {
            if sol.accepted_steps + sol.rejected_steps >= opts.max_steps {
                return Err(Error::StepUnderflow { r });
            }
            let remaining = target - r;
            let last = h.abs() >= remaining.abs();
            let step = if last { remaining } else { h };
            if step.abs() < opts.min_step * r {
                return Err(Error::StepUnderflow { r });
            }
            let mut k = vec![k1.clone()];
            for s in 1..7 {
                let mut y = g.clone();
                for (j, kj) in k.iter().enumerate() {
                    if TABLEAU[s][j] != 0.0 {
                        y.axpy(Complex64::new(step * TABLEAU[s][j], 0.0), kj, Complex64::new(1.0, 0.0));
                    }
                }
                k.push(coupling.rhs(r + C[s] * step, &y)?);
            }
            let mut y5 = g.clone();
            for j in 0..6 {
                y5.axpy(Complex64::new(step * TABLEAU[6][j], 0.0), &k[j], Complex64::new(1.0, 0.0));
            }
            let mut err = 0.0f64;
            for i in 0..nc {
                let e: Complex64 = (0..7).map(|j| k[j][i] * ((TABLEAU[6].get(j).copied().unwrap_or(0.0)) - B4[j])).sum::<Complex64>() * step;
                let scale = opts.atol + opts.rtol * g[i].norm().max(y5[i].norm());
                err = err.max(e.norm() / scale.max(f64::MIN_POSITIVE));
            }
            if !err.is_finite() {
                return Err(Error::StepUnderflow { r });
            }
            if err <= 1.0 {
                r = if last { target } else { r + step };
                g = y5;
                k1 = k.pop().unwrap();
                sol.accepted_steps += 1;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h = step * grow;
                } else {
                    h = h.abs().max(step.abs() * grow.min(1.0)) * dir;
                }
            } else {
                sol.rejected_steps += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
        record(r, &g, &mut coupling, &mut sol)?;
    }
    Ok(sol)
}

#[derive(Clone, Debug, Serialize)]
pub struct InwardReport {
    pub solution: RadialSolution,
    pub r_max: f64,
    /// Largest relative change of the output sphere norms when the
    /// starting radius is doubled.
    pub r_max_sensitivity: f64,
}

/// Inward sweep standing in for integration from infinity: starts at
/// `r_max` with `initial(r_max)`, and again at `2 r_max`, recording at
/// `outputs` (decreasing).
pub fn integrate_inward<P: VectorField + ?Sized + Sync>(
    potential: &P,
    opts: &RadialOptions,
    r_max: f64,
    initial: &dyn Fn(f64) -> Result<Vec<Complex64>>,
    outputs: &[f64],
) -> Result<InwardReport> {
    let r_end = *outputs.last().ok_or_else(|| Error::InvalidArgument("no output radii".into()))?;
    let a = integrate_radial_system(potential, opts, r_max, r_end, &initial(r_max)?, outputs)?;
    let b = integrate_radial_system(potential, opts, 2.0 * r_max, r_end, &initial(2.0 * r_max)?, outputs)?;
    let norm = |s: &RadialSolution, i: usize| s.norm_plus[i].hypot(s.norm_minus[i]);
    let sens = (0..outputs.len())
        .map(|i| {
            let (x, y) = (norm(&a, i), norm(&b, i));
            if x.max(y) == 0.0 {
                0.0
            } else {
                (x - y).abs() / x.max(y)
            }
        })
        .fold(0.0, f64::max);
    Ok(InwardReport { solution: a, r_max, r_max_sensitivity: sens })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_is_consistent() {
        for s in 1..7 {
            let row: f64 = TABLEAU[s].iter().sum();
            assert!((row - C[s]).abs() < 1e-14, "stage {s}");
        }
        assert!((B4.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coupling_vanishes_for_zero_potential() {
        let zero = crate::field_zoo::FnField(|_x: [f64; 3]| [0.0; 3]);
        let mut c = Coupling::new(&zero, 1, None).unwrap();
        assert!(c.matrix(1.3).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn rejects_bad_output_order() {
        let zero = crate::field_zoo::FnField(|_x: [f64; 3]| [0.0; 3]);
        let g = vec![Complex64::new(1.0, 0.0); 12];
        let opts = RadialOptions::new(1);
        assert!(integrate_radial_system(&zero, &opts, 1.0, 2.0, &g, &[1.5, 1.2]).is_err());
        assert!(integrate_radial_system(&zero, &opts, 1.0, 2.0, &g, &[3.0]).is_err());
        assert!(integrate_radial_system(&zero, &opts, 1.0, 2.0, &g[..3], &[]).is_err());
    }
}
