//! Sampled spinor fields: Cartesian grids and partial-wave radial tables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpinorField;
use super::sphere::resum;
use super::spinors::Channel;
use crate::error::{Error, Result};
use crate::linalg::{norm3, scale3, Spinor, Vec3, ZERO_SPINOR};

/// Cell-centred cubic grid on `[-L, L]³` with spacing `h`: `n = 2L/h` points
/// per axis at `-L + (i + 1/2) h`. With `n` even the origin sits at a cell
/// corner, never on a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub h: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
}

impl GridSpec {
    pub fn new(h: f64, half_width: f64) -> Result<Self> {
        if !(h > 0.0) || !(half_width > 0.0) || !h.is_finite() || !half_width.is_finite() {
            return Err(Error::InvalidArgument("grid spacing and half-width must be positive".into()));
        }
        let n = (2.0 * half_width / h).round();
        if n < 2.0 || ((n * h) - 2.0 * half_width).abs() > 1e-9 * half_width {
            return Err(Error::InvalidArgument(format!(
                "h = {h} does not divide the box width 2L = {}",
                2.0 * half_width
            )));
        }
        Ok(Self { h, half_width })
    }

    /// Grid with `n` points per axis on `[-L, L]³`.
    pub fn with_points(n: usize, half_width: f64) -> Result<Self> {
        Self::new(2.0 * half_width / n as f64, half_width)
    }

    pub fn n(&self) -> usize {
        (2.0 * self.half_width / self.h).round() as usize
    }

    pub fn len(&self) -> usize {
        self.n().pow(3)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coord(&self, i: isize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.h
    }

    pub fn point(&self, i: isize, j: isize, k: isize) -> Vec3 {
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.n();
        (i * n + j) * n + k
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(3)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SpinorLayout {
    Cartesian(GridSpec),
    PartialWave { channels: Vec<Channel>, radii: Vec<f64> },
}

/// Two-component complex spinor samples with their layout.
///
/// Cartesian values are indexed by [`GridSpec::index`]; partial-wave values
/// are stored radius-major, `values[i * channels.len() + a]` holding the
/// amplitude of channel `a` at `radii[i]` in the first component.
#[derive(Clone, Debug)]
pub struct SpinorGrid {
    pub layout: SpinorLayout,
    pub values: Vec<Spinor>,
}

impl SpinorGrid {
    pub fn zeros(spec: GridSpec) -> Self {
        Self { layout: SpinorLayout::Cartesian(spec), values: vec![ZERO_SPINOR; spec.len()] }
    }

    /// Samples an evaluator at every Cartesian grid point.
    pub fn sample<S: SpinorField + ?Sized>(psi: &S, spec: GridSpec) -> Self {
        let n = spec.n() as isize;
        let mut values = Vec::with_capacity(spec.len());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    values.push(psi.value(spec.point(i, j, k)));
                }
            }
        }
        Self { layout: SpinorLayout::Cartesian(spec), values }
    }

    pub fn from_partial_waves(channels: Vec<Channel>, radii: Vec<f64>, amplitudes: &[Vec<Complex64>]) -> Result<Self> {
        if amplitudes.len() != radii.len() || amplitudes.iter().any(|a| a.len() != channels.len()) {
            return Err(Error::InvalidArgument("amplitude table does not match channels × radii".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("radial grid must be increasing".into()));
        }
        let values = amplitudes
            .iter()
            .flat_map(|row| row.iter().map(|&c| [c, Complex64::new(0.0, 0.0)]))
            .collect();
        Ok(Self { layout: SpinorLayout::PartialWave { channels, radii }, values })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|s| s.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }

    fn trilinear(&self, spec: &GridSpec, x: Vec3) -> Spinor {
        let n = spec.n() as isize;
        let mut base = [0isize; 3];
        let mut frac = [0.0; 3];
        for d in 0..3 {
            let t = (x[d] + spec.half_width) / spec.h - 0.5;
            let f = t.floor();
            base[d] = f as isize;
            frac[d] = t - f;
        }
        let mut out = ZERO_SPINOR;
        for corner in 0..8 {
            let off = [(corner >> 2) & 1, (corner >> 1) & 1, corner & 1];
            let idx = [base[0] + off[0] as isize, base[1] + off[1] as isize, base[2] + off[2] as isize];
            if idx.iter().any(|&v| v < 0 || v >= n) {
                continue;
            }
            let mut w = 1.0;
            for d in 0..3 {
                w *= if off[d] == 1 { frac[d] } else { 1.0 - frac[d] };
            }
            let v = self.values[spec.index(idx[0] as usize, idx[1] as usize, idx[2] as usize)];
            out[0] += w * v[0];
            out[1] += w * v[1];
        }
        out
    }

    fn radial_interp(&self, channels: &[Channel], radii: &[f64], x: Vec3) -> Spinor {
        let r = norm3(x);
        if radii.is_empty() || r < radii[0] || r > *radii.last().unwrap() || r == 0.0 {
            return ZERO_SPINOR;
        }
        let nc = channels.len();
        let hi = radii.partition_point(|&q| q < r).clamp(1, radii.len() - 1);
        let lo = hi - 1;
        let t = if radii.len() == 1 { 0.0 } else { (r - radii[lo]) / (radii[hi] - radii[lo]) };
        let coeffs: Vec<Complex64> = (0..nc)
            .map(|a| self.values[lo * nc + a][0] * (1.0 - t) + self.values[hi * nc + a][0] * t)
            .collect();
        resum(channels, &coeffs, scale3(1.0 / r, x))
    }
}

/// Trilinear interpolation (zero outside the box) for Cartesian layouts and
/// linear-in-r channel interpolation for partial-wave layouts.
impl SpinorField for SpinorGrid {
    fn value(&self, x: Vec3) -> Spinor {
        match &self.layout {
            SpinorLayout::Cartesian(spec) => self.trilinear(spec, x),
            SpinorLayout::PartialWave { channels, radii } => self.radial_interp(channels, radii, x),
        }
    }
}
