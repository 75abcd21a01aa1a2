use serde::Serialize;

use crate::error::{Error, Result};

/// `|A| ≈ constant · r^(-exponent)`; `residual` is the RMS misfit in `ln |A|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub constant: f64,
    pub residual: f64,
}

/// Least-squares line through `(ln r, ln m)`.
pub fn fit_decay_exponent(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 samples, got {}", samples.len())));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || !(samples[0].0 > 0.0) {
        return Err(Error::InvalidArgument("radii must be positive and increasing".into()));
    }
    if let Some(&(r, m)) = samples.iter().find(|s| !(s.1 > 0.0) || !s.1.is_finite()) {
        return Err(Error::InvalidArgument(format!("magnitude {m} at r = {r} is not positive")));
    }
    let n = samples.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().map(|&(r, m)| (r.ln(), m.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(DecayFit { exponent: -slope, constant: intercept.exp(), residual: (ss / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = [1.0, 2.0, 3.0, 5.0, 8.0].iter().map(|&r: &f64| (r, 5.0 * r.powf(-1.5))).collect();
        let f = fit_decay_exponent(&s).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-12 && (f.constant - 5.0).abs() < 1e-11 && f.residual < 1e-12);
    }

    #[test]
    fn constant_samples_and_errors() {
        let f = fit_decay_exponent(&[(1.0, 2.0), (2.0, 2.0), (4.0, 2.0)]).unwrap();
        assert!(f.exponent.abs() < 1e-14);
        assert!(fit_decay_exponent(&[(1.0, 2.0), (2.0, 0.0), (4.0, 2.0)]).is_err());
        assert!(fit_decay_exponent(&[(1.0, 2.0), (2.0, 1.0)]).is_err());
        assert!(fit_decay_exponent(&[(1.0, 2.0), (1.0, 1.0), (4.0, 2.0)]).is_err());
    }
}
