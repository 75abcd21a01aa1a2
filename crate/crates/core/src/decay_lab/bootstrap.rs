//! Exact iteration of the squared-norm decay exponent `ε_{k+1} = min(ε_k + α, 4)`
//! starting from `ε₀ = 3/p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapState {
    pub epsilon: BigRational,
    pub alpha: BigRational,
    pub step: usize,
    pub history: Vec<BigRational>,
}

impl BootstrapState {
    pub fn start(p: &BigRational, alpha: &BigRational) -> Result<Self> {
        if *p < BigRational::from_integer(2.into()) {
            return Err(Error::Hypothesis(format!("p = {p} is below 2")));
        }
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
        }
        let eps = BigRational::from_integer(3.into()) / p;
        Ok(Self { epsilon: eps.clone(), alpha: alpha.clone(), step: 0, history: vec![eps] })
    }

    pub fn done(&self) -> bool {
        self.epsilon == cap()
    }

    /// One application of the recurrence; a no-op once the cap is reached.
    pub fn advance(&mut self) {
        if self.done() {
            return;
        }
        let next = (&self.epsilon + &self.alpha).min(cap());
        self.epsilon = next.clone();
        self.history.push(next);
        self.step += 1;
    }
}

fn cap() -> BigRational {
    BigRational::from_integer(4.into())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapRun {
    pub p: BigRational,
    pub alpha: BigRational,
    /// `ε₀, ε₁, …, 4`.
    pub sequence: Vec<BigRational>,
    pub steps: usize,
}

/// Row of the exponent table: step, exact fraction, decimal value.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BootstrapRow {
    pub step: usize,
    pub epsilon: String,
    pub decimal: f64,
}

impl BootstrapRun {
    pub fn table(&self) -> Vec<BootstrapRow> {
        self.sequence
            .iter()
            .enumerate()
            .map(|(step, e)| BootstrapRow { step, epsilon: e.to_string(), decimal: e.to_f64().unwrap_or(f64::NAN) })
            .collect()
    }
}

/// `⌈(4 - 3/p)/α⌉`.
pub fn predicted_steps(p: &BigRational, alpha: &BigRational) -> BigInt {
    ((cap() - BigRational::from_integer(3.into()) / p) / alpha).ceil().to_integer()
}

pub fn bootstrap_exponents(p: &BigRational, alpha: &BigRational) -> Result<BootstrapRun> {
    let mut state = BootstrapState::start(p, alpha)?;
    while !state.done() {
        state.advance();
    }
    debug_assert_eq!(BigInt::from(state.step), predicted_steps(p, alpha));
    Ok(BootstrapRun { p: p.clone(), alpha: alpha.clone(), sequence: state.history, steps: state.step })
}

/// Parses `"7"`, `"1/2"`, `"-3/4"` or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as a rational number"));
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}
