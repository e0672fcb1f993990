//! Run parameters and the derived quantities r and window exponents.
//!
//! The single deliberate float step in the library: log N is taken in f64 and
//! frozen as an exact dyadic rational. Everything downstream compares exactly
//! against that frozen value, so results are reproducible bit for bit.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::heights::HeightValue;

#[derive(Debug, Clone)]
pub struct FitParams {
    pub n: u32,
    pub kappa: BigRational,
    pub tau: BigRational,
    pub eta: BigRational,
    pub epsilon: BigRational,
    pub r_override: Option<u64>,
    pub num_candidates: u32,
    pub theta: BigRational,
    pub max_iterations: u32,
    pub seed: u64,
    pub alpha: BigRational,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl FitParams {
    pub fn new(n: u32, kappa: BigRational) -> Self {
        FitParams {
            n,
            kappa,
            tau: BigRational::one(),
            eta: BigRational::one(),
            epsilon: ratio(1, 10),
            r_override: None,
            num_candidates: 32,
            theta: ratio(1, 4),
            max_iterations: 8,
            seed: 0,
            alpha: BigRational::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("dimension n must be at least 1"));
        }
        let n = BigRational::from_integer(BigInt::from(self.n));
        if self.kappa.is_negative() || self.kappa >= n {
            return Err(Error::invalid(format!(
                "kappa = {} must lie in [0, n) with n = {}",
                self.kappa, self.n
            )));
        }
        if self.tau < BigRational::one() {
            return Err(Error::invalid("tau must be at least 1"));
        }
        if self.eta < BigRational::one() {
            return Err(Error::invalid("eta must be at least 1"));
        }
        if !self.epsilon.is_positive() || self.epsilon >= BigRational::one() {
            return Err(Error::invalid("epsilon must lie in (0, 1)"));
        }
        if !self.theta.is_positive() || self.theta >= BigRational::one() {
            return Err(Error::invalid("theta must lie in (0, 1)"));
        }
        if self.num_candidates == 0 {
            return Err(Error::invalid("num_candidates must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if self.alpha < BigRational::one() {
            return Err(Error::invalid("alpha must be at least 1"));
        }
        if self.r_override == Some(0) {
            return Err(Error::invalid("r override must be positive"));
        }
        Ok(())
    }

    /// Exponent n/(n-kappa) governing the prime window size.
    pub fn window_exponent(&self) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.n));
        &n / (&n - &self.kappa)
    }

    /// Exponent n*kappa/(n-kappa) governing r.
    pub fn r_exponent(&self) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.n));
        (&n * &self.kappa) / (&n - &self.kappa)
    }

    /// r = ceiling(eta * lambda^{n*kappa/(n-kappa)}), or the override.
    /// The ceiling is exact: r is the least integer with
    /// r^b >= eta^b * lambda^a where a/b is the reduced exponent.
    pub fn derive_r(&self, lambda: &BigRational) -> Result<u64> {
        if let Some(r) = self.r_override {
            return Ok(r);
        }
        let e = self.r_exponent();
        let a = e.numer().to_usize().ok_or_else(|| {
            Error::invalid("r exponent numerator out of range")
        })?;
        let b = e.denom().to_usize().ok_or_else(|| {
            Error::invalid("r exponent denominator out of range")
        })?;
        let target = num::pow::pow(self.eta.clone(), b) * num::pow::pow(lambda.clone(), a);
        let guess = self.eta.to_f64().unwrap_or(1.0)
            * lambda.to_f64().unwrap_or(1.0).powf(a as f64 / b as f64);
        let mut r = guess.ceil().max(1.0) as u64;
        let value = |r: u64| num::pow::pow(BigRational::from_integer(BigInt::from(r)), b);
        while r > 1 && value(r - 1) >= target {
            r -= 1;
        }
        while value(r) < target {
            r += 1;
        }
        Ok(r)
    }
}

/// lambda = log N, frozen as an exact dyadic rational.
pub fn log_height(n: &HeightValue) -> Result<BigRational> {
    let lambda = n.ln();
    if !lambda.is_finite() {
        return Err(Error::invalid("height bound out of floating range"));
    }
    BigRational::from_float(lambda)
        .ok_or_else(|| Error::invalid("height bound yields no finite log"))
}

/// Parse "a/b", an integer, or a decimal like "0.25" into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {num:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {den:?}")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let digits = |t: &str| -> Result<BigInt> {
        if t.is_empty() {
            return Ok(BigInt::zero());
        }
        if !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad number {s:?}")));
        }
        t.parse()
            .map_err(|_| Error::Parse(format!("bad number {s:?}")))
    };
    let int_val = digits(int_part)?;
    let frac_val = digits(frac_part)?;
    let scale = num::pow::pow(BigInt::from(10), frac_part.len());
    let num = (int_val * &scale + frac_val) * BigInt::from(sign);
    Ok(BigRational::new(num, scale))
}
