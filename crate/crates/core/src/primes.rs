//! Primes of Q and F_q(T), prime windows derived from run parameters, and
//! exact enumeration with counting cross-checks.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime_u64, moebius_u64};
use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{FieldDescriptor, FieldKind};
use crate::fqpoly::FqPoly;
use crate::heights::HeightValue;
use crate::params::{log_height, FitParams};

/// A finite prime: a rational prime p or a monic irreducible over F_q.
/// Constructors validate, so a held value is always genuinely prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prime {
    Rational(u64),
    Irreducible(FqPoly),
}

impl Prime {
    pub fn rational(p: u64) -> Result<Prime> {
        if !is_prime_u64(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(Prime::Rational(p))
    }

    /// Validated by an iterated-Frobenius irreducibility test, independent of
    /// the enumeration sieve.
    pub fn irreducible(f: FqPoly) -> Result<Prime> {
        if !f.is_monic() {
            return Err(Error::invalid(format!("{f} is not monic")));
        }
        if !is_irreducible(&f) {
            return Err(Error::invalid(format!("{f} is not irreducible")));
        }
        Ok(Prime::Irreducible(f))
    }

    /// Sieve output is validated in aggregate by the counting formula.
    pub(crate) fn irreducible_unchecked(f: FqPoly) -> Prime {
        debug_assert!(f.is_monic() && is_irreducible(&f));
        Prime::Irreducible(f)
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            Prime::Rational(_) => FieldDescriptor::rationals(),
            Prime::Irreducible(f) => FieldDescriptor {
                kind: FieldKind::RationalFunctions,
                q: Some(f.q()),
                degree_d: 1,
            },
        }
    }

    pub fn norm(&self) -> BigInt {
        match self {
            Prime::Rational(p) => BigInt::from(*p),
            Prime::Irreducible(f) => num::pow::pow(
                BigInt::from(f.q()),
                f.degree().expect("irreducible is nonconstant"),
            ),
        }
    }

    pub fn norm_u64(&self) -> Option<u64> {
        match self {
            Prime::Rational(p) => Some(*p),
            Prime::Irreducible(f) => {
                let d = f.degree().expect("nonconstant") as u32;
                f.q().checked_pow(d)
            }
        }
    }

    pub fn ln_norm(&self) -> f64 {
        match self {
            Prime::Rational(p) => (*p as f64).ln(),
            Prime::Irreducible(f) => {
                f.degree().expect("nonconstant") as f64 * (f.q() as f64).ln()
            }
        }
    }

    pub fn as_rational_prime(&self) -> BigInt {
        match self {
            Prime::Rational(p) => BigInt::from(*p),
            _ => panic!("expected a rational prime"),
        }
    }

    pub fn as_irreducible(&self) -> &FqPoly {
        match self {
            Prime::Irreducible(f) => f,
            _ => panic!("expected an irreducible polynomial"),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Rational(p) => write!(f, "{p}"),
            Prime::Irreducible(g) => write!(f, "{g}"),
        }
    }
}

impl Ord for Prime {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Prime::Rational(a), Prime::Rational(b)) => a.cmp(b),
            (Prime::Irreducible(a), Prime::Irreducible(b)) => a.cmp_poly(b),
            (Prime::Rational(_), Prime::Irreducible(_)) => Ordering::Less,
            (Prime::Irreducible(_), Prime::Rational(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Prime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A real number stored exactly as pow^(1/root); comparisons against
/// rationals cross-multiply, so window membership is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealBound {
    pub pow: BigRational,
    pub root: u32,
}

impl RealBound {
    pub fn from_rational(r: BigRational) -> Self {
        assert!(r.is_positive(), "window bounds are positive");
        RealBound { pow: r, root: 1 }
    }

    pub fn value_f64(&self) -> f64 {
        self.pow
            .to_f64()
            .map(|v| v.powf(1.0 / self.root as f64))
            .unwrap_or(f64::INFINITY)
    }

    /// Ordering of the integer x against the bound's value.
    pub fn cmp_integer(&self, x: u64) -> Ordering {
        let lhs = num::pow::pow(
            BigRational::from_integer(BigInt::from(x)),
            self.root as usize,
        );
        lhs.cmp(&self.pow)
    }

    /// Least integer at or above the value.
    pub fn ceil_integer(&self) -> u64 {
        let mut x = self.value_f64().ceil().max(0.0) as u64;
        while x > 0 && self.cmp_integer(x - 1) != Ordering::Less {
            x -= 1;
        }
        while self.cmp_integer(x) == Ordering::Less {
            x += 1;
        }
        x
    }

    /// Greatest integer at or below the value.
    pub fn floor_integer(&self) -> u64 {
        let mut x = self.value_f64().floor().max(0.0) as u64;
        while self.cmp_integer(x + 1) != Ordering::Greater {
            x += 1;
        }
        while x > 0 && self.cmp_integer(x) == Ordering::Greater {
            x -= 1;
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    NormInInterval,
    NormEqualsTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWindow {
    pub field: FieldDescriptor,
    pub lower: RealBound,
    pub upper: RealBound,
    pub mode: WindowMode,
    pub target_degree: Option<u32>,
}

/// Enumeration caps. Windows beyond these are refused rather than attempted.
#[derive(Debug, Clone, Copy)]
pub struct WindowCaps {
    pub max_norm: u64,
    pub max_degree: u32,
}

impl Default for WindowCaps {
    fn default() -> Self {
        WindowCaps {
            max_norm: 100_000_000,
            max_degree: 24,
        }
    }
}

impl PrimeWindow {
    pub fn rational_interval(lower: BigRational, upper: BigRational) -> Result<Self> {
        if !lower.is_positive() || upper < lower {
            return Err(Error::invalid("window bounds must satisfy 0 < lower <= upper"));
        }
        Ok(PrimeWindow {
            field: FieldDescriptor::rationals(),
            lower: RealBound::from_rational(lower),
            upper: RealBound::from_rational(upper),
            mode: WindowMode::NormInInterval,
            target_degree: None,
        })
    }

    pub fn degree_target(q: u64, h: u32) -> Result<Self> {
        let field = FieldDescriptor::rational_functions(q)?;
        if h == 0 {
            return Err(Error::invalid("target degree must be positive"));
        }
        let norm = num::pow::pow(BigInt::from(q), h as usize);
        let bound = RealBound::from_rational(BigRational::from_integer(norm));
        Ok(PrimeWindow {
            field,
            lower: bound.clone(),
            upper: bound,
            mode: WindowMode::NormEqualsTarget,
            target_degree: Some(h),
        })
    }
}

/// Least h with (q^h)^root >= pow.
pub(crate) fn smallest_degree_with_norm_at_least(
    q: u64,
    pow: &BigRational,
    root: u32,
) -> u32 {
    let ln_pow = crate::heights::ln_rational(pow);
    let guess = (ln_pow / root as f64 / (q as f64).ln()).ceil().max(1.0);
    let mut h = guess as u32;
    let norm_pow = |h: u32| {
        num::pow::pow(
            BigRational::from_integer(BigInt::from(q)),
            h as usize * root as usize,
        )
    };
    while h > 1 && norm_pow(h - 1) >= *pow {
        h -= 1;
    }
    while norm_pow(h) < *pow {
        h += 1;
    }
    h
}

/// The prime window the run parameters dictate for a height bound N: over Q
/// the interval [tau * (log N)^{n/(n-kappa)}, twice that]; over F_q(T) the
/// single degree h = ceil(log_q of the lower edge), bumped above d.
pub fn window_from_params(params: &FitParams, n_bound: &HeightValue) -> Result<PrimeWindow> {
    params.validate()?;
    let lambda = log_height(n_bound)?;
    if lambda <= BigRational::one() {
        return Err(Error::invalid("the height bound must exceed e"));
    }
    let e = params.window_exponent();
    let wn = e
        .numer()
        .to_usize()
        .ok_or_else(|| Error::invalid("window exponent out of range"))?;
    let wd = e
        .denom()
        .to_usize()
        .ok_or_else(|| Error::invalid("window exponent out of range"))?;
    let pow_lower =
        num::pow::pow(params.tau.clone(), wd) * num::pow::pow(lambda.clone(), wn);
    let root = wd as u32;
    match n_bound {
        HeightValue::Rational(_) => {
            let pow_upper =
                num::pow::pow(BigRational::from_integer(BigInt::from(2)), wd) * &pow_lower;
            Ok(PrimeWindow {
                field: FieldDescriptor::rationals(),
                lower: RealBound {
                    pow: pow_lower,
                    root,
                },
                upper: RealBound {
                    pow: pow_upper,
                    root,
                },
                mode: WindowMode::NormInInterval,
                target_degree: None,
            })
        }
        HeightValue::QPower { q, .. } => {
            let d = 1u32;
            let h = smallest_degree_with_norm_at_least(*q, &pow_lower, root).max(d + 1);
            PrimeWindow::degree_target(*q, h)
        }
    }
}

/// The primes in the window, ascending, after checking the caps.
pub fn enumerate_primes(w: &PrimeWindow, caps: &WindowCaps) -> Result<Vec<Prime>> {
    match w.mode {
        WindowMode::NormInInterval => {
            let lo = w.lower.ceil_integer().max(2);
            let hi = w.upper.floor_integer();
            if hi > caps.max_norm {
                return Err(Error::ResourceLimit(format!(
                    "window upper edge {hi} exceeds the cap {}",
                    caps.max_norm
                )));
            }
            if hi < lo {
                return Ok(Vec::new());
            }
            Ok(sieve_interval(lo, hi)
                .into_iter()
                .map(Prime::Rational)
                .collect())
        }
        WindowMode::NormEqualsTarget => {
            let h = w.target_degree.expect("target mode carries a degree");
            let q = w.field.q_value();
            if h > caps.max_degree {
                return Err(Error::ResourceLimit(format!(
                    "target degree {h} exceeds the cap {}",
                    caps.max_degree
                )));
            }
            match q.checked_pow(h) {
                Some(norm) if norm <= caps.max_norm => {}
                _ => {
                    return Err(Error::ResourceLimit(format!(
                        "target norm {q}^{h} exceeds the cap {}",
                        caps.max_norm
                    )))
                }
            }
            let polys = monic_irreducibles(q, h as usize);
            let expected = count_irreducibles(q, h);
            if BigInt::from(polys.len()) != expected {
                return Err(Error::integrity(format!(
                    "sieve found {} irreducibles of degree {h} over F_{q}, counting formula gives {expected}",
                    polys.len()
                )));
            }
            Ok(polys
                .into_iter()
                .map(Prime::irreducible_unchecked)
                .collect())
        }
    }
}

/// Number of monic irreducibles of degree h over F_q, by Moebius inversion.
pub fn count_irreducibles(q: u64, h: u32) -> BigInt {
    assert!(h >= 1, "degree must be positive");
    let mut sum = BigInt::zero();
    for m in 1..=h {
        if h % m != 0 {
            continue;
        }
        let mu = moebius_u64(m as u64);
        if mu == 0 {
            continue;
        }
        let term = num::pow::pow(BigInt::from(q), (h / m) as usize);
        if mu > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = num::Integer::div_rem(&sum, &BigInt::from(h));
    assert!(rem.is_zero(), "irreducible count divides evenly");
    quot
}

fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    primes
}

/// Primes in [lo, hi] by a chunked segmented sieve.
fn sieve_interval(lo: u64, hi: u64) -> Vec<u64> {
    let mut root = (hi as f64).sqrt() as u64 + 2;
    while root.saturating_mul(root) > hi {
        root -= 1;
    }
    let base = simple_sieve(root);
    let mut out = Vec::new();
    const CHUNK: u64 = 1 << 20;
    let mut start = lo.max(2);
    while start <= hi {
        let end = hi.min(start + CHUNK - 1);
        let len = (end - start + 1) as usize;
        let mut composite = vec![false; len];
        for &p in &base {
            let first = start.div_ceil(p).max(2) * p;
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        // any composite <= hi has a factor <= root, so unmarked means prime
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                out.push(start + i as u64);
            }
        }
        start = end + 1;
    }
    out
}

/// Monic irreducibles of degree exactly h, ascending by coefficients from the
/// leading end down. Built degree by degree with a product sieve: every
/// composite of degree n has a factor of degree <= n/2, already enumerated.
pub(crate) fn monic_irreducibles(q: u64, h: usize) -> Vec<FqPoly> {
    let mut by_degree: Vec<Vec<FqPoly>> = vec![Vec::new(); h + 1];
    for n in 1..=h {
        by_degree[n] = sieve_degree(q, n, &by_degree);
    }
    std::mem::take(&mut by_degree[h])
}

fn sieve_degree(q: u64, n: usize, lower: &[Vec<FqPoly>]) -> Vec<FqPoly> {
    let total = q.pow(n as u32) as usize;
    let mut composite = vec![0u64; total.div_ceil(64)];
    for k in 1..=n / 2 {
        for f in &lower[k] {
            mark_products(q, f, n - k, n, &mut composite);
        }
    }
    let mut out = Vec::with_capacity(total / n.max(1));
    for idx in 0..total {
        if composite[idx / 64] >> (idx % 64) & 1 == 0 {
            out.push(FqPoly::monic_from_index(q, n, idx as u64));
        }
    }
    out
}

/// Mark every product f*m with m monic of degree j as composite. The product
/// is maintained incrementally: stepping the coefficient odometer of m by one
/// at position i adds f shifted by i, and a digit wrap contributes q*f which
/// vanishes mod q.
fn mark_products(q: u64, f: &FqPoly, j: usize, n: usize, composite: &mut [u64]) {
    let k = f.coeffs().len() - 1;
    debug_assert_eq!(k + j, n);
    let mut prod = vec![0u64; n + 1];
    for (i, &c) in f.coeffs().iter().enumerate() {
        prod[i + j] = c;
    }
    let mut digits = vec![0u64; j];
    loop {
        let mut idx = 0u64;
        for &c in prod[..n].iter().rev() {
            idx = idx * q + c;
        }
        composite[(idx / 64) as usize] |= 1 << (idx % 64);
        let mut pos = 0;
        loop {
            if pos == j {
                return;
            }
            digits[pos] += 1;
            for (i, &c) in f.coeffs().iter().enumerate() {
                let slot = &mut prod[i + pos];
                *slot = (*slot + c) % q;
            }
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
