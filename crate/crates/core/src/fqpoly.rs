//! Dense univariate polynomials over a prime field F_q.
//!
//! Coefficients are stored little-endian (index = exponent) and always reduced
//! mod q with no trailing zeros, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::{inv_mod_prime, mul_mod};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl FqPoly {
    pub fn new(q: u64, coeffs: Vec<u64>) -> Self {
        debug_assert!(q >= 2);
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % q).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { q, coeffs }
    }

    pub fn zero(q: u64) -> Self {
        FqPoly { q, coeffs: Vec::new() }
    }

    pub fn one(q: u64) -> Self {
        FqPoly::constant(q, 1)
    }

    pub fn constant(q: u64, c: u64) -> Self {
        FqPoly::new(q, vec![c])
    }

    /// The monomial c*T^k.
    pub fn monomial(q: u64, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        FqPoly::new(q, v)
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-q
    /// digits of `index` (least significant digit = constant term).
    pub fn monic_from_index(q: u64, deg: usize, mut index: u64) -> Self {
        let mut v = vec![0u64; deg + 1];
        for c in v.iter_mut().take(deg) {
            *c = index % q;
            index /= q;
        }
        debug_assert_eq!(index, 0);
        v[deg] = 1;
        FqPoly { q, coeffs: v }
    }

    /// Base-q packing of the lower coefficients of a monic polynomial; inverse
    /// of `monic_from_index`.
    pub fn monic_index(&self) -> u64 {
        debug_assert_eq!(self.leading(), 1);
        let deg = self.degree().unwrap();
        let mut idx = 0u64;
        for i in (0..deg).rev() {
            idx = idx * self.q + self.coeff(i);
        }
        idx
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check_field(&self, other: &FqPoly) {
        assert_eq!(self.q, other.q, "polynomials over different base fields");
    }

    pub fn add(&self, other: &FqPoly) -> FqPoly {
        self.check_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = vec![0u64; n];
        for (i, c) in v.iter_mut().enumerate() {
            *c = (self.coeff(i) + other.coeff(i)) % self.q;
        }
        FqPoly::new(self.q, v)
    }

    pub fn neg(&self) -> FqPoly {
        let q = self.q;
        let v = self.coeffs.iter().map(|&c| (q - c) % q).collect();
        FqPoly { q, coeffs: v }
    }

    pub fn sub(&self, other: &FqPoly) -> FqPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FqPoly) -> FqPoly {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero(self.q);
        }
        let mut v = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let idx = i + j;
                v[idx] = (v[idx] + mul_mod(a, b, self.q)) % self.q;
            }
        }
        FqPoly::new(self.q, v)
    }

    pub fn mul_scalar(&self, c: u64) -> FqPoly {
        let c = c % self.q;
        let v = self.coeffs.iter().map(|&a| mul_mod(a, c, self.q)).collect();
        FqPoly::new(self.q, v)
    }

    /// Quotient and remainder; panics on division by zero (callers guard).
    pub fn divrem(&self, divisor: &FqPoly) -> (FqPoly, FqPoly) {
        self.check_field(divisor);
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (FqPoly::zero(self.q), self.clone());
        }
        let q = self.q;
        let lead_inv = inv_mod_prime(divisor.leading(), q);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let f = mul_mod(c, lead_inv, q);
            quot[i - dd] = f;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let sub = mul_mod(f, dc, q);
                rem[idx] = (rem[idx] + q - sub) % q;
            }
        }
        (FqPoly::new(q, quot), FqPoly::new(q, rem))
    }

    pub fn rem(&self, modulus: &FqPoly) -> FqPoly {
        self.divrem(modulus).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &FqPoly) -> FqPoly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &FqPoly) -> bool {
        other.divrem(self).1.is_zero()
    }

    /// Monic gcd. gcd(0, 0) is not defined; callers guard.
    pub fn gcd(&self, other: &FqPoly) -> FqPoly {
        self.check_field(other);
        assert!(
            !(self.is_zero() && other.is_zero()),
            "gcd of two zero polynomials"
        );
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn ext_gcd(&self, other: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        self.check_field(other);
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FqPoly::one(q), FqPoly::zero(q));
        let (mut t0, mut t1) = (FqPoly::zero(q), FqPoly::one(q));
        while !r1.is_zero() {
            let (quot, rem) = r0.divrem(&r1);
            let ns = s0.sub(&quot.mul(&s1));
            let nt = t0.sub(&quot.mul(&t1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        let lead = r0.leading();
        if lead != 0 && lead != 1 {
            let inv = inv_mod_prime(lead, q);
            r0 = r0.mul_scalar(inv);
            s0 = s0.mul_scalar(inv);
            t0 = t0.mul_scalar(inv);
        }
        (r0, s0, t0)
    }

    /// Inverse of self modulo `modulus`; None when not coprime.
    pub fn inverse_mod(&self, modulus: &FqPoly) -> Option<FqPoly> {
        let (g, u, _) = self.ext_gcd(modulus);
        if g.is_constant() && !g.is_zero() {
            Some(u.rem(modulus))
        } else {
            None
        }
    }

    pub fn monic(&self) -> FqPoly {
        let lead = self.leading();
        if lead == 0 || lead == 1 {
            return self.clone();
        }
        self.mul_scalar(inv_mod_prime(lead, self.q))
    }

    pub fn derivative(&self) -> FqPoly {
        if self.coeffs.len() <= 1 {
            return FqPoly::zero(self.q);
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, (i as u64) % self.q, self.q))
            .collect();
        FqPoly::new(self.q, v)
    }

    /// self^exp mod modulus by square and multiply.
    pub fn pow_mod(&self, mut exp: u64, modulus: &FqPoly) -> FqPoly {
        let mut base = self.rem(modulus);
        let mut acc = FqPoly::one(self.q);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes (q = p prime, so
    /// every exponent is a multiple of p and coefficients are Frobenius-fixed).
    pub fn pth_root(&self) -> FqPoly {
        let p = self.q as usize;
        let v = self.coeffs.iter().step_by(p).copied().collect();
        FqPoly::new(self.q, v)
    }

    /// Order on same-field polynomials: by degree, then by coefficients read
    /// from the leading term down. Gives the enumeration order used everywhere.
    pub fn cmp_poly(&self, other: &FqPoly) -> Ordering {
        self.check_field(other);
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..self.coeffs.len()).rev() {
            match self.coeffs[i].cmp(&other.coeffs[i]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPoly(q={}, {})", self.q, self)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}
