//! Places of Q and F_q(T), exact local absolute values, and projective
//! heights. Heights are stored exactly, never as floating logs; the float
//! views exist only for reports.

use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{factor_fqpoly, factor_integer};
use crate::field::{content_and_primitive, FieldDescriptor, FieldElement, FieldKind, RingElement};
use crate::fqpoly::FqPoly;
use crate::primes::Prime;
use crate::residue::ProjPoint;

/// A place of the global field: the distinguished infinite place or a finite
/// place given by a prime. Over F_q(T) the infinite place is the 1/T
/// valuation with |f| = q^deg f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Infinite(FieldDescriptor),
    Finite(Prime),
}

impl Place {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            Place::Infinite(d) => *d,
            Place::Finite(p) => p.field(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite(_) => write!(f, "infinity"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Exact local absolute value ||x||_v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalValue {
    /// Finite place: ||x||_v = norm^(-ord).
    Finite { ord: i64, norm: BigInt },
    /// Archimedean value over Q, as an exact rational.
    ArchRational(BigRational),
    /// The 1/T place: ||x|| = q^exp with exp = deg num - deg den.
    DegreeExponent { q: u64, exp: i64 },
}

impl LocalValue {
    pub fn value(&self) -> BigRational {
        match self {
            LocalValue::Finite { ord, norm } => power_rational(norm, -ord),
            LocalValue::ArchRational(r) => r.clone(),
            LocalValue::DegreeExponent { q, exp } => power_rational(&BigInt::from(*q), *exp),
        }
    }
}

pub fn power_rational(base: &BigInt, exp: i64) -> BigRational {
    let mag = num::pow::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// A projective height, exact in the field's natural representation: a
/// positive rational over Q, a power of q over F_q(T). Always at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HeightValue {
    Rational(BigRational),
    QPower { q: u64, exp: i64 },
}

impl HeightValue {
    pub fn from_rational(r: BigRational) -> Self {
        assert!(r >= BigRational::one(), "heights are at least 1");
        HeightValue::Rational(r)
    }

    pub fn from_integer(n: u64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn q_power(q: u64, exp: i64) -> Self {
        assert!(exp >= 0, "heights are at least 1");
        HeightValue::QPower { q, exp }
    }

    pub fn one_for(field: &FieldDescriptor) -> Self {
        match field.kind {
            FieldKind::Rationals => HeightValue::Rational(BigRational::one()),
            FieldKind::RationalFunctions => HeightValue::QPower {
                q: field.q_value(),
                exp: 0,
            },
        }
    }

    /// The exact numeric value. Feasible at desk scale even for q-powers.
    pub fn as_rational(&self) -> BigRational {
        match self {
            HeightValue::Rational(r) => r.clone(),
            HeightValue::QPower { q, exp } => power_rational(&BigInt::from(*q), *exp),
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            HeightValue::Rational(r) => ln_rational(r),
            HeightValue::QPower { q, exp } => (*exp as f64) * (*q as f64).ln(),
        }
    }

    /// Exact comparison of the numeric values, across representations.
    pub fn cmp_value(&self, other: &HeightValue) -> std::cmp::Ordering {
        match (self, other) {
            (HeightValue::Rational(a), HeightValue::Rational(b)) => a.cmp(b),
            (HeightValue::QPower { q: qa, exp: ea }, HeightValue::QPower { q: qb, exp: eb })
                if qa == qb =>
            {
                ea.cmp(eb)
            }
            _ => self.as_rational().cmp(&other.as_rational()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            HeightValue::Rational(r) => r.is_one(),
            HeightValue::QPower { exp, .. } => *exp == 0,
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            HeightValue::QPower { q, exp } => write!(f, "{q}^{exp}"),
        }
    }
}

/// Natural log of a positive integer, stable far beyond the f64 range.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "log of a nonpositive integer");
    ln_biguint(x.magnitude())
}

pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 900 {
        x.to_f64().expect("within f64 range").ln()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_f64().expect("53 bits fit");
        top.ln() + (shift as f64) * std::f64::consts::LN_2
    }
}

pub fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log of a nonpositive rational");
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ord_in_bigint(x: &BigInt, p: &BigInt) -> i64 {
    let mut v = x.magnitude().clone();
    let p = p.magnitude();
    let mut ord = 0i64;
    loop {
        let (quo, rem) = num::Integer::div_rem(&v, p);
        if !rem.is_zero() {
            return ord;
        }
        v = quo;
        ord += 1;
    }
}

fn ord_in_poly(x: &FqPoly, f: &FqPoly) -> i64 {
    let mut v = x.clone();
    let mut ord = 0i64;
    loop {
        let (quo, rem) = v.divrem(f);
        if !rem.is_zero() {
            return ord;
        }
        v = quo;
        ord += 1;
    }
}

fn check_place_field(x: &FieldElement, v: &Place) -> Result<()> {
    if x.descriptor() != v.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// The local absolute value of a nonzero element at a place.
pub fn local_value(x: &FieldElement, v: &Place) -> Result<LocalValue> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    check_place_field(x, v)?;
    match (x, v) {
        (FieldElement::Rational(r), Place::Infinite(_)) => {
            Ok(LocalValue::ArchRational(r.abs()))
        }
        (FieldElement::Rational(r), Place::Finite(p)) => {
            let p = p.as_rational_prime();
            let ord = ord_in_bigint(r.numer(), &p) - ord_in_bigint(r.denom(), &p);
            Ok(LocalValue::Finite { ord, norm: p })
        }
        (FieldElement::Function(rf), Place::Infinite(_)) => {
            let dn = rf.num().degree().expect("nonzero numerator") as i64;
            let dd = rf.den().degree().expect("nonzero denominator") as i64;
            Ok(LocalValue::DegreeExponent {
                q: rf.q(),
                exp: dn - dd,
            })
        }
        (FieldElement::Function(rf), Place::Finite(p)) => {
            let f = p.as_irreducible();
            let ord = ord_in_poly(rf.num(), f) - ord_in_poly(rf.den(), f);
            Ok(LocalValue::Finite {
                ord,
                norm: p.norm(),
            })
        }
    }
}

/// Verify exactly that the product of ||x||_v over all places equals 1,
/// locating the contributing finite places by factoring.
pub fn product_formula_check(x: &FieldElement) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match x {
        FieldElement::Rational(r) => {
            let mut prod = r.abs();
            for (p, e) in factor_integer(r.numer())? {
                prod *= power_rational(&p, -(e as i64));
            }
            for (p, e) in factor_integer(r.denom())? {
                prod *= power_rational(&p, e as i64);
            }
            Ok(prod.is_one())
        }
        FieldElement::Function(rf) => {
            let dn = rf.num().degree().expect("nonzero numerator") as i64;
            let dd = rf.den().degree().expect("nonzero denominator") as i64;
            let mut exp_sum = dn - dd;
            let (_, num_fac) = factor_fqpoly(rf.num());
            for (f, e) in num_fac {
                exp_sum -= (e as i64) * f.degree().expect("irreducible factor") as i64;
            }
            let (_, den_fac) = factor_fqpoly(rf.den());
            for (f, e) in den_fac {
                exp_sum += (e as i64) * f.degree().expect("irreducible factor") as i64;
            }
            Ok(exp_sum == 0)
        }
    }
}

/// H(x) = H(1:x). H(0) = 1.
pub fn height_affine(x: &FieldElement) -> HeightValue {
    match x {
        FieldElement::Rational(r) => {
            let n = r.numer().abs();
            let d = r.denom().abs();
            HeightValue::Rational(BigRational::from_integer(n.max(d)))
        }
        FieldElement::Function(rf) => {
            let dn = rf.num().degree().map_or(0, |d| d as i64);
            let dd = rf.den().degree().map_or(0, |d| d as i64);
            HeightValue::q_power(rf.q(), dn.max(dd))
        }
    }
}

/// Height of a projective point, read off the canonical primitive
/// representative.
pub fn height_projective(p: &ProjPoint) -> HeightValue {
    match p.field().kind {
        FieldKind::Rationals => {
            let max = p
                .coords()
                .iter()
                .map(|c| c.as_integer().abs())
                .max()
                .expect("nonzero point");
            HeightValue::Rational(BigRational::from_integer(max))
        }
        FieldKind::RationalFunctions => {
            let max = p
                .coords()
                .iter()
                .filter_map(|c| c.as_polynomial().degree())
                .max()
                .expect("nonzero point");
            HeightValue::q_power(p.field().q_value(), max as i64)
        }
    }
}

/// H(1:x_1:...:x_n): clear denominators against the leading 1 and take the
/// primitive max.
pub fn height_one_affix(v: &[FieldElement]) -> HeightValue {
    if v.is_empty() {
        return HeightValue::Rational(BigRational::one());
    }
    let desc = v[0].descriptor();
    let mut full = Vec::with_capacity(v.len() + 1);
    full.push(desc.one());
    full.extend_from_slice(v);
    let (_, w) = content_and_primitive(&full).expect("vector contains 1");
    match desc.kind {
        FieldKind::Rationals => {
            let max = w
                .iter()
                .map(|c| c.as_integer().abs())
                .max()
                .expect("nonempty");
            HeightValue::Rational(BigRational::from_integer(max))
        }
        FieldKind::RationalFunctions => {
            let max = w
                .iter()
                .filter_map(|c| c.as_polynomial().degree())
                .max()
                .expect("contains a nonzero entry");
            HeightValue::q_power(desc.q_value(), max as i64)
        }
    }
}

/// N_K(x) for a nonzero ring element: |x| over Z, q^deg over F_q[T].
pub fn norm_of_ring_element(x: &RingElement) -> Result<BigInt> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(match x {
        RingElement::Integer(i) => i.abs(),
        RingElement::Polynomial(p) => {
            let d = p.degree().expect("nonzero");
            num::pow::pow(BigInt::from(p.q()), d)
        }
    })
}
