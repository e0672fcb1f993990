//! Global field arithmetic: exact elements of Q and of F_q(T), together with
//! the rings Z and F_q[T] their projective points live in.
//!
//! Every element is kept in canonical reduced form at all times; constructors
//! and operators re-canonicalize so equality is structural.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Zero};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::fqpoly::FqPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    RationalFunctions,
}

/// Which global field we are working over. Interfaces carry the extension
/// degree `d` of K over its base, but only the d = 1 backends exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub q: Option<u64>,
    pub degree_d: u32,
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor {
            kind: FieldKind::Rationals,
            q: None,
            degree_d: 1,
        }
    }

    pub fn rational_functions(q: u64) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(Error::invalid(format!("q = {q} is not prime")));
        }
        if q > 1 << 31 {
            return Err(Error::invalid(format!("q = {q} exceeds the supported range")));
        }
        Ok(FieldDescriptor {
            kind: FieldKind::RationalFunctions,
            q: Some(q),
            degree_d: 1,
        })
    }

    pub fn is_function_field(&self) -> bool {
        self.kind == FieldKind::RationalFunctions
    }

    pub fn q_value(&self) -> u64 {
        self.q.expect("function field descriptor carries q")
    }

    pub fn zero(&self) -> FieldElement {
        match self.kind {
            FieldKind::Rationals => FieldElement::Rational(BigRational::zero()),
            FieldKind::RationalFunctions => {
                FieldElement::Function(RatFunc::from_poly(FqPoly::zero(self.q_value())))
            }
        }
    }

    pub fn one(&self) -> FieldElement {
        match self.kind {
            FieldKind::Rationals => FieldElement::Rational(BigRational::one()),
            FieldKind::RationalFunctions => {
                FieldElement::Function(RatFunc::from_poly(FqPoly::one(self.q_value())))
            }
        }
    }

    pub fn ring_zero(&self) -> RingElement {
        match self.kind {
            FieldKind::Rationals => RingElement::Integer(BigInt::zero()),
            FieldKind::RationalFunctions => RingElement::Polynomial(FqPoly::zero(self.q_value())),
        }
    }

    pub fn ring_one(&self) -> RingElement {
        match self.kind {
            FieldKind::Rationals => RingElement::Integer(BigInt::one()),
            FieldKind::RationalFunctions => RingElement::Polynomial(FqPoly::one(self.q_value())),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::RationalFunctions => write!(f, "F{}(T)", self.q_value()),
        }
    }
}

/// Reduced fraction of F_q[T] polynomials: gcd(num, den) = 1, den monic,
/// zero stored as 0/1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FqPoly,
    den: FqPoly,
}

impl RatFunc {
    pub fn new(num: FqPoly, den: FqPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: FqPoly, den: FqPoly) -> Self {
        let q = num.q();
        if num.is_zero() {
            return RatFunc {
                num,
                den: FqPoly::one(q),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lead = den.leading();
        if lead != 1 {
            let inv = crate::arith::inv_mod_prime(lead, q);
            num = num.mul_scalar(inv);
            den = den.mul_scalar(inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: FqPoly) -> Self {
        let q = p.q();
        RatFunc {
            num: p,
            den: FqPoly::one(q),
        }
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn q(&self) -> u64 {
        self.num.q()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// An element of the global field K.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Function(RatFunc),
}

impl FieldElement {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldElement::Rational(_) => FieldDescriptor::rationals(),
            FieldElement::Function(rf) => FieldDescriptor {
                kind: FieldKind::RationalFunctions,
                q: Some(rf.q()),
                degree_d: 1,
            },
        }
    }

    pub fn from_integer(v: i64) -> FieldElement {
        FieldElement::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_fraction(num: BigInt, den: BigInt) -> Result<FieldElement> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement::Rational(BigRational::new(num, den)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Function(rf) => rf.is_zero(),
        }
    }

    fn check_same(&self, other: &FieldElement) {
        assert_eq!(
            self.descriptor(),
            other.descriptor(),
            "elements of different fields"
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other);
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a + b)
            }
            (FieldElement::Function(a), FieldElement::Function(b)) => {
                let num = a.num().mul(b.den()).add(&b.num().mul(a.den()));
                let den = a.den().mul(b.den());
                FieldElement::Function(RatFunc::reduce(num, den))
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Function(a) => FieldElement::Function(RatFunc {
                num: a.num.neg(),
                den: a.den.clone(),
            }),
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other);
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a * b)
            }
            (FieldElement::Function(a), FieldElement::Function(b)) => {
                let num = a.num().mul(b.num());
                let den = a.den().mul(b.den());
                FieldElement::Function(RatFunc::reduce(num, den))
            }
            _ => unreachable!(),
        }
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(a) => FieldElement::Rational(a.recip()),
            FieldElement::Function(a) => {
                FieldElement::Function(RatFunc::reduce(a.den.clone(), a.num.clone()))
            }
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn as_rational(&self) -> &BigRational {
        match self {
            FieldElement::Rational(r) => r,
            _ => panic!("expected a rational element"),
        }
    }

    pub fn as_function(&self) -> &RatFunc {
        match self {
            FieldElement::Function(rf) => rf,
            _ => panic!("expected a function field element"),
        }
    }

    /// Integral elements convert to the underlying ring; None otherwise.
    pub fn to_ring(&self) -> Option<RingElement> {
        match self {
            FieldElement::Rational(r) => {
                if r.is_integer() {
                    Some(RingElement::Integer(r.to_integer()))
                } else {
                    None
                }
            }
            FieldElement::Function(rf) => {
                if rf.is_polynomial() {
                    let c = rf.den().leading();
                    if c == 1 {
                        Some(RingElement::Polynomial(rf.num().clone()))
                    } else {
                        // den is a nonzero constant; fold it into the numerator
                        let inv = crate::arith::inv_mod_prime(c, rf.q());
                        Some(RingElement::Polynomial(rf.num().mul_scalar(inv)))
                    }
                } else {
                    None
                }
            }
        }
    }

    /// Parse a rational element from "a" or "a/b" decimal text.
    pub fn parse_rational(s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {num:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {den:?}")))?;
        FieldElement::from_fraction(num, den)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Function(rf) => write!(f, "{rf}"),
        }
    }
}

/// An element of the ring of integers O_K: a plain integer or an F_q[T]
/// polynomial. Projective points store these.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Integer(BigInt),
    Polynomial(FqPoly),
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Integer(i) => i.is_zero(),
            RingElement::Polynomial(p) => p.is_zero(),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            RingElement::Integer(_) => FieldDescriptor::rationals(),
            RingElement::Polynomial(p) => FieldDescriptor {
                kind: FieldKind::RationalFunctions,
                q: Some(p.q()),
                degree_d: 1,
            },
        }
    }

    pub fn to_field(&self) -> FieldElement {
        match self {
            RingElement::Integer(i) => {
                FieldElement::Rational(BigRational::from_integer(i.clone()))
            }
            RingElement::Polynomial(p) => FieldElement::Function(RatFunc::from_poly(p.clone())),
        }
    }

    pub fn as_integer(&self) -> &BigInt {
        match self {
            RingElement::Integer(i) => i,
            _ => panic!("expected an integer ring element"),
        }
    }

    pub fn as_polynomial(&self) -> &FqPoly {
        match self {
            RingElement::Polynomial(p) => p,
            _ => panic!("expected a polynomial ring element"),
        }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        match (self, other) {
            (RingElement::Integer(a), RingElement::Integer(b)) => RingElement::Integer(a + b),
            (RingElement::Polynomial(a), RingElement::Polynomial(b)) => {
                RingElement::Polynomial(a.add(b))
            }
            _ => panic!("ring elements of different fields"),
        }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        match (self, other) {
            (RingElement::Integer(a), RingElement::Integer(b)) => RingElement::Integer(a * b),
            (RingElement::Polynomial(a), RingElement::Polynomial(b)) => {
                RingElement::Polynomial(a.mul(b))
            }
            _ => panic!("ring elements of different fields"),
        }
    }

    pub fn neg(&self) -> RingElement {
        match self {
            RingElement::Integer(a) => RingElement::Integer(-a),
            RingElement::Polynomial(a) => RingElement::Polynomial(a.neg()),
        }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    /// Deterministic total order (integers by value, polynomials by degree
    /// then coefficients); used for canonical tie-breaking.
    pub fn cmp_canonical(&self, other: &RingElement) -> Ordering {
        match (self, other) {
            (RingElement::Integer(a), RingElement::Integer(b)) => a.cmp(b),
            (RingElement::Polynomial(a), RingElement::Polynomial(b)) => a.cmp_poly(b),
            (RingElement::Integer(_), RingElement::Polynomial(_)) => Ordering::Less,
            (RingElement::Polynomial(_), RingElement::Integer(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Integer(i) => write!(f, "{i}"),
            RingElement::Polynomial(p) => write!(f, "{p}"),
        }
    }
}

/// Compare vectors of ring elements lexicographically in the canonical order.
pub fn cmp_ring_vectors(a: &[RingElement], b: &[RingElement]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp_canonical(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Extract from a vector of field elements the scalar `c` and primitive ring
/// vector `w` with w = c * v: entries coprime as a whole and the first nonzero
/// entry positive (over Z) or monic (over F_q[T]).
pub fn content_and_primitive(v: &[FieldElement]) -> Result<(FieldElement, Vec<RingElement>)> {
    if v.is_empty() || v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let desc = v[0].descriptor();
    for x in v.iter().skip(1) {
        if x.descriptor() != desc {
            return Err(Error::FieldMismatch);
        }
    }
    match desc.kind {
        FieldKind::Rationals => {
            let rats: Vec<&BigRational> = v.iter().map(|x| x.as_rational()).collect();
            let mut lcm = BigInt::one();
            for r in &rats {
                lcm = lcm.lcm(r.denom());
            }
            let ints: Vec<BigInt> = rats
                .iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect();
            let mut g = BigInt::zero();
            for i in &ints {
                g = g.gcd(i);
            }
            let first_nonzero = ints.iter().find(|i| !i.is_zero()).unwrap();
            if first_nonzero.sign() == Sign::Minus {
                g = -g;
            }
            let w: Vec<RingElement> = ints
                .iter()
                .map(|i| RingElement::Integer(i / &g))
                .collect();
            let scalar = FieldElement::Rational(BigRational::new(lcm, g));
            Ok((scalar, w))
        }
        FieldKind::RationalFunctions => {
            let q = desc.q_value();
            let fns: Vec<&RatFunc> = v.iter().map(|x| x.as_function()).collect();
            // lcm of denominators
            let mut lcm = FqPoly::one(q);
            for rf in &fns {
                let g = lcm.gcd(rf.den());
                lcm = lcm.mul(&rf.den().exact_div(&g)).monic();
            }
            let polys: Vec<FqPoly> = fns
                .iter()
                .map(|rf| rf.num().mul(&lcm.exact_div(rf.den())))
                .collect();
            let mut g = FqPoly::zero(q);
            for p in &polys {
                if p.is_zero() {
                    continue;
                }
                g = if g.is_zero() { p.monic() } else { g.gcd(p) };
            }
            let first_nonzero = polys.iter().find(|p| !p.is_zero()).unwrap();
            // make the first nonzero entry monic after removing the content
            let lead = first_nonzero.exact_div(&g).leading();
            let g = g.mul_scalar(lead);
            let w: Vec<RingElement> = polys
                .iter()
                .map(|p| {
                    RingElement::Polynomial(if p.is_zero() {
                        FqPoly::zero(q)
                    } else {
                        p.exact_div(&g)
                    })
                })
                .collect();
            let scalar = FieldElement::Function(RatFunc::reduce(lcm, g));
            Ok((scalar, w))
        }
    }
}
