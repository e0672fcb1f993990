//! Small nonzero solutions of homogeneous linear systems over Z and F_q[T].
//!
//! For a system of s equations in t unknowns with t > 2s, a nonzero solution
//! exists whose projective height is at most 4*(t*C)^(4s/(t-2s)), where C is
//! the largest entry height. The solver first reduces a primitive kernel
//! basis and polishes it with small combinations; if the witness misses the
//! bound it falls back to exhaustive shell enumeration, which cannot miss.

use std::fmt;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldKind, RingElement};
use crate::fqpoly::FqPoly;
use crate::heights::{height_one_affix, HeightValue};
use crate::linalg::{
    kernel_basis, lll_reduce, mat_vec, popov_reduce, Domain, IntDomain, PolyDomain,
};
use crate::primes::RealBound;

/// Multiplication budget for the enumeration fallback.
const ENUM_BUDGET_MULS: u64 = 50_000_000;

/// Combination coefficients tried per basis vector while polishing.
const POLISH_SPAN: i64 = 2;
const POLISH_VECTORS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    KernelReduce,
    BoundedEnumeration,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::KernelReduce => "kernel_reduce",
            Strategy::BoundedEnumeration => "bounded_enumeration",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// s homogeneous equations in t unknowns with ring coefficients.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    field: FieldDescriptor,
    rows: Vec<Vec<RingElement>>,
    max_entry_height: HeightValue,
}

impl LinearSystem {
    pub fn new(field: FieldDescriptor, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("a system needs at least one equation"));
        }
        let t = rows[0].len();
        if t == 0 {
            return Err(Error::invalid("a system needs at least one unknown"));
        }
        let mut max_entry_height = HeightValue::one_for(&field);
        for row in &rows {
            if row.len() != t {
                return Err(Error::invalid("rows of unequal length"));
            }
            for a in row {
                if a.descriptor() != field {
                    return Err(Error::invalid("entry from a different field"));
                }
                let h = height_one_affix(std::slice::from_ref(&a.to_field()));
                if h.cmp_value(&max_entry_height) == std::cmp::Ordering::Greater {
                    max_entry_height = h;
                }
            }
        }
        Ok(LinearSystem {
            field,
            rows,
            max_entry_height,
        })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> &[Vec<RingElement>] {
        &self.rows
    }

    pub fn s(&self) -> usize {
        self.rows.len()
    }

    pub fn t(&self) -> usize {
        self.rows[0].len()
    }

    pub fn max_entry_height(&self) -> &HeightValue {
        &self.max_entry_height
    }

    /// The guaranteed solution height, (4^(t-2s) * (tC)^(4s))^(1/(t-2s)).
    pub fn height_bound(&self) -> Result<RealBound> {
        let (s, t) = (self.s() as u32, self.t() as u32);
        if t <= 2 * s {
            return Err(Error::invalid(format!(
                "need more than {} unknowns for {} equations, got {}",
                2 * s,
                s,
                t
            )));
        }
        let e = t - 2 * s;
        let c = self.max_entry_height.as_rational();
        let tc = &c * BigRational::from_integer(BigInt::from(t));
        let pow = BigRational::from_integer(BigInt::from(4).pow(e)) * tc.pow(4 * s as i32);
        Ok(RealBound { pow, root: e })
    }
}

#[derive(Debug, Clone)]
pub struct SmallSolution {
    pub c: Vec<RingElement>,
    pub height: HeightValue,
    pub strategy_used: Strategy,
}

/// H^(t-2s) <= 4^(t-2s) * (tC)^(4s), all compared exactly.
fn bound_satisfied(h: &HeightValue, c: &HeightValue, s: usize, t: usize) -> bool {
    let e = (t - 2 * s) as u32;
    match (h, c) {
        (HeightValue::Rational(hv), HeightValue::Rational(cv)) => {
            let lhs = hv.pow(e as i32);
            let tc = cv * BigRational::from_integer(BigInt::from(t));
            let rhs =
                BigRational::from_integer(BigInt::from(4).pow(e)) * tc.pow(4 * s as i32);
            lhs <= rhs
        }
        (HeightValue::QPower { q, exp: he }, HeightValue::QPower { exp: ce, .. }) => {
            let q = BigInt::from(*q);
            let lhs = q.pow(*he as u32 * e);
            let rhs = BigInt::from(4).pow(e)
                * BigInt::from(t).pow(4 * s as u32)
                * q.pow(*ce as u32 * 4 * s as u32);
            lhs <= rhs
        }
        _ => panic!("height representations from different fields"),
    }
}

/// Integers with H(1:x) <= h for Q, polynomials with H(1:x) <= h for F_q(T).
pub fn count_ring_points(field: &FieldDescriptor, h: &HeightValue) -> BigInt {
    match (field.kind, h) {
        (FieldKind::Rationals, HeightValue::Rational(r)) => {
            BigInt::from(2) * r.floor().to_integer() + 1
        }
        (FieldKind::RationalFunctions, HeightValue::QPower { q, exp }) => {
            BigInt::from(*q).pow(*exp as u32 + 1)
        }
        _ => panic!("height representation does not match the field"),
    }
}

trait SolveDomain: Domain {
    fn vec_height(&self, v: &[Self::E]) -> HeightValue;
    fn polish_scalars(&self) -> Vec<Self::E>;
    fn to_ring(&self, e: &Self::E) -> RingElement;
    fn cmp_vec_lex(&self, a: &[Self::E], b: &[Self::E]) -> std::cmp::Ordering;
    /// Lattice reduction of a kernel basis followed by content removal:
    /// output vectors stay in the kernel and stay primitive. `stop` lets
    /// the reduction end as soon as some vector is already good enough for
    /// the caller.
    fn reduce_basis(
        &self,
        basis: Vec<Vec<Self::E>>,
        stop: &dyn Fn(&HeightValue) -> bool,
    ) -> Vec<Vec<Self::E>>;
}

impl SolveDomain for IntDomain {
    fn vec_height(&self, v: &[BigInt]) -> HeightValue {
        let max = v.iter().map(|x| x.abs()).max().expect("nonzero vector");
        HeightValue::Rational(BigRational::from_integer(max))
    }
    fn polish_scalars(&self) -> Vec<BigInt> {
        (-POLISH_SPAN..=POLISH_SPAN).map(BigInt::from).collect()
    }
    fn to_ring(&self, e: &BigInt) -> RingElement {
        RingElement::Integer(e.clone())
    }
    fn cmp_vec_lex(&self, a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
        a.cmp(b)
    }
    fn reduce_basis(
        &self,
        basis: Vec<Vec<BigInt>>,
        stop: &dyn Fn(&HeightValue) -> bool,
    ) -> Vec<Vec<BigInt>> {
        let reduced = lll_reduce(basis, &|b: &[Vec<BigInt>]| {
            b.iter().any(|v| stop(&self.vec_height(v)))
        });
        reduced.into_iter().map(|v| self.normalize_primitive(v)).collect()
    }
}

impl SolveDomain for PolyDomain {
    fn vec_height(&self, v: &[FqPoly]) -> HeightValue {
        let max = v
            .iter()
            .filter_map(|x| x.degree())
            .max()
            .expect("nonzero vector");
        HeightValue::q_power(self.q, max as i64)
    }
    fn polish_scalars(&self) -> Vec<FqPoly> {
        (0..self.q.min(POLISH_SPAN as u64 * 2 + 1))
            .map(|c| FqPoly::constant(self.q, c))
            .collect()
    }
    fn to_ring(&self, e: &FqPoly) -> RingElement {
        RingElement::Polynomial(e.clone())
    }
    fn cmp_vec_lex(&self, a: &[FqPoly], b: &[FqPoly]) -> std::cmp::Ordering {
        for (x, y) in a.iter().zip(b.iter()) {
            let c = x.cmp_poly(y);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len())
    }
    fn reduce_basis(
        &self,
        basis: Vec<Vec<FqPoly>>,
        _stop: &dyn Fn(&HeightValue) -> bool,
    ) -> Vec<Vec<FqPoly>> {
        popov_reduce(self.q, basis)
            .into_iter()
            .map(|v| self.normalize_primitive(v))
            .collect()
    }
}

/// Least-height primitive kernel vector reachable from the reduced basis
/// by small combinations. Equal heights break toward the lexicographically
/// smallest canonical tuple. None exactly when the kernel is trivial.
/// `stop` is the caller's acceptance predicate; reduction may end early
/// once some basis vector satisfies it.
fn kernel_candidate<D: SolveDomain>(
    d: &D,
    rows: &[Vec<D::E>],
    stop: &dyn Fn(&HeightValue) -> bool,
) -> Option<(Vec<D::E>, HeightValue)> {
    let basis = kernel_basis(d, rows.to_vec());
    if basis.is_empty() {
        return None;
    }
    let basis = d.reduce_basis(basis, stop);
    let better = |h: &HeightValue, v: &[D::E], bh: &HeightValue, bv: &[D::E]| match h
        .cmp_value(bh)
    {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => d.cmp_vec_lex(v, bv) == std::cmp::Ordering::Less,
        std::cmp::Ordering::Greater => false,
    };
    let mut best_vec = basis[0].clone();
    let mut best_h = d.vec_height(&best_vec);
    for v in &basis[1..] {
        let h = d.vec_height(v);
        if better(&h, v, &best_h, &best_vec) {
            best_vec = v.clone();
            best_h = h;
        }
    }
    let mut ranked: Vec<(HeightValue, usize)> = basis
        .iter()
        .enumerate()
        .map(|(i, v)| (d.vec_height(v), i))
        .collect();
    ranked.sort_by(|a, b| a.0.cmp_value(&b.0).then(a.1.cmp(&b.1)));
    let k = ranked.len().min(POLISH_VECTORS);
    let scalars = d.polish_scalars();
    let mut digits = vec![0usize; k];
    let t = rows.first().map_or(best_vec.len(), |r| r.len());
    loop {
        // advance the odometer; all-zero start is skipped by the advance
        let mut pos = 0;
        loop {
            if pos == k {
                return Some((best_vec, best_h));
            }
            digits[pos] += 1;
            if digits[pos] < scalars.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        let mut combo = vec![d.zero(); t];
        for (i, &di) in digits.iter().enumerate() {
            let a = &scalars[di];
            if d.is_zero(a) {
                continue;
            }
            let v = &basis[ranked[i].1];
            for (c, x) in combo.iter_mut().zip(v) {
                *c = d.add(c, &d.mul(a, x));
            }
        }
        if combo.iter().all(|x| d.is_zero(x)) {
            continue;
        }
        let combo = d.normalize_primitive(combo);
        let h = d.vec_height(&combo);
        if better(&h, &combo, &best_h, &best_vec) {
            best_vec = combo;
            best_h = h;
        }
    }
}

/// The kernel-reduce candidate for a raw coefficient matrix, without the
/// t > 2s hypothesis. Used by the fitting ladder below its terminal degree;
/// `stop` is the ladder's height acceptance, forwarded to the reduction.
pub(crate) fn least_height_ring_kernel(
    field: &FieldDescriptor,
    rows: &[Vec<RingElement>],
    stop: &dyn Fn(&HeightValue) -> bool,
) -> Option<(Vec<RingElement>, HeightValue)> {
    match field.kind {
        FieldKind::Rationals => {
            let rows: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|e| e.as_integer().clone()).collect())
                .collect();
            let d = IntDomain;
            kernel_candidate(&d, &rows, stop)
                .map(|(v, h)| (v.iter().map(|x| d.to_ring(x)).collect(), h))
        }
        FieldKind::RationalFunctions => {
            let q = field.q_value();
            let rows: Vec<Vec<FqPoly>> = rows
                .iter()
                .map(|r| r.iter().map(|e| e.as_polynomial().clone()).collect())
                .collect();
            let d = PolyDomain { q };
            kernel_candidate(&d, &rows, stop)
                .map(|(v, h)| (v.iter().map(|x| d.to_ring(x)).collect(), h))
        }
    }
}

/// First solution in shell order: shells of increasing sup-norm, vectors in
/// lexicographic order within a shell, first nonzero coordinate positive.
/// Returns Ok(None) when every shell inside the guarantee is exhausted.
fn enumerate_rational(
    rows: &[Vec<BigInt>],
    s: usize,
    t: usize,
    c_height: &HeightValue,
    budget: &mut u64,
) -> Result<Option<Vec<BigInt>>> {
    let cost = (s * t) as u64;
    let mut h: i64 = 1;
    loop {
        let shell = HeightValue::Rational(BigRational::from_integer(BigInt::from(h)));
        if !bound_satisfied(&shell, c_height, s, t) {
            return Ok(None);
        }
        let span = (2 * h + 1) as u64;
        let mut coords = vec![-h; t];
        'vectors: loop {
            // every visited vector is charged so the walk itself stays
            // inside the budget even when most candidates are skipped
            if *budget == 0 {
                return Err(Error::ResourceLimit(format!(
                    "enumeration budget exhausted at height {h} \
                     ({span}^{t} candidates per shell)"
                )));
            }
            *budget -= 1;
            let on_shell = coords.iter().any(|&c| c.abs() == h);
            if on_shell {
                if let Some(first) = coords.iter().find(|&&c| c != 0) {
                    if *first > 0 {
                        if *budget < cost {
                            return Err(Error::ResourceLimit(format!(
                                "enumeration budget exhausted at height {h} \
                                 ({span}^{t} candidates per shell)"
                            )));
                        }
                        *budget -= cost;
                        let mut ok = true;
                        for row in rows {
                            let mut acc = BigInt::zero();
                            for (a, &c) in row.iter().zip(&coords) {
                                if c != 0 && !a.is_zero() {
                                    acc += a * c;
                                }
                            }
                            if !acc.is_zero() {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            return Ok(Some(coords.iter().map(|&c| BigInt::from(c)).collect()));
                        }
                    }
                }
            }
            for pos in (0..t).rev() {
                if coords[pos] < h {
                    coords[pos] += 1;
                    continue 'vectors;
                }
                coords[pos] = -h;
            }
            break;
        }
        h = h.checked_add(1).expect("shell index overflow");
    }
}

/// Shells of increasing degree bound; each coordinate runs over polynomials
/// of degree <= e via base-q digits, first nonzero coordinate monic.
fn enumerate_function_field(
    rows: &[Vec<FqPoly>],
    q: u64,
    s: usize,
    t: usize,
    c_height: &HeightValue,
    budget: &mut u64,
) -> Result<Option<Vec<FqPoly>>> {
    let cost = (s * t) as u64;
    let mut e: usize = 0;
    loop {
        let shell = HeightValue::q_power(q, e as i64);
        if !bound_satisfied(&shell, c_height, s, t) {
            return Ok(None);
        }
        let width = e + 1;
        let mut digits = vec![0u64; t * width];
        'vectors: loop {
            // charge the walk itself, not only evaluated candidates
            if *budget == 0 {
                return Err(Error::ResourceLimit(format!(
                    "enumeration budget exhausted at degree {e} \
                     (q^{} candidates per shell)",
                    width * t
                )));
            }
            *budget -= 1;
            let coords: Vec<FqPoly> = (0..t)
                .map(|i| FqPoly::new(q, digits[i * width..(i + 1) * width].to_vec()))
                .collect();
            let on_shell = coords.iter().any(|c| c.degree() == Some(e));
            if on_shell {
                if let Some(first) = coords.iter().find(|c| !c.is_zero()) {
                    if first.is_monic() {
                        if *budget < cost {
                            return Err(Error::ResourceLimit(format!(
                                "enumeration budget exhausted at degree {e} \
                                 (q^{} candidates per shell)",
                                width * t
                            )));
                        }
                        *budget -= cost;
                        let mut ok = true;
                        for row in rows {
                            let mut acc = FqPoly::zero(q);
                            for (a, c) in row.iter().zip(&coords) {
                                if !c.is_zero() && !a.is_zero() {
                                    acc = acc.add(&a.mul(c));
                                }
                            }
                            if !acc.is_zero() {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            return Ok(Some(coords));
                        }
                    }
                }
            }
            for pos in (0..digits.len()).rev() {
                if digits[pos] + 1 < q {
                    digits[pos] += 1;
                    continue 'vectors;
                }
                digits[pos] = 0;
            }
            break;
        }
        e += 1;
    }
}

fn solve<D: SolveDomain>(
    d: &D,
    sys: &LinearSystem,
    rows: Vec<Vec<D::E>>,
    enumerate: impl FnOnce(&mut u64) -> Result<Option<Vec<D::E>>>,
) -> Result<SmallSolution> {
    let (s, t) = (sys.s(), sys.t());
    let c_height = sys.max_entry_height();
    let stop = |h: &HeightValue| bound_satisfied(h, c_height, s, t);
    let (vec, height) =
        kernel_candidate(d, &rows, &stop).expect("system with t > 2s has a nonzero kernel");
    let check = mat_vec(d, &rows, &vec);
    if check.iter().any(|x| !d.is_zero(x)) {
        return Err(Error::integrity("kernel candidate fails the system"));
    }
    if bound_satisfied(&height, c_height, s, t) {
        return Ok(SmallSolution {
            c: vec.iter().map(|x| d.to_ring(x)).collect(),
            height,
            strategy_used: Strategy::KernelReduce,
        });
    }
    let mut budget = ENUM_BUDGET_MULS;
    match enumerate(&mut budget) {
        Ok(Some(found)) => {
            let found = d.normalize_primitive(found);
            let check = mat_vec(d, &rows, &found);
            if check.iter().any(|x| !d.is_zero(x)) {
                return Err(Error::integrity("enumerated candidate fails the system"));
            }
            let height = d.vec_height(&found);
            Ok(SmallSolution {
                c: found.iter().map(|x| d.to_ring(x)).collect(),
                height,
                strategy_used: Strategy::BoundedEnumeration,
            })
        }
        Ok(None) => Err(Error::integrity(
            "no kernel vector inside the guaranteed height bound",
        )),
        Err(Error::ResourceLimit(msg)) => Err(Error::ResourceLimit(format!(
            "{msg}; best kernel witness has height {height}"
        ))),
        Err(e) => Err(e),
    }
}

/// A nonzero solution of the system within the guaranteed height bound.
/// Requires t > 2s; the solution is primitive with canonical unit.
pub fn small_kernel(sys: &LinearSystem) -> Result<SmallSolution> {
    let (s, t) = (sys.s(), sys.t());
    if t <= 2 * s {
        return Err(Error::invalid(format!(
            "height guarantee needs t > 2s, got t = {t}, s = {s}"
        )));
    }
    match sys.field().kind {
        FieldKind::Rationals => {
            let rows: Vec<Vec<BigInt>> = sys
                .rows()
                .iter()
                .map(|r| r.iter().map(|e| e.as_integer().clone()).collect())
                .collect();
            let c_height = sys.max_entry_height().clone();
            let rows2 = rows.clone();
            solve(&IntDomain, sys, rows, move |budget| {
                enumerate_rational(&rows2, s, t, &c_height, budget)
            })
        }
        FieldKind::RationalFunctions => {
            let q = sys.field().q_value();
            let rows: Vec<Vec<FqPoly>> = sys
                .rows()
                .iter()
                .map(|r| r.iter().map(|e| e.as_polynomial().clone()).collect())
                .collect();
            let c_height = sys.max_entry_height().clone();
            let rows2 = rows.clone();
            solve(&PolyDomain { q }, sys, rows, move |budget| {
                enumerate_function_field(&rows2, q, s, t, &c_height, budget)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;
    use proptest::prelude::*;

    fn int_system(rows: &[&[i64]]) -> LinearSystem {
        let rows: Vec<Vec<RingElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| RingElement::Integer(BigInt::from(x))).collect())
            .collect();
        LinearSystem::new(FieldDescriptor::rationals(), rows).unwrap()
    }

    fn heights_of(sol: &SmallSolution) -> BigInt {
        match &sol.height {
            HeightValue::Rational(r) => r.to_integer(),
            _ => panic!("rational system"),
        }
    }

    #[test]
    fn polish_finds_unit_solution() {
        let sys = int_system(&[&[1, 2, 3]]);
        let sol = small_kernel(&sys).unwrap();
        assert_eq!(sol.strategy_used, super::Strategy::KernelReduce);
        assert_eq!(heights_of(&sol), BigInt::one());
        let c: Vec<BigInt> = sol.c.iter().map(|x| x.as_integer().clone()).collect();
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn hypothesis_is_checked() {
        let sys = int_system(&[&[1, 2]]);
        assert!(matches!(small_kernel(&sys), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn zero_column_gives_height_one() {
        let sys = int_system(&[&[1, 0, 0, 5, 0], &[0, 3, 0, 7, 0]]);
        let sol = small_kernel(&sys).unwrap();
        assert_eq!(heights_of(&sol), BigInt::one());
    }

    #[test]
    fn zero_matrix_solves_trivially() {
        let sys = int_system(&[&[0, 0, 0]]);
        let sol = small_kernel(&sys).unwrap();
        assert_eq!(heights_of(&sol), BigInt::one());
        // all unit vectors have height 1; the lex rule picks (0,0,1)
        let c: Vec<BigInt> = sol.c.iter().map(|x| x.as_integer().clone()).collect();
        assert_eq!(c, vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn bound_check_matches_direct_comparison() {
        // s = 1, t = 3: H^1 <= 4 * (3C)^4
        let c = HeightValue::Rational(BigRational::from_integer(BigInt::from(2)));
        let lim = BigInt::from(4) * BigInt::from(6).pow(4);
        let inside = HeightValue::Rational(BigRational::from_integer(&lim - 1));
        let edge = HeightValue::Rational(BigRational::from_integer(lim.clone()));
        let outside = HeightValue::Rational(BigRational::from_integer(&lim + 1));
        assert!(bound_satisfied(&inside, &c, 1, 3));
        assert!(bound_satisfied(&edge, &c, 1, 3));
        assert!(!bound_satisfied(&outside, &c, 1, 3));
    }

    #[test]
    fn enumeration_returns_minimum() {
        let rows = vec![vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]];
        let c = HeightValue::Rational(BigRational::from_integer(BigInt::from(3)));
        let mut budget = ENUM_BUDGET_MULS;
        let found = enumerate_rational(&rows, 1, 3, &c, &mut budget)
            .unwrap()
            .unwrap();
        assert_eq!(found, vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn ff_unit_solution() {
        let q = 2;
        let field = FieldDescriptor::rational_functions(q).unwrap();
        let t = FqPoly::new(q, vec![0, 1]);
        let t1 = FqPoly::new(q, vec![1, 1]);
        let row = vec![
            RingElement::Polynomial(FqPoly::one(q)),
            RingElement::Polynomial(t),
            RingElement::Polynomial(t1),
        ];
        let sys = LinearSystem::new(field, vec![row]).unwrap();
        let sol = small_kernel(&sys).unwrap();
        // 1*1 + T*1 + (T+1)*1 = 0 over F_2
        assert!(sol.height.is_one());
        for x in &sol.c {
            assert_eq!(x.as_polynomial(), &FqPoly::one(q));
        }
    }

    #[test]
    fn ff_enumeration_minimum() {
        let q = 3;
        let t = FqPoly::new(q, vec![0, 1]);
        let rows = vec![vec![FqPoly::one(q), t.clone(), t.mul(&t)]];
        let c = HeightValue::q_power(q, 2);
        let mut budget = ENUM_BUDGET_MULS;
        let found = enumerate_function_field(&rows, q, 1, 3, &c, &mut budget)
            .unwrap()
            .unwrap();
        // first solution in shell order has all degrees <= 1
        let sum = rows[0]
            .iter()
            .zip(&found)
            .fold(FqPoly::zero(q), |acc, (a, b)| acc.add(&a.mul(b)));
        assert!(sum.is_zero());
        assert!(found.iter().filter_map(|f| f.degree()).max().unwrap() <= 1);
    }

    #[test]
    fn count_points_examples() {
        let q = FieldDescriptor::rationals();
        let h = HeightValue::Rational(BigRational::new(BigInt::from(7), BigInt::from(2)));
        assert_eq!(count_ring_points(&q, &h), BigInt::from(7));
        let f = FieldDescriptor::rational_functions(3).unwrap();
        assert_eq!(
            count_ring_points(&f, &HeightValue::q_power(3, 2)),
            BigInt::from(27)
        );
    }

    #[test]
    fn height_bound_object() {
        let sys = int_system(&[&[1, 2, 3]]);
        let b = sys.height_bound().unwrap();
        // (4 * (3*3)^4)^(1/1) = 26244
        assert_eq!(b.pow, BigRational::from_integer(BigInt::from(26244)));
        assert_eq!(b.root, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_solution_is_valid_and_bounded(
            entries in prop::collection::vec(-6i64..=6, 5),
        ) {
            let rows: Vec<&[i64]> = vec![&entries];
            let sys = int_system(&rows);
            let sol = small_kernel(&sys).unwrap();
            let c: Vec<BigInt> = sol.c.iter().map(|x| x.as_integer().clone()).collect();
            prop_assert!(c.iter().any(|x| !x.is_zero()));
            for row in sys.rows() {
                let mut acc = BigInt::zero();
                for (a, x) in row.iter().zip(&c) {
                    acc += a.as_integer() * x;
                }
                prop_assert!(acc.is_zero());
            }
            prop_assert!(bound_satisfied(&sol.height, sys.max_entry_height(), 1, 5));
            // the witness is never better than the true shell minimum
            let mut budget = ENUM_BUDGET_MULS;
            let int_rows: Vec<Vec<BigInt>> = sys
                .rows()
                .iter()
                .map(|r| r.iter().map(|e| e.as_integer().clone()).collect())
                .collect();
            let min = enumerate_rational(&int_rows, 1, 5, sys.max_entry_height(), &mut budget)
                .unwrap()
                .unwrap();
            let min_h = IntDomain.vec_height(&min);
            prop_assert!(min_h.cmp_value(&sol.height) != std::cmp::Ordering::Greater);
        }

        #[test]
        fn prop_two_equations(
            entries in prop::collection::vec(-4i64..=4, 12),
        ) {
            let rows: Vec<&[i64]> = entries.chunks(6).collect();
            let sys = int_system(&rows);
            let sol = small_kernel(&sys).unwrap();
            let c: Vec<BigInt> = sol.c.iter().map(|x| x.as_integer().clone()).collect();
            prop_assert!(c.iter().any(|x| !x.is_zero()));
            for row in sys.rows() {
                let mut acc = BigInt::zero();
                for (a, x) in row.iter().zip(&c) {
                    acc += a.as_integer() * x;
                }
                prop_assert!(acc.is_zero());
            }
            prop_assert!(bound_satisfied(&sol.height, sys.max_entry_height(), 2, 6));
        }
    }
}
