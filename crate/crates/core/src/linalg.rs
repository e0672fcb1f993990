//! Fraction-free exact linear algebra over Z and F_q[T]: echelon form with
//! rank profile, and kernel bases with primitive integral entries.
//!
//! Elimination is Bareiss-style: each update divides by the previous pivot,
//! which is exact because intermediate entries are minors of the input.

use std::cmp::Ordering;
use std::fmt::Debug;

use num::{BigInt, Integer, Signed, Zero};

use crate::fqpoly::FqPoly;

/// The two coefficient rings the solver runs over. cmp_size orders candidate
/// pivots; smaller pivots keep intermediate minors small.
pub trait Domain {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Division known to be exact. Panics if it is not; callers only divide
    /// by Bareiss pivots.
    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn cmp_size(&self, a: &Self::E, b: &Self::E) -> Ordering;
    /// Remove content and fix the unit: first nonzero entry positive / monic.
    fn normalize_primitive(&self, v: Vec<Self::E>) -> Vec<Self::E>;
    /// Euclidean quotient with a size-reducing remainder: |a - q*b| at most
    /// half of |b| over Z, degree below deg b over F_q[T]. b nonzero.
    fn euclid_quot(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

pub struct IntDomain;

impl Domain for IntDomain {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let (q, r) = a.div_rem(b);
        assert!(r.is_zero(), "inexact division in elimination");
        q
    }
    fn cmp_size(&self, a: &BigInt, b: &BigInt) -> Ordering {
        a.abs().cmp(&b.abs()).then_with(|| a.cmp(b))
    }
    fn normalize_primitive(&self, v: Vec<BigInt>) -> Vec<BigInt> {
        let mut g = BigInt::zero();
        for x in &v {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return v;
        }
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                g = -g;
            }
        }
        v.into_iter().map(|x| x / &g).collect()
    }
    fn euclid_quot(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let (mut q, r) = a.div_rem(b);
        // balanced remainder: push |r| under |b|/2
        if &r * 2 > b.abs() {
            q += b.signum();
        } else if &r * 2 < -b.abs() {
            q -= b.signum();
        }
        q
    }
}

pub struct PolyDomain {
    pub q: u64,
}

impl Domain for PolyDomain {
    type E = FqPoly;

    fn zero(&self) -> FqPoly {
        FqPoly::zero(self.q)
    }
    fn one(&self) -> FqPoly {
        FqPoly::one(self.q)
    }
    fn is_zero(&self, a: &FqPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.add(b)
    }
    fn neg(&self, a: &FqPoly) -> FqPoly {
        a.neg()
    }
    fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.sub(b)
    }
    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.mul(b)
    }
    fn exact_div(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.exact_div(b)
    }
    fn cmp_size(&self, a: &FqPoly, b: &FqPoly) -> Ordering {
        a.cmp_poly(b)
    }
    fn normalize_primitive(&self, v: Vec<FqPoly>) -> Vec<FqPoly> {
        let mut g = FqPoly::zero(self.q);
        for x in &v {
            if x.is_zero() {
                continue;
            }
            g = if g.is_zero() { x.monic() } else { g.gcd(x) };
        }
        if g.is_zero() {
            return v;
        }
        let divided: Vec<FqPoly> = v.iter().map(|x| {
            if x.is_zero() {
                x.clone()
            } else {
                x.exact_div(&g)
            }
        }).collect();
        let lead = divided
            .iter()
            .find(|x| !x.is_zero())
            .expect("nonzero vector")
            .leading();
        let inv = crate::arith::inv_mod_prime(lead, self.q);
        divided.into_iter().map(|x| x.mul_scalar(inv)).collect()
    }
    fn euclid_quot(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.divrem(b).0
    }
}

/// Row echelon form with rank profile. Rows below the rank are zero and
/// dropped; pivot_cols[i] is the pivot column of row i.
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivot_cols: Vec<usize>,
    pub ncols: usize,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

pub fn echelon<D: Domain>(d: &D, mut rows: Vec<Vec<D::E>>) -> Echelon<D::E> {
    let m = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let mut pivot_cols = Vec::new();
    let mut prev = d.one();
    let mut r = 0usize;
    for col in 0..ncols {
        if r == m {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..m {
            if d.is_zero(&rows[i][col]) {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    if d.cmp_size(&rows[i][col], &rows[b][col]) == Ordering::Less {
                        best = Some(i);
                    }
                }
            }
        }
        let Some(b) = best else { continue };
        rows.swap(r, b);
        for i in r + 1..m {
            if d.is_zero(&rows[i][col]) {
                // the update still rescales the row to keep minors aligned
                for j in col + 1..ncols {
                    let scaled = d.mul(&rows[r][col], &rows[i][j]);
                    rows[i][j] = d.exact_div(&scaled, &prev);
                }
            } else {
                for j in col + 1..ncols {
                    let lhs = d.mul(&rows[r][col], &rows[i][j]);
                    let rhs = d.mul(&rows[i][col], &rows[r][j]);
                    rows[i][j] = d.exact_div(&d.sub(&lhs, &rhs), &prev);
                }
                rows[i][col] = d.zero();
            }
        }
        prev = rows[r][col].clone();
        pivot_cols.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon {
        rows,
        pivot_cols,
        ncols,
    }
}

pub fn rank<D: Domain>(d: &D, rows: Vec<Vec<D::E>>) -> usize {
    echelon(d, rows).rank()
}

/// A basis of the full integral right kernel, each vector primitive. Empty
/// exactly when the matrix has full column rank.
///
/// Built by unimodular row reduction of the transpose with the
/// transformation matrix carried along: transformation rows facing a zeroed
/// transpose row span every integral solution. Back-substitution through
/// the echelon form would instead scale by pivots and only reach a
/// finite-index sublattice, hiding the short kernel vectors from the
/// reduction step downstream.
pub fn kernel_basis<D: Domain>(d: &D, rows: Vec<Vec<D::E>>) -> Vec<Vec<D::E>> {
    let s = rows.len();
    let t = rows.first().map_or(0, |r| r.len());
    let mut v: Vec<Vec<D::E>> = (0..t)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut u: Vec<Vec<D::E>> = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| if i == j { d.one() } else { d.zero() })
                .collect()
        })
        .collect();
    let mut r = 0usize;
    for col in 0..s {
        if r == t {
            break;
        }
        loop {
            let mut live: Vec<usize> = (r..t).filter(|&i| !d.is_zero(&v[i][col])).collect();
            if live.is_empty() {
                break;
            }
            if live.len() == 1 {
                v.swap(r, live[0]);
                u.swap(r, live[0]);
                r += 1;
                break;
            }
            live.sort_by(|&a, &b| d.cmp_size(&v[a][col], &v[b][col]));
            let pivot = live[0];
            for &i in &live[1..] {
                let q = d.euclid_quot(&v[i][col], &v[pivot][col]);
                if d.is_zero(&q) {
                    continue;
                }
                for j in col..s {
                    let sub = d.mul(&q, &v[pivot][j]);
                    v[i][j] = d.sub(&v[i][j], &sub);
                }
                for j in 0..t {
                    let sub = d.mul(&q, &u[pivot][j]);
                    u[i][j] = d.sub(&u[i][j], &sub);
                }
            }
        }
    }
    u.drain(..r);
    u.into_iter().map(|row| d.normalize_primitive(row)).collect()
}

const LLL_DIM_CAP: usize = 24;

/// Lovasz-reduced lattice basis, delta = 3/4, all-integer bookkeeping
/// (Gram determinants d_i and scaled projections lambda_ij). The row span
/// is preserved: every transformation is unimodular. `stop` is polled once
/// per pass over the working basis; returning true ends reduction early,
/// for callers that only need one vector under a height target. Bases
/// beyond the dimension cap or with dependent rows come back untouched.
pub fn lll_reduce(
    basis: Vec<Vec<BigInt>>,
    stop: &dyn Fn(&[Vec<BigInt>]) -> bool,
) -> Vec<Vec<BigInt>> {
    let k = basis.len();
    if k < 2 || k > LLL_DIM_CAP {
        return basis;
    }
    let mut b = basis.clone();
    let inner = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        x.iter().zip(y).map(|(a, c)| a * c).sum()
    };
    // d[i] = det Gram(b_1..b_i), d[0] = 1; lam[i][j] = d[j+1] * mu_{i,j}
    let mut d = vec![BigInt::from(1); k + 1];
    let mut lam = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut u = inner(&b[i], &b[j]);
            for r in 0..j {
                u = (&d[r + 1] * &u - &lam[i][r] * &lam[j][r]) / &d[r];
            }
            if j < i {
                lam[i][j] = u;
            } else {
                if u.is_zero() || u.is_negative() {
                    return basis;
                }
                d[i + 1] = u;
            }
        }
    }
    // subtracts the nearest-integer multiple of b_l from b_m
    let size_reduce = |b: &mut Vec<Vec<BigInt>>,
                       lam: &mut Vec<Vec<BigInt>>,
                       d: &[BigInt],
                       m: usize,
                       l: usize| {
        let two_lam: BigInt = &lam[m][l] * 2;
        if two_lam.abs() <= d[l + 1] {
            return;
        }
        let r = (two_lam + &d[l + 1]).div_floor(&(&d[l + 1] * 2));
        let (head, tail) = b.split_at_mut(m);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= &r * y;
        }
        for j in 0..l {
            let s = &r * &lam[l][j];
            lam[m][j] -= s;
        }
        lam[m][l] -= &r * &d[l + 1];
    };
    let mut m = 1usize;
    while m < k {
        if stop(&b) {
            return b;
        }
        size_reduce(&mut b, &mut lam, &d, m, m - 1);
        let lhs: BigInt = &d[m + 1] * &d[m - 1] * 4;
        let rhs: BigInt = &d[m] * &d[m] * 3 - &lam[m][m - 1] * &lam[m][m - 1] * 4;
        if lhs < rhs {
            b.swap(m, m - 1);
            for j in 0..m.saturating_sub(1) {
                let t = lam[m][j].clone();
                lam[m][j] = lam[m - 1][j].clone();
                lam[m - 1][j] = t;
            }
            for i in m + 1..k {
                let t = lam[i][m - 1].clone();
                lam[i][m - 1] = (&t * &lam[m][m - 1] + &lam[i][m] * &d[m - 1]) / &d[m];
                lam[i][m] = (&t * &d[m + 1] - &lam[i][m] * &lam[m][m - 1]) / &d[m];
            }
            d[m] = (&d[m - 1] * &d[m + 1] + &lam[m][m - 1] * &lam[m][m - 1]) / &d[m];
            m = m.max(2) - 1;
        } else {
            for l in (0..m.saturating_sub(1)).rev() {
                size_reduce(&mut b, &mut lam, &d, m, l);
            }
            m += 1;
        }
    }
    b
}

/// Weak Popov form over F_q[T]: unimodular row transformations until the
/// pivot positions (rightmost entry of maximal degree per row) are
/// distinct. The least-degree vector of the row span then appears as the
/// least-degree row.
pub fn popov_reduce(q: u64, mut basis: Vec<Vec<FqPoly>>) -> Vec<Vec<FqPoly>> {
    let pivot = |row: &[FqPoly]| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, e) in row.iter().enumerate() {
            if let Some(deg) = e.degree() {
                if best.map_or(true, |(_, bd)| deg >= bd) {
                    best = Some((i, deg));
                }
            }
        }
        best
    };
    loop {
        let pivots: Vec<Option<(usize, usize)>> = basis.iter().map(|r| pivot(r)).collect();
        let mut clash: Option<(usize, usize)> = None;
        'scan: for i in 0..basis.len() {
            let Some((ci, di)) = pivots[i] else { continue };
            for j in 0..i {
                let Some((cj, dj)) = pivots[j] else { continue };
                if ci == cj {
                    // reduce the higher-degree row by the lower one
                    clash = Some(if di >= dj { (i, j) } else { (j, i) });
                    break 'scan;
                }
            }
        }
        let Some((hi, lo)) = clash else { break };
        let (ci, di) = pivots[hi].expect("clashing row has a pivot");
        let (_, dj) = pivots[lo].expect("clashing row has a pivot");
        let lc_hi = basis[hi][ci].leading();
        let lc_lo = basis[lo][ci].leading();
        let c = crate::arith::mul_mod(lc_hi, crate::arith::inv_mod_prime(lc_lo, q), q);
        let shift = FqPoly::monomial(q, c, di - dj);
        let sub: Vec<FqPoly> = basis[lo].iter().map(|e| e.mul(&shift)).collect();
        for (x, y) in basis[hi].iter_mut().zip(&sub) {
            *x = x.sub(y);
        }
        debug_assert!(
            basis[hi].iter().any(|e| !e.is_zero()),
            "independent rows cannot cancel"
        );
    }
    basis
}

pub fn mat_vec<D: Domain>(d: &D, rows: &[Vec<D::E>], v: &[D::E]) -> Vec<D::E> {
    rows.iter()
        .map(|row| {
            let mut s = d.zero();
            for (a, x) in row.iter().zip(v.iter()) {
                if d.is_zero(a) || d.is_zero(x) {
                    continue;
                }
                s = d.add(&s, &d.mul(a, x));
            }
            s
        })
        .collect()
}
