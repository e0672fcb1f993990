//! The fitting pipeline: dense-subset selection by residue collisions,
//! degree selection, monomial system assembly, kernel solve, and iteration
//! until a target fraction of the point set lies on the emitted factors.
//!
//! Certificate arithmetic is exact throughout. Collision scores and the
//! density threshold are plain f64: they only steer which points feed the
//! exact solve, never the certificate itself.

use std::collections::HashSet;
use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldKind, RingElement};
use crate::heights::{HeightValue, power_rational};
use crate::parallel::maybe_par_map;
use crate::params::{log_height, FitParams};
use crate::poly::{monomial_count, monomial_exponents, HomogeneousPoly};
use crate::primes::{enumerate_primes, window_from_params, Prime, WindowCaps};
use crate::residue::{reduce_point, PointSet, ProjPoint};
use crate::siegel::{least_height_ring_kernel, small_kernel, LinearSystem};

/// Outcome of a dense-subset construction: the anchor tuple's distinct
/// points C, the subset X' of points whose weighted collision score clears
/// the threshold, and the raw scores behind both.
#[derive(Debug, Clone)]
pub struct DenseSetResult {
    pub c: Vec<ProjPoint>,
    pub x_prime: Vec<ProjPoint>,
    /// One weighted score per input point, in input order.
    pub per_point_scores: Vec<f64>,
    /// Unweighted collision totals of the sampled candidate tuples, in
    /// sampling order. Empty when the degenerate small-set branch fired.
    pub candidate_scores: Vec<u64>,
    pub threshold: f64,
}

/// theta * tau * lambda^(n/(n-kappa)) in f64.
fn score_threshold(params: &FitParams, lambda: &BigRational) -> Result<f64> {
    let conv = |x: &BigRational, what: &str| {
        x.to_f64()
            .ok_or_else(|| Error::invalid(format!("{what} out of f64 range")))
    };
    let w = conv(&params.window_exponent(), "window exponent")?;
    let interval = conv(&params.tau, "tau")? * conv(lambda, "log height bound")?.powf(w);
    Ok(conv(&params.theta, "theta")? * interval)
}

pub fn build_dense_set(
    x: &PointSet,
    primes: &[Prime],
    params: &FitParams,
) -> Result<DenseSetResult> {
    params.validate()?;
    if x.is_empty() {
        return Err(Error::invalid("point set is empty"));
    }
    if primes.is_empty() {
        return Err(Error::invalid("no primes supplied"));
    }
    for p in primes {
        if p.field() != x.field {
            return Err(Error::invalid(format!(
                "prime {p} does not live over {}",
                x.field
            )));
        }
    }
    let lambda = log_height(&x.bound)?;
    let r = params.derive_r(&lambda)?;
    dense_set_on(x.points(), primes, params, &lambda, r)
}

fn dense_set_on(
    pts: &[ProjPoint],
    primes: &[Prime],
    params: &FitParams,
    lambda: &BigRational,
    r: u64,
) -> Result<DenseSetResult> {
    let m = pts.len();
    let r = usize::try_from(r).map_err(|_| Error::invalid("r out of range"))?;
    // one residue key per (prime, point); collisions are key equality
    let keys: Vec<Vec<Vec<u64>>> = maybe_par_map(primes, |p| {
        pts.iter().map(|x| reduce_point(x, p).flat_key()).collect()
    });

    let (c_indices, candidate_scores): (Vec<usize>, Vec<u64>) = if m <= r {
        ((0..m).collect(), Vec::new())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let tuples: Vec<Vec<usize>> = (0..params.num_candidates)
            .map(|_| (0..r).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        let scores: Vec<u64> = maybe_par_map(&tuples, |tuple| {
            let mut score = 0u64;
            for per_prime in &keys {
                let anchor: HashSet<&Vec<u64>> =
                    tuple.iter().map(|&i| &per_prime[i]).collect();
                score += per_prime.iter().filter(|k| anchor.contains(k)).count() as u64;
            }
            score
        });
        let best = scores
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .expect("at least one candidate");
        let mut seen = HashSet::new();
        let dedup: Vec<usize> = tuples[best]
            .iter()
            .copied()
            .filter(|i| seen.insert(*i))
            .collect();
        (dedup, scores)
    };

    let c: Vec<ProjPoint> = c_indices.iter().map(|&i| pts[i].clone()).collect();
    let anchors: Vec<HashSet<&Vec<u64>>> = keys
        .iter()
        .map(|per_prime| c_indices.iter().map(|&i| &per_prime[i]).collect())
        .collect();
    let weights: Vec<f64> = primes.iter().map(|p| p.ln_norm()).collect();
    let indices: Vec<usize> = (0..m).collect();
    let per_point_scores: Vec<f64> = maybe_par_map(&indices, |&i| {
        keys.iter()
            .zip(&anchors)
            .zip(&weights)
            .filter(|((per_prime, anchor), _)| anchor.contains(&per_prime[i]))
            .map(|(_, w)| *w)
            .sum()
    });
    let threshold = score_threshold(params, lambda)?;
    let x_prime: Vec<ProjPoint> = pts
        .iter()
        .zip(&per_point_scores)
        .filter(|(_, &s)| s >= threshold)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(DenseSetResult {
        c,
        x_prime,
        per_point_scores,
        candidate_scores,
        threshold,
    })
}

/// Minimal D with binomial(D+n, n) > (2d^2+1)*r, plus that binomial R.
pub fn choose_degree(n: u32, d: u32, r: u64) -> Result<(u32, u64)> {
    if n == 0 {
        return Err(Error::invalid("dimension n must be at least 1"));
    }
    if d == 0 || r == 0 {
        return Err(Error::invalid("degree d and tuple size r must be positive"));
    }
    let target = (2 * d as u64 * d as u64 + 1)
        .checked_mul(r)
        .ok_or_else(|| Error::ResourceLimit("degree target overflows".into()))?;
    let mut degree = 1u32;
    loop {
        match monomial_count(n as usize + 1, degree) {
            Some(count) if count > target => return Ok((degree, count)),
            Some(_) => degree += 1,
            None => {
                return Err(Error::ResourceLimit(
                    "monomial count overflows before clearing the target".into(),
                ))
            }
        }
    }
}

/// Rows of monomial evaluations: one row per point, one column per degree-D
/// exponent tuple in the canonical order.
pub fn monomial_rows(c: &[ProjPoint], degree: u32) -> Vec<Vec<RingElement>> {
    if c.is_empty() {
        return Vec::new();
    }
    let field = c[0].field();
    let nvars = c[0].coords().len();
    let expts = monomial_exponents(nvars, degree);
    maybe_par_map(c, |pt| {
        let pows: Vec<Vec<RingElement>> = pt
            .coords()
            .iter()
            .map(|x| {
                let mut col = Vec::with_capacity(degree as usize + 1);
                col.push(field.ring_one());
                for k in 1..=degree as usize {
                    let next = col[k - 1].mul(x);
                    col.push(next);
                }
                col
            })
            .collect();
        expts
            .iter()
            .map(|e| {
                let mut acc = field.ring_one();
                for (i, &ei) in e.iter().enumerate() {
                    if ei > 0 {
                        acc = acc.mul(&pows[i][ei as usize]);
                    }
                }
                acc
            })
            .collect()
    })
}

pub fn monomial_matrix(c: &[ProjPoint], degree: u32) -> Result<LinearSystem> {
    if c.is_empty() {
        return Err(Error::invalid("no points to evaluate"));
    }
    let field = c[0].field();
    for pt in c {
        if pt.field() != field {
            return Err(Error::invalid("points over different fields"));
        }
    }
    LinearSystem::new(field, monomial_rows(c, degree))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitStatus {
    Success,
    MaxIterations,
}

impl FitStatus {
    pub fn is_success(self) -> bool {
        matches!(self, FitStatus::Success)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FitStatus::Success => "success",
            FitStatus::MaxIterations => "max_iterations",
        }
    }
}

impl fmt::Display for FitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub index: u32,
    pub remaining_before: usize,
    pub dense_size: usize,
    pub degree_selected: u32,
    /// Degree at which the kernel ladder found a relation; equals
    /// degree_selected when the terminal solver ran.
    pub kernel_degree: u32,
    pub strategy: String,
    pub factor_height: HeightValue,
    pub newly_covered: usize,
    pub covered_total: usize,
}

#[derive(Debug, Clone)]
pub struct VanishingCertificate {
    pub factors: Vec<HomogeneousPoly>,
    pub total_degree: u32,
    pub max_coeff_height: HeightValue,
    pub covered: usize,
    pub total: usize,
    pub iterations: u32,
    pub status: FitStatus,
    pub records: Vec<IterationRecord>,
}

impl VanishingCertificate {
    /// covered/total >= 1 - epsilon, compared exactly.
    pub fn meets_target(&self, epsilon: &BigRational) -> bool {
        coverage_met(self.covered, self.total, epsilon)
    }
}

fn coverage_met(covered: usize, total: usize, epsilon: &BigRational) -> bool {
    let num = epsilon.numer();
    let den = epsilon.denom();
    BigInt::from(covered) * den >= (den - num) * BigInt::from(total)
}

/// One factor for the dense set: lowest degree with a nontrivial kernel of
/// height within the complexity ceiling, padded by a power of x0 up to the
/// selected degree. The terminal degree runs the height-guaranteed solver.
fn fit_factor(
    c: &[ProjPoint],
    terminal: u32,
    ceiling: &BigRational,
) -> Result<(HomogeneousPoly, u32, String)> {
    let field = c[0].field();
    let nvars = c[0].coords().len();
    let under_ceiling = |h: &HeightValue| h.as_rational() <= *ceiling;
    for delta in 1..terminal {
        let rows = monomial_rows(c, delta);
        if let Some((coeffs, height)) =
            least_height_ring_kernel(&field, &rows, &under_ceiling)
        {
            if height.as_rational() > *ceiling {
                continue;
            }
            let low =
                HomogeneousPoly::from_coeff_vector(field.clone(), nvars, delta, &coeffs)?;
            let padded = low.mul_var_power(0, (terminal - delta) as u16);
            return Ok((padded, delta, "ladder_kernel".to_string()));
        }
    }
    let sys = monomial_matrix(c, terminal)?;
    let sol = small_kernel(&sys)?;
    let poly = HomogeneousPoly::from_coeff_vector(field, nvars, terminal, &sol.c)?;
    Ok((poly, terminal, sol.strategy_used.as_str().to_string()))
}

pub fn fit_polynomial(x: &PointSet, params: &FitParams) -> Result<VanishingCertificate> {
    params.validate()?;
    if x.is_empty() {
        return Err(Error::invalid("point set is empty"));
    }
    if x.n != params.n {
        return Err(Error::invalid(format!(
            "points live in dimension {}, parameters say {}",
            x.n, params.n
        )));
    }
    let lambda = log_height(&x.bound)?;
    if lambda <= BigRational::one() {
        return Err(Error::invalid(
            "height bound must exceed e for the window exponents",
        ));
    }
    // window, r, and D depend only on the declared bound, never on the
    // shrinking remainder
    let window = window_from_params(params, &x.bound)?;
    let primes = enumerate_primes(&window, &WindowCaps::default())?;
    let r = params.derive_r(&lambda)?;
    let (degree, r_monomials) = choose_degree(params.n, 1, r)?;
    let ceiling = complexity_ceiling(params.n, degree, r_monomials, &x.bound);

    let mut remainder: Vec<ProjPoint> = x.points().to_vec();
    let total = remainder.len();
    let mut covered = 0usize;
    let mut factors: Vec<HomogeneousPoly> = Vec::new();
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut status = FitStatus::MaxIterations;

    for it in 1..=params.max_iterations {
        let remaining_before = remainder.len();
        let dense = dense_set_on(&remainder, &primes, params, &lambda, r)?;
        let (factor, kernel_degree, strategy) = fit_factor(&dense.c, degree, &ceiling)?;
        for pt in &dense.c {
            if !factor.eval(pt.coords()).is_zero() {
                return Err(Error::integrity(
                    "fitted factor misses a dense-set point",
                ));
            }
        }
        let vanish: Vec<bool> =
            maybe_par_map(&remainder, |pt| factor.eval(pt.coords()).is_zero());
        let mut kept = Vec::with_capacity(remainder.len());
        let mut newly = 0usize;
        for (pt, gone) in remainder.into_iter().zip(&vanish) {
            if *gone {
                newly += 1;
            } else {
                kept.push(pt);
            }
        }
        remainder = kept;
        covered += newly;
        records.push(IterationRecord {
            index: it,
            remaining_before,
            dense_size: dense.c.len(),
            degree_selected: degree,
            kernel_degree,
            strategy,
            factor_height: factor.max_coeff_height(),
            newly_covered: newly,
            covered_total: covered,
        });
        factors.push(factor);
        if coverage_met(covered, total, &params.epsilon) {
            status = FitStatus::Success;
            break;
        }
    }

    let total_degree = factors.iter().map(|f| f.degree()).sum();
    let mut max_coeff_height = HeightValue::one_for(&x.field);
    for f in &factors {
        let h = f.max_coeff_height();
        if h.cmp_value(&max_coeff_height) == std::cmp::Ordering::Greater {
            max_coeff_height = h;
        }
    }
    Ok(VanishingCertificate {
        iterations: records.len() as u32,
        factors,
        total_degree,
        max_coeff_height,
        covered,
        total,
        status,
        records,
    })
}

/// Exact recount of the certificate's coverage; the recorded count must
/// match. Returns the recount and per-factor vanish counts.
pub fn verify_certificate(
    x: &PointSet,
    cert: &VanishingCertificate,
) -> Result<(usize, Vec<usize>)> {
    for f in &cert.factors {
        if f.is_zero() {
            return Err(Error::integrity("certificate contains a zero factor"));
        }
        if *f.field() != x.field {
            return Err(Error::integrity("factor over a different field"));
        }
        if f.nvars() != x.n as usize + 1 {
            return Err(Error::integrity("factor in the wrong number of variables"));
        }
    }
    if cert.total != x.len() {
        return Err(Error::integrity(format!(
            "certificate covers a set of {} points, given {}",
            cert.total,
            x.len()
        )));
    }
    let mut any = vec![false; x.len()];
    let mut per_factor = Vec::with_capacity(cert.factors.len());
    for f in &cert.factors {
        let vanish: Vec<bool> =
            maybe_par_map(x.points(), |pt| f.eval(pt.coords()).is_zero());
        per_factor.push(vanish.iter().filter(|v| **v).count());
        for (a, v) in any.iter_mut().zip(&vanish) {
            *a = *a || *v;
        }
    }
    let covered = any.iter().filter(|v| **v).count();
    if covered != cert.covered {
        return Err(Error::integrity(format!(
            "recount found {covered} covered points, certificate records {}",
            cert.covered
        )));
    }
    Ok((covered, per_factor))
}

const ORACLE_POINT_CAP: usize = 500;
const ORACLE_DEGREE_CAP: u32 = 12;

/// Brute-force least degree with a form vanishing on ALL of x, by exact
/// kernel computation on the full monomial matrix. Independent of the
/// fitting path; meant for cross-checks at desk scale.
pub fn oracle_min_degree(
    x: &PointSet,
    d_max: u32,
) -> Result<(Option<u32>, Option<HomogeneousPoly>)> {
    if x.is_empty() {
        return Err(Error::invalid("point set is empty"));
    }
    if x.len() > ORACLE_POINT_CAP {
        return Err(Error::ResourceLimit(format!(
            "oracle caps at {ORACLE_POINT_CAP} points, got {}",
            x.len()
        )));
    }
    if d_max > ORACLE_DEGREE_CAP {
        return Err(Error::ResourceLimit(format!(
            "oracle caps at degree {ORACLE_DEGREE_CAP}, got {d_max}"
        )));
    }
    let nvars = x.n as usize + 1;
    for degree in 1..=d_max {
        let rows = monomial_rows(x.points(), degree);
        if let Some((coeffs, _)) = least_height_ring_kernel(&x.field, &rows, &|_| false) {
            let poly =
                HomogeneousPoly::from_coeff_vector(x.field.clone(), nvars, degree, &coeffs)?;
            return Ok((Some(degree), Some(poly)));
        }
    }
    Ok((None, None))
}

/// n+1 linear forms in m+1 variables of full rank, mapping P^m to P^n away
/// from the forms' common kernel.
#[derive(Debug, Clone)]
pub struct VarietyMap {
    pub m: u32,
    pub n: u32,
    forms: Vec<Vec<RingElement>>,
    field: FieldDescriptor,
}

impl VarietyMap {
    pub fn new(m: u32, n: u32, forms: Vec<Vec<RingElement>>) -> Result<Self> {
        if forms.len() != n as usize + 1 {
            return Err(Error::invalid(format!(
                "expected {} forms, got {}",
                n + 1,
                forms.len()
            )));
        }
        let first = forms
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::invalid("forms must have coefficients"))?;
        let field = first.descriptor();
        for row in &forms {
            if row.len() != m as usize + 1 {
                return Err(Error::invalid(format!(
                    "each form needs {} coefficients, got {}",
                    m + 1,
                    row.len()
                )));
            }
            for c in row {
                if c.descriptor() != field {
                    return Err(Error::invalid("coefficient from a different field"));
                }
            }
        }
        let rank = match field.kind {
            FieldKind::Rationals => {
                let rows: Vec<Vec<BigInt>> = forms
                    .iter()
                    .map(|r| r.iter().map(|e| e.as_integer().clone()).collect())
                    .collect();
                crate::linalg::rank(&crate::linalg::IntDomain, rows)
            }
            FieldKind::RationalFunctions => {
                let rows: Vec<Vec<crate::fqpoly::FqPoly>> = forms
                    .iter()
                    .map(|r| r.iter().map(|e| e.as_polynomial().clone()).collect())
                    .collect();
                crate::linalg::rank(
                    &crate::linalg::PolyDomain {
                        q: field.q_value(),
                    },
                    rows,
                )
            }
        };
        if rank != n as usize + 1 {
            return Err(Error::invalid(format!(
                "forms have rank {rank}, need full rank {}",
                n + 1
            )));
        }
        Ok(VarietyMap { m, n, forms, field })
    }

    pub fn forms(&self) -> &[Vec<RingElement>] {
        &self.forms
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    fn max_coeff_height(&self) -> HeightValue {
        let mut best = HeightValue::one_for(&self.field);
        for row in &self.forms {
            for c in row {
                let h = crate::heights::height_one_affix(std::slice::from_ref(&c.to_field()));
                if h.cmp_value(&best) == std::cmp::Ordering::Greater {
                    best = h;
                }
            }
        }
        best
    }
}

/// Declared bound for the image set: (m+1) * max coefficient height * N,
/// rounded up to a q-power over function fields.
fn image_bound(map: &VarietyMap, bound: &HeightValue) -> HeightValue {
    let dims = map.m as u64 + 1;
    match bound {
        HeightValue::Rational(n) => {
            let c = map.max_coeff_height().as_rational();
            HeightValue::Rational(BigRational::from_integer(BigInt::from(dims)) * c * n)
        }
        HeightValue::QPower { q, exp } => {
            let hc = match map.max_coeff_height() {
                HeightValue::QPower { exp, .. } => exp,
                HeightValue::Rational(_) => 0,
            };
            let mut extra = 0i64;
            let mut acc = BigInt::one();
            let qq = BigInt::from(*q);
            while acc < BigInt::from(dims) {
                acc *= &qq;
                extra += 1;
            }
            HeightValue::QPower {
                q: *q,
                exp: exp + hc + extra,
            }
        }
    }
}

/// Applies the forms to primitive representatives and re-canonicalizes.
/// Points landing on the common kernel are dropped; the second return is
/// that warning count.
pub fn transform_points(x: &PointSet, map: &VarietyMap) -> Result<(PointSet, usize)> {
    if map.field != x.field {
        return Err(Error::invalid("map and points over different fields"));
    }
    if map.m != x.n {
        return Err(Error::invalid(format!(
            "map expects points in dimension {}, got {}",
            map.m, x.n
        )));
    }
    let mut images = Vec::with_capacity(x.len());
    let mut dropped = 0usize;
    for pt in x.points() {
        let coords: Vec<RingElement> = map
            .forms
            .iter()
            .map(|row| {
                let mut acc = x.field.ring_zero();
                for (c, v) in row.iter().zip(pt.coords()) {
                    if !c.is_zero() && !v.is_zero() {
                        acc = acc.add(&c.mul(v));
                    }
                }
                acc
            })
            .collect();
        if coords.iter().all(|c| c.is_zero()) {
            dropped += 1;
            continue;
        }
        images.push(ProjPoint::from_ring(&coords)?);
    }
    let bound = image_bound(map, &x.bound);
    let (set, _merged) = PointSet::new(x.field.clone(), map.n, bound, images)?;
    Ok((set, dropped))
}

/// Substitutes the map's forms into every factor and recounts coverage over
/// the source set exactly.
pub fn compose_certificate(
    cert: &VanishingCertificate,
    map: &VarietyMap,
    source: &PointSet,
) -> Result<VanishingCertificate> {
    if map.field != source.field {
        return Err(Error::invalid("map and points over different fields"));
    }
    if map.m != source.n {
        return Err(Error::invalid(format!(
            "source points live in dimension {}, map expects {}",
            source.n, map.m
        )));
    }
    let composed: Vec<HomogeneousPoly> = cert
        .factors
        .iter()
        .map(|f| {
            if f.nvars() != map.n as usize + 1 {
                return Err(Error::invalid(
                    "factor variable count does not match the map target",
                ));
            }
            f.compose_linear(&map.forms)
        })
        .collect::<Result<_>>()?;
    let mut any = vec![false; source.len()];
    for f in &composed {
        let vanish: Vec<bool> =
            maybe_par_map(source.points(), |pt| f.eval(pt.coords()).is_zero());
        for (a, v) in any.iter_mut().zip(&vanish) {
            *a = *a || *v;
        }
    }
    let covered = any.iter().filter(|v| **v).count();
    let mut max_coeff_height = HeightValue::one_for(&source.field);
    for f in &composed {
        let h = f.max_coeff_height();
        if h.cmp_value(&max_coeff_height) == std::cmp::Ordering::Greater {
            max_coeff_height = h;
        }
    }
    Ok(VanishingCertificate {
        factors: composed,
        total_degree: cert.total_degree,
        max_coeff_height,
        covered,
        total: source.len(),
        iterations: cert.iterations,
        status: cert.status,
        records: cert.records.clone(),
    })
}

fn rational_pow(x: &BigRational, exp: i64) -> BigRational {
    power_rational(x.numer(), exp) / power_rational(x.denom(), exp)
}

/// Max coefficient height allowed by the complexity contract:
/// B * (R * M^((d*n+1)*d^2*D))^(4*d^2) with d = 1 and B = 4.
pub fn complexity_ceiling(
    n: u32,
    degree: u32,
    r_monomials: u64,
    bound: &HeightValue,
) -> BigRational {
    let m = bound.as_rational();
    let inner = BigRational::from_integer(BigInt::from(r_monomials))
        * rational_pow(&m, (n as i64 + 1) * degree as i64);
    BigRational::from_integer(BigInt::from(4)) * rational_pow(&inner, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::height_projective;
    use num::Zero;

    fn rational_parabola(limit: i64, bound: u64) -> PointSet {
        let pts: Vec<ProjPoint> = (-limit..=limit)
            .map(|a| ProjPoint::from_integers(&[1, a, a * a]).unwrap())
            .collect();
        let (set, dups) = PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(bound),
            pts,
        )
        .unwrap();
        assert_eq!(dups, 0);
        set
    }

    fn interval_primes(lo: u64, hi: u64) -> Vec<Prime> {
        let w = crate::primes::PrimeWindow::rational_interval(
            BigRational::from_integer(BigInt::from(lo)),
            BigRational::from_integer(BigInt::from(hi)),
        )
        .unwrap();
        enumerate_primes(&w, &WindowCaps::default()).unwrap()
    }

    #[test]
    fn choose_degree_examples() {
        assert_eq!(choose_degree(2, 1, 10).unwrap(), (7, 36));
        // binom(D+1, 1) = D+1 > 15 first holds at D = 15
        assert_eq!(choose_degree(1, 1, 5).unwrap(), (15, 16));
        assert_eq!(choose_degree(2, 1, 1).unwrap(), (2, 6));
    }

    #[test]
    fn monomial_matrix_examples() {
        let c = vec![ProjPoint::from_integers(&[1, 2]).unwrap()];
        let sys = monomial_matrix(&c, 2).unwrap();
        let row: Vec<i64> = sys.rows()[0]
            .iter()
            .map(|e| e.as_integer().to_i64().unwrap())
            .collect();
        assert_eq!(row, vec![1, 2, 4]);

        let c = vec![ProjPoint::from_integers(&[1, 0, 0]).unwrap()];
        let sys = monomial_matrix(&c, 1).unwrap();
        let row: Vec<i64> = sys.rows()[0]
            .iter()
            .map(|e| e.as_integer().to_i64().unwrap())
            .collect();
        assert_eq!(row, vec![1, 0, 0]);

        let c = vec![
            ProjPoint::from_integers(&[1, 1]).unwrap(),
            ProjPoint::from_integers(&[1, -1]).unwrap(),
        ];
        let sys = monomial_matrix(&c, 2).unwrap();
        let rows: Vec<Vec<i64>> = sys
            .rows()
            .iter()
            .map(|r| r.iter().map(|e| e.as_integer().to_i64().unwrap()).collect())
            .collect();
        assert_eq!(rows, vec![vec![1, 1, 1], vec![1, -1, 1]]);
    }

    #[test]
    fn dense_set_degenerate_small_x() {
        let set = rational_parabola(5, 22026);
        let mut params = FitParams::new(2, BigRational::one());
        params.r_override = Some(50);
        let primes = interval_primes(100, 200);
        let dense = build_dense_set(&set, &primes, &params).unwrap();
        assert_eq!(dense.c.len(), set.len());
        assert_eq!(dense.x_prime.len(), set.len());
        assert!(dense.candidate_scores.is_empty());
    }

    #[test]
    fn dense_set_all_congruent() {
        // all points reduce to (1:0) mod 101; any anchor catches everything
        let pts: Vec<ProjPoint> = (1..=6)
            .map(|k| ProjPoint::from_integers(&[1, 101 * k]).unwrap())
            .collect();
        let (set, _) = PointSet::new(
            FieldDescriptor::rationals(),
            1,
            HeightValue::from_integer(1000),
            pts,
        )
        .unwrap();
        let mut params = FitParams::new(1, BigRational::zero());
        params.r_override = Some(2);
        let primes = vec![Prime::rational(101).unwrap()];
        let dense = build_dense_set(&set, &primes, &params).unwrap();
        assert!(dense.c.len() <= 2);
        assert_eq!(dense.x_prime.len(), set.len());
        for s in &dense.per_point_scores {
            assert!((s - 101f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_set_regression_parabola() {
        // frozen regression for the sampling path
        let set = rational_parabola(1000, 1_000_000);
        let mut params = FitParams::new(2, BigRational::zero());
        params.r_override = Some(40);
        params.seed = 7;
        let primes = interval_primes(100, 200);
        let dense = build_dense_set(&set, &primes, &params).unwrap();
        assert_eq!(dense.candidate_scores.len(), 32);
        assert!(dense.x_prime.len() * 2 >= set.len(), "{}", dense.x_prime.len());
    }

    #[test]
    fn fit_single_point() {
        let pts = vec![ProjPoint::from_integers(&[1, 2, 3]).unwrap()];
        let (set, _) = PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(100),
            pts,
        )
        .unwrap();
        let params = FitParams::new(2, BigRational::zero());
        let cert = fit_polynomial(&set, &params).unwrap();
        assert_eq!(cert.status, FitStatus::Success);
        assert_eq!(cert.covered, 1);
        assert_eq!(cert.iterations, 1);
        let (covered, per_factor) = verify_certificate(&set, &cert).unwrap();
        assert_eq!(covered, 1);
        assert_eq!(per_factor, vec![1]);
    }

    #[test]
    fn fit_small_parabola() {
        let set = rational_parabola(30, 1000);
        let params = FitParams::new(2, BigRational::one());
        let cert = fit_polynomial(&set, &params).unwrap();
        assert_eq!(cert.status, FitStatus::Success);
        assert!(cert.meets_target(&params.epsilon));
        let (covered, _) = verify_certificate(&set, &cert).unwrap();
        assert_eq!(covered, cert.covered);
        // the conic relation is found below the terminal degree and padded
        assert_eq!(cert.records[0].kernel_degree, 2);
        assert_eq!(cert.covered, set.len());
    }

    #[test]
    fn oracle_examples() {
        let pts = vec![
            ProjPoint::from_integers(&[1, 0, 0]).unwrap(),
            ProjPoint::from_integers(&[1, 1, 1]).unwrap(),
            ProjPoint::from_integers(&[1, 2, 4]).unwrap(),
        ];
        let (set, _) = PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(10),
            pts,
        )
        .unwrap();
        let (dmin, poly) = oracle_min_degree(&set, 4).unwrap();
        assert_eq!(dmin, Some(2));
        let poly = poly.unwrap();
        for pt in set.points() {
            assert!(poly.eval(pt.coords()).is_zero());
        }

        let two = vec![
            ProjPoint::from_integers(&[1, 0]).unwrap(),
            ProjPoint::from_integers(&[1, 1]).unwrap(),
        ];
        let (set2, _) = PointSet::new(
            FieldDescriptor::rationals(),
            1,
            HeightValue::from_integer(10),
            two,
        )
        .unwrap();
        assert_eq!(oracle_min_degree(&set2, 4).unwrap().0, Some(2));

        let one = vec![ProjPoint::from_integers(&[1, 5]).unwrap()];
        let (set1, _) = PointSet::new(
            FieldDescriptor::rationals(),
            1,
            HeightValue::from_integer(10),
            one,
        )
        .unwrap();
        assert_eq!(oracle_min_degree(&set1, 4).unwrap().0, Some(1));
    }

    #[test]
    fn oracle_caps() {
        let set = rational_parabola(300, 1_000_000);
        assert!(matches!(
            oracle_min_degree(&set, 4),
            Err(Error::ResourceLimit(_))
        ));
        let small = rational_parabola(3, 100);
        assert!(matches!(
            oracle_min_degree(&small, 13),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn verify_rejects_mismatched_count() {
        let set = rational_parabola(5, 100);
        let params = FitParams::new(2, BigRational::zero());
        let mut cert = fit_polynomial(&set, &params).unwrap();
        cert.covered += 1;
        assert!(matches!(
            verify_certificate(&set, &cert),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn transform_projection() {
        let set = rational_parabola(4, 100);
        let forms = vec![
            vec![
                RingElement::Integer(BigInt::one()),
                RingElement::Integer(BigInt::zero()),
                RingElement::Integer(BigInt::zero()),
            ],
            vec![
                RingElement::Integer(BigInt::zero()),
                RingElement::Integer(BigInt::one()),
                RingElement::Integer(BigInt::zero()),
            ],
        ];
        let map = VarietyMap::new(2, 1, forms).unwrap();
        let (image, dropped) = transform_points(&set, &map).unwrap();
        assert_eq!(dropped, 0);
        assert_eq!(image.len(), set.len());
        assert_eq!(image.n, 1);
        for (src, img) in set.points().iter().zip(image.points()) {
            let a = src.coords()[1].as_integer();
            assert_eq!(img.coords()[0], RingElement::Integer(BigInt::one()));
            assert_eq!(img.coords()[1].as_integer(), a);
        }
    }

    #[test]
    fn transform_drops_kernel_points() {
        // (1:-1:0) lies on x0+x1 = x2 = 0, the common kernel of the forms
        let pts = vec![
            ProjPoint::from_integers(&[1, -1, 0]).unwrap(),
            ProjPoint::from_integers(&[1, 2, 1]).unwrap(),
        ];
        let (set, _) = PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(10),
            pts,
        )
        .unwrap();
        let forms = vec![
            vec![
                RingElement::Integer(BigInt::one()),
                RingElement::Integer(BigInt::one()),
                RingElement::Integer(BigInt::zero()),
            ],
            vec![
                RingElement::Integer(BigInt::zero()),
                RingElement::Integer(BigInt::zero()),
                RingElement::Integer(BigInt::one()),
            ],
        ];
        let map = VarietyMap::new(2, 1, forms).unwrap();
        let (image, dropped) = transform_points(&set, &map).unwrap();
        assert_eq!(dropped, 1);
        assert_eq!(image.len(), 1);
    }

    #[test]
    fn compose_identity() {
        let set = rational_parabola(10, 1000);
        let params = FitParams::new(2, BigRational::one());
        let cert = fit_polynomial(&set, &params).unwrap();
        let id = VarietyMap::new(
            2,
            2,
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            RingElement::Integer(if i == j {
                                BigInt::one()
                            } else {
                                BigInt::zero()
                            })
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let composed = compose_certificate(&cert, &id, &set).unwrap();
        assert_eq!(composed.covered, cert.covered);
        assert_eq!(composed.factors, cert.factors);
    }

    #[test]
    fn variety_map_rejects_rank_deficiency() {
        let forms = vec![
            vec![
                RingElement::Integer(BigInt::one()),
                RingElement::Integer(BigInt::one()),
            ],
            vec![
                RingElement::Integer(BigInt::from(2)),
                RingElement::Integer(BigInt::from(2)),
            ],
        ];
        assert!(VarietyMap::new(1, 1, forms).is_err());
    }

    #[test]
    fn image_heights_respect_declared_bound() {
        let set = rational_parabola(4, 100);
        let forms = vec![
            vec![
                RingElement::Integer(BigInt::from(3)),
                RingElement::Integer(BigInt::from(-2)),
                RingElement::Integer(BigInt::one()),
            ],
            vec![
                RingElement::Integer(BigInt::zero()),
                RingElement::Integer(BigInt::from(5)),
                RingElement::Integer(BigInt::one()),
            ],
        ];
        let map = VarietyMap::new(2, 1, forms).unwrap();
        let (image, _) = transform_points(&set, &map).unwrap();
        // bound is (m+1) * 5 * 100 = 1500
        assert_eq!(
            image.bound,
            HeightValue::Rational(BigRational::from_integer(BigInt::from(1500)))
        );
        for pt in image.points() {
            assert!(
                height_projective(pt).cmp_value(&image.bound)
                    != std::cmp::Ordering::Greater
            );
        }
    }
}
