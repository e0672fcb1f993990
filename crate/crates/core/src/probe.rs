//! Ill-distribution probing: counts residue classes per prime against a
//! power-law budget, samples exponential graphs, and profiles how the
//! multiplicative order of the base shapes their residue counts.

use std::collections::HashSet;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, RingElement};
use crate::heights::HeightValue;
use crate::parallel::maybe_par_map;
use crate::params::log_height;
use crate::primes::{
    enumerate_primes, smallest_degree_with_norm_at_least, Prime, PrimeWindow, RealBound,
    WindowCaps, WindowMode,
};
use crate::residue::{residue_classes, PointSet, ProjPoint};

#[derive(Debug, Clone)]
pub struct ProbeViolation {
    pub prime: Prime,
    pub class_count: usize,
    /// Display value of the budget alpha * norm^kappa. The pass decision is
    /// made by exact cross-multiplied comparison, never from this float.
    pub budget: f64,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub alpha: BigRational,
    pub kappa: BigRational,
    pub tau: BigRational,
    pub window: PrimeWindow,
    pub primes_checked: usize,
    pub violations: Vec<ProbeViolation>,
    pub pass: bool,
}

/// class_count <= alpha * norm^kappa, exactly. kappa = a/b gives
/// count^b * alpha_den^b <= alpha_num^b * norm^a.
fn within_budget(
    class_count: usize,
    alpha: &BigRational,
    kappa: &BigRational,
    norm: &BigInt,
) -> Result<bool> {
    let a = kappa
        .numer()
        .to_usize()
        .ok_or_else(|| Error::invalid("kappa numerator out of range"))?;
    let b = kappa
        .denom()
        .to_usize()
        .ok_or_else(|| Error::invalid("kappa denominator out of range"))?;
    let lhs = num::pow::pow(BigInt::from(class_count), b)
        * num::pow::pow(alpha.denom().clone(), b);
    let rhs = num::pow::pow(alpha.numer().clone(), b) * num::pow::pow(norm.clone(), a);
    Ok(lhs <= rhs)
}

fn budget_display(alpha: &BigRational, kappa: &BigRational, norm: &BigInt) -> f64 {
    let (Some(a), Some(k), Some(n)) = (alpha.to_f64(), kappa.to_f64(), norm.to_f64())
    else {
        return f64::INFINITY;
    };
    a * n.powf(k)
}

/// Window [tau * (log N)^{n/(n-kappa)}, cap] with the default cap 10x the
/// lower edge, plus its prime enumeration (all degrees in range over
/// function fields).
fn probe_window(
    field: &FieldDescriptor,
    n_bound: &HeightValue,
    n: u32,
    kappa: &BigRational,
    tau: &BigRational,
    prime_cap: Option<&BigRational>,
) -> Result<(PrimeWindow, Vec<Prime>)> {
    let lambda = log_height(n_bound)?;
    if lambda <= BigRational::one() {
        return Err(Error::invalid("the height bound must exceed e"));
    }
    let exponent = BigRational::from_integer(BigInt::from(n))
        / (BigRational::from_integer(BigInt::from(n)) - kappa);
    let wn = exponent
        .numer()
        .to_usize()
        .ok_or_else(|| Error::invalid("window exponent out of range"))?;
    let wd = exponent
        .denom()
        .to_usize()
        .ok_or_else(|| Error::invalid("window exponent out of range"))?;
    let pow_lower = num::pow::pow(tau.clone(), wd) * num::pow::pow(lambda, wn);
    let root = wd as u32;
    let lower = RealBound {
        pow: pow_lower.clone(),
        root,
    };
    let upper = match prime_cap {
        Some(cap) => {
            if !cap.is_positive() {
                return Err(Error::invalid("prime cap must be positive"));
            }
            RealBound::from_rational(cap.clone())
        }
        None => RealBound {
            pow: num::pow::pow(BigRational::from_integer(BigInt::from(10)), wd) * &pow_lower,
            root,
        },
    };
    let window = PrimeWindow {
        field: field.clone(),
        lower: lower.clone(),
        upper: upper.clone(),
        mode: WindowMode::NormInInterval,
        target_degree: None,
    };
    let caps = WindowCaps::default();
    let primes = match field.kind {
        crate::field::FieldKind::Rationals => enumerate_primes(&window, &caps)?,
        crate::field::FieldKind::RationalFunctions => {
            let q = field.q_value();
            let h_lo = smallest_degree_with_norm_at_least(q, &lower.pow, lower.root);
            let cap_floor = upper.floor_integer();
            let mut all = Vec::new();
            let mut h = h_lo;
            loop {
                match q.checked_pow(h) {
                    Some(norm) if norm <= cap_floor => {}
                    _ => break,
                }
                let w = PrimeWindow::degree_target(q, h)?;
                all.extend(enumerate_primes(&w, &caps)?);
                h += 1;
            }
            all
        }
    };
    Ok((window, primes))
}

pub fn conjecture_probe(
    x: &PointSet,
    alpha: &BigRational,
    kappa: &BigRational,
    tau: &BigRational,
    prime_cap: Option<&BigRational>,
) -> Result<ProbeReport> {
    if !alpha.is_positive() {
        return Err(Error::invalid("alpha must be positive"));
    }
    if kappa.is_negative() {
        return Err(Error::invalid("kappa must be nonnegative"));
    }
    if *kappa >= BigRational::from_integer(BigInt::from(x.n)) {
        return Err(Error::invalid(format!(
            "kappa must lie below the ambient dimension {}",
            x.n
        )));
    }
    if !tau.is_positive() {
        return Err(Error::invalid("tau must be positive"));
    }
    let (window, primes) = probe_window(&x.field, &x.bound, x.n, kappa, tau, prime_cap)?;
    let counts: Vec<usize> = maybe_par_map(&primes, |p| residue_classes(x, p).0);
    let mut violations = Vec::new();
    for (p, &count) in primes.iter().zip(&counts) {
        let norm = p.norm();
        if !within_budget(count, alpha, kappa, &norm)? {
            violations.push(ProbeViolation {
                prime: p.clone(),
                class_count: count,
                budget: budget_display(alpha, kappa, &norm),
            });
        }
    }
    Ok(ProbeReport {
        alpha: alpha.clone(),
        kappa: kappa.clone(),
        tau: tau.clone(),
        window,
        primes_checked: primes.len(),
        pass: violations.is_empty(),
        violations,
    })
}

/// Integer points (1 : x : base^x) for all x >= 0 with base^x <= n.
pub fn exp_graph_sample(n: u64, base: u64) -> Result<PointSet> {
    if base < 2 {
        return Err(Error::invalid("base must be at least 2"));
    }
    if n < 1 {
        return Err(Error::invalid("bound must be at least 1"));
    }
    let limit = BigInt::from(n);
    let mut pts = Vec::new();
    let mut value = BigInt::one();
    let mut x = 0u64;
    while value <= limit {
        pts.push(ProjPoint::from_ring(&[
            RingElement::Integer(BigInt::one()),
            RingElement::Integer(BigInt::from(x)),
            RingElement::Integer(value.clone()),
        ])?);
        value *= base;
        x += 1;
    }
    let (set, _dups) = PointSet::new(
        FieldDescriptor::rationals(),
        2,
        HeightValue::from_integer(n),
        pts,
    )?;
    Ok(set)
}

#[derive(Debug, Clone)]
pub struct OrderEntry {
    pub p: u64,
    /// Multiplicative order of the base mod p.
    pub u_p: u64,
    pub full_classes: usize,
    pub full_predicted: u64,
    pub value_classes: usize,
    pub value_predicted: u64,
}

#[derive(Debug, Clone)]
pub struct OrderProfile {
    pub base: u64,
    pub entries: Vec<OrderEntry>,
    /// Primes dividing the base; order undefined there.
    pub skipped: Vec<u64>,
}

fn multiplicative_order(base: u64, p: u64) -> u64 {
    let b = base % p;
    let mut acc = b;
    let mut m = 1u64;
    while acc != 1 {
        acc = acc * b % p;
        m += 1;
    }
    m
}

/// Measured residue-class counts of an exponential graph against the
/// order-driven predictions min(|X|, p*u_p) for full classes and
/// min(|X|, u_p) for the value coordinate. Reporting only; the predictions
/// are asymptotic and never gate anything.
pub fn multiplicative_order_profile(
    x: &PointSet,
    base: u64,
    primes: &[u64],
) -> Result<OrderProfile> {
    if x.field != FieldDescriptor::rationals() || x.n != 2 {
        return Err(Error::invalid(
            "order profiling expects rational points in the plane",
        ));
    }
    if base < 2 {
        return Err(Error::invalid("base must be at least 2"));
    }
    let total = x.len() as u64;
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        let prime = Prime::rational(p)?;
        if base % p == 0 {
            skipped.push(p);
            continue;
        }
        let u_p = multiplicative_order(base, p);
        let full_classes = residue_classes(x, &prime).0;
        let modulus = BigInt::from(p);
        let value_classes = x
            .points()
            .iter()
            .map(|pt| pt.coords()[2].as_integer().mod_floor(&modulus))
            .collect::<HashSet<BigInt>>()
            .len();
        entries.push(OrderEntry {
            p,
            u_p,
            full_classes,
            full_predicted: total.min(p.saturating_mul(u_p)),
            value_classes,
            value_predicted: total.min(u_p),
        });
    }
    Ok(OrderProfile {
        base,
        entries,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_set(coords: &[[i64; 3]], bound: u64) -> PointSet {
        let pts: Vec<ProjPoint> = coords
            .iter()
            .map(|c| ProjPoint::from_integers(c).unwrap())
            .collect();
        PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(bound),
            pts,
        )
        .unwrap()
        .0
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parabola_respects_linear_budget() {
        let coords: Vec<[i64; 3]> = (-100..=100).map(|a| [1, a, a * a]).collect();
        let set = rational_set(&coords, 10_000);
        let report = conjecture_probe(
            &set,
            &BigRational::one(),
            &BigRational::one(),
            &BigRational::one(),
            None,
        )
        .unwrap();
        assert!(report.pass);
        assert!(report.violations.is_empty());
        assert!(report.primes_checked > 0);
    }

    #[test]
    fn dense_grid_violates_everywhere() {
        let mut coords = Vec::new();
        for a in -7i64..=7 {
            for b in -7i64..=7 {
                coords.push([1, a, b]);
            }
        }
        let set = rational_set(&coords, 7);
        let report = conjecture_probe(
            &set,
            &BigRational::one(),
            &BigRational::one(),
            &BigRational::one(),
            None,
        )
        .unwrap();
        assert!(!report.pass);
        assert_eq!(report.violations.len(), report.primes_checked);

        // a generous alpha absorbs every count
        let generous = conjecture_probe(
            &set,
            &BigRational::from_integer(BigInt::from(1_000_000)),
            &BigRational::one(),
            &BigRational::one(),
            None,
        )
        .unwrap();
        assert!(generous.pass);
    }

    #[test]
    fn empty_set_passes_vacuously() {
        let set = PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(100),
            Vec::new(),
        )
        .unwrap()
        .0;
        let report = conjecture_probe(
            &set,
            &BigRational::one(),
            &BigRational::one(),
            &BigRational::one(),
            None,
        )
        .unwrap();
        assert!(report.pass);
    }

    #[test]
    fn kappa_at_dimension_rejected() {
        let set = rational_set(&[[1, 2, 3]], 10);
        assert!(conjecture_probe(
            &set,
            &BigRational::one(),
            &ratio(2, 1),
            &BigRational::one(),
            None,
        )
        .is_err());
    }

    #[test]
    fn fractional_kappa_compares_exactly() {
        // budget norm^(1/2): count 3 against norm 9 sits exactly on the edge
        assert!(within_budget(3, &BigRational::one(), &ratio(1, 2), &BigInt::from(9)).unwrap());
        assert!(
            !within_budget(4, &BigRational::one(), &ratio(1, 2), &BigInt::from(9)).unwrap()
        );
        // alpha 3/2 lifts the edge to 4.5
        assert!(within_budget(4, &ratio(3, 2), &ratio(1, 2), &BigInt::from(9)).unwrap());
    }

    #[test]
    fn function_field_probe_runs() {
        let q = 2u64;
        let mut pts = Vec::new();
        for bits in 0u64..8 {
            let f: Vec<u64> = (0..3).map(|i| (bits >> i) & 1).collect();
            let fsq = crate::fqpoly::FqPoly::new(q, f.clone()).mul(&crate::fqpoly::FqPoly::new(q, f));
            pts.push(
                ProjPoint::from_polys(q, &[vec![1], (0..3).map(|i| (bits >> i) & 1).collect(), fsq.coeffs().to_vec()])
                    .unwrap(),
            );
        }
        let set = PointSet::new(
            FieldDescriptor::rational_functions(q).unwrap(),
            2,
            HeightValue::q_power(q, 4),
            pts,
        )
        .unwrap()
        .0;
        let report = conjecture_probe(
            &set,
            &BigRational::one(),
            &BigRational::one(),
            &BigRational::one(),
            None,
        )
        .unwrap();
        assert!(report.primes_checked > 0);
        assert!(report.pass);
    }

    #[test]
    fn exp_graph_examples() {
        assert_eq!(exp_graph_sample(100, 2).unwrap().len(), 7);
        assert_eq!(exp_graph_sample(2, 2).unwrap().len(), 2);
        assert_eq!(exp_graph_sample(1, 2).unwrap().len(), 1);
        let set = exp_graph_sample(100, 3).unwrap();
        // 3^4 = 81 <= 100 < 243
        assert_eq!(set.len(), 5);
        let last = &set.points()[4];
        assert_eq!(last.coords()[1].as_integer(), &BigInt::from(4));
        assert_eq!(last.coords()[2].as_integer(), &BigInt::from(81));
    }

    #[test]
    fn exp_graph_rejects_bad_parameters() {
        assert!(exp_graph_sample(100, 1).is_err());
        assert!(exp_graph_sample(0, 2).is_err());
    }

    #[test]
    fn order_profile_pins_known_orders() {
        let set = exp_graph_sample(1_000_000, 2).unwrap();
        assert_eq!(set.len(), 20);
        let profile =
            multiplicative_order_profile(&set, 2, &[2, 3, 5, 7, 11, 13]).unwrap();
        assert_eq!(profile.skipped, vec![2]);
        let orders: Vec<u64> = profile.entries.iter().map(|e| e.u_p).collect();
        assert_eq!(orders, vec![2, 4, 3, 10, 12]);
        // consecutive exponents fill the joint orbit up to the truncation
        for e in &profile.entries {
            assert_eq!(e.full_classes as u64, e.full_predicted);
            assert_eq!(e.value_classes as u64, e.value_predicted);
        }
        let p3 = &profile.entries[0];
        assert_eq!(p3.full_classes, 6);
        assert_eq!(p3.value_classes, 2);
    }

    #[test]
    fn probe_alpha_monotone() {
        let coords: Vec<[i64; 3]> = (-50..=50)
            .flat_map(|a| [[1, a, (a * a) % 11], [1, a, (a * a * a) % 7]])
            .collect();
        let set = rational_set(&coords, 2600);
        let alphas = [ratio(1, 4), ratio(1, 2), ratio(1, 1), ratio(4, 1)];
        let counts: Vec<usize> = alphas
            .iter()
            .map(|a| {
                conjecture_probe(&set, a, &BigRational::one(), &BigRational::one(), None)
                    .unwrap()
                    .violations
                    .len()
            })
            .collect();
        for w in counts.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}
