//! Projective points in canonical primitive form, bounded point sets, and
//! reduction modulo primes with residue-class profiling.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num::{BigInt, Integer, One, ToPrimitive};

use crate::arith::{inv_mod_prime, mul_mod};
use crate::error::{Error, Result};
use crate::field::{
    content_and_primitive, FieldDescriptor, FieldElement, FieldKind, RingElement,
};
use crate::fqpoly::FqPoly;
use crate::heights::{height_projective, HeightValue};
use crate::primes::Prime;

/// A projective point stored as its canonical primitive representative:
/// ring coordinates with unit content, first nonzero coordinate positive or
/// monic. Structural equality is projective equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<RingElement>,
}

impl ProjPoint {
    pub fn new(v: &[FieldElement]) -> Result<ProjPoint> {
        let (_, w) = content_and_primitive(v)?;
        Ok(ProjPoint { coords: w })
    }

    pub fn from_ring(v: &[RingElement]) -> Result<ProjPoint> {
        let field: Vec<FieldElement> = v.iter().map(|r| r.to_field()).collect();
        Self::new(&field)
    }

    pub fn from_integers(v: &[i64]) -> Result<ProjPoint> {
        let field: Vec<FieldElement> = v.iter().map(|&i| FieldElement::from_integer(i)).collect();
        Self::new(&field)
    }

    pub fn from_polys(q: u64, coeffs: &[Vec<u64>]) -> Result<ProjPoint> {
        let ring: Vec<RingElement> = coeffs
            .iter()
            .map(|c| RingElement::Polynomial(FqPoly::new(q, c.clone())))
            .collect();
        Self::from_ring(&ring)
    }

    pub fn coords(&self) -> &[RingElement] {
        &self.coords
    }

    pub fn field(&self) -> FieldDescriptor {
        self.coords[0].descriptor()
    }

    /// Ambient projective dimension n (one less than the coordinate count).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A deduplicated set of projective points with a declared height bound.
/// Insertion order is preserved; every point is validated against the bound
/// at construction.
#[derive(Debug, Clone)]
pub struct PointSet {
    pub field: FieldDescriptor,
    pub n: u32,
    pub bound: HeightValue,
    points: Vec<ProjPoint>,
}

impl PointSet {
    /// Builds the set; the second return is the number of duplicates dropped.
    pub fn new(
        field: FieldDescriptor,
        n: u32,
        bound: HeightValue,
        points: Vec<ProjPoint>,
    ) -> Result<(PointSet, usize)> {
        match (&bound, field.kind) {
            (HeightValue::Rational(_), FieldKind::Rationals) => {}
            (HeightValue::QPower { q, .. }, FieldKind::RationalFunctions)
                if *q == field.q_value() => {}
            _ => return Err(Error::invalid("height bound does not match the field")),
        }
        let mut seen: HashSet<ProjPoint> = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        let mut duplicates = 0usize;
        for p in points {
            if p.field() != field {
                return Err(Error::invalid(format!(
                    "point {p} does not live over {field}"
                )));
            }
            if p.dim() != n as usize {
                return Err(Error::invalid(format!(
                    "point {p} has dimension {}, expected {n}",
                    p.dim()
                )));
            }
            let h = height_projective(&p);
            if h.cmp_value(&bound) == std::cmp::Ordering::Greater {
                return Err(Error::HeightBound(format!(
                    "point {p} has height {h}, exceeding the declared bound {bound}"
                )));
            }
            if seen.insert(p.clone()) {
                kept.push(p);
            } else {
                duplicates += 1;
            }
        }
        Ok((
            PointSet {
                field,
                n,
                bound,
                points: kept,
            },
            duplicates,
        ))
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A normalized residue class modulo a prime: componentwise residues scaled
/// so the first nonzero one is 1. Over F_q(T) each coordinate is a residue
/// polynomial, padded to deg f coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    pub prime: Prime,
    pub coords: Vec<Vec<u64>>,
}

impl ResidueClass {
    /// Flattened coordinates, a compact dictionary key for class interning.
    pub fn flat_key(&self) -> Vec<u64> {
        self.coords.iter().flatten().copied().collect()
    }
}

/// Reduce a canonical point modulo a prime. Primitivity guarantees a nonzero
/// residue, so the normalization is always defined.
pub fn reduce_point(x: &ProjPoint, p: &Prime) -> ResidueClass {
    assert_eq!(x.field(), p.field(), "point and prime over different fields");
    match p {
        Prime::Rational(pp) => {
            let m = BigInt::from(*pp);
            let residues: Vec<u64> = x
                .coords()
                .iter()
                .map(|c| {
                    c.as_integer()
                        .mod_floor(&m)
                        .to_u64()
                        .expect("residue below the prime")
                })
                .collect();
            let first = *residues
                .iter()
                .find(|&&r| r != 0)
                .expect("primitive point has a unit coordinate");
            let inv = inv_mod_prime(first, *pp);
            let coords = residues
                .into_iter()
                .map(|r| vec![mul_mod(r, inv, *pp)])
                .collect();
            ResidueClass {
                prime: p.clone(),
                coords,
            }
        }
        Prime::Irreducible(f) => {
            let h = f.degree().expect("nonconstant");
            let residues: Vec<FqPoly> =
                x.coords().iter().map(|c| c.as_polynomial().rem(f)).collect();
            let first = residues
                .iter()
                .find(|r| !r.is_zero())
                .expect("primitive point has a unit coordinate");
            let inv = first
                .inverse_mod(f)
                .expect("nonzero residue is invertible");
            let coords = residues
                .iter()
                .map(|r| {
                    let scaled = r.mul(&inv).rem(f);
                    let mut padded = scaled.coeffs().to_vec();
                    padded.resize(h, 0);
                    padded
                })
                .collect();
            ResidueClass {
                prime: p.clone(),
                coords,
            }
        }
    }
}

/// Distinct residue classes of a point set modulo a prime, with the exact
/// count. Classes are returned sorted by their coordinate encoding.
pub fn residue_classes(x: &PointSet, p: &Prime) -> (usize, Vec<ResidueClass>) {
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    for pt in x.points() {
        seen.insert(reduce_point(pt, p).coords);
    }
    let mut classes: Vec<ResidueClass> = seen
        .into_iter()
        .map(|coords| ResidueClass {
            prime: p.clone(),
            coords,
        })
        .collect();
    classes.sort_by(|a, b| a.coords.cmp(&b.coords));
    (classes.len(), classes)
}

/// Per-prime class statistics. kappa is the defect exponent
/// log(class_count)/log(norm), zero by convention for counts below 2.
#[derive(Debug, Clone)]
pub struct PrimeStats {
    pub class_count: usize,
    pub norm: BigInt,
    pub kappa: f64,
}

#[derive(Debug, Clone)]
pub struct ResidueProfile {
    pub per_prime: BTreeMap<Prime, PrimeStats>,
    pub kappa_max: f64,
}

/// Profile a point set over a list of primes. Per-prime work runs in
/// parallel when enabled; the merged map is ordered by prime either way.
pub fn profile(x: &PointSet, primes: &[Prime]) -> Result<ResidueProfile> {
    if primes.is_empty() {
        return Err(Error::invalid("profile needs at least one prime"));
    }
    for p in primes {
        if p.field() != x.field {
            return Err(Error::FieldMismatch);
        }
    }
    let stats = crate::parallel::maybe_par_map(primes, |p| {
        let (count, _) = residue_classes(x, p);
        let norm = p.norm();
        let kappa = if count <= 1 {
            0.0
        } else {
            (count as f64).ln() / p.ln_norm()
        };
        PrimeStats {
            class_count: count,
            norm,
            kappa,
        }
    });
    let kappa_max = stats
        .iter()
        .map(|s| s.kappa)
        .fold(0.0f64, f64::max);
    let per_prime = primes.iter().cloned().zip(stats).collect();
    Ok(ResidueProfile {
        per_prime,
        kappa_max,
    })
}

/// Largest possible class count modulo a prime of the given norm in P^n:
/// the point count of projective n-space over the residue field.
pub fn projective_space_size(norm: &BigInt, n: u32) -> BigInt {
    let mut sum = BigInt::one();
    let mut pow = BigInt::one();
    for _ in 0..n {
        pow *= norm;
        sum += &pow;
    }
    sum
}
