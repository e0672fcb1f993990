//! Homogeneous polynomials in n+1 variables with exact ring coefficients.
//!
//! Monomials follow one fixed order everywhere: exponent vectors in
//! descending lexicographic order, so for three variables and degree 2 the
//! order is (2,0,0), (1,1,0), (1,0,1), (0,2,0), (0,1,1), (0,0,2). Coefficient
//! vectors produced and consumed by the fitting code are indexed this way.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, RingElement};
use crate::heights::{height_one_affix, HeightValue};

/// Exponent vectors of total degree `degree` in `nvars` variables, in
/// descending lexicographic order.
pub fn monomial_exponents(nvars: usize, degree: u32) -> Vec<Vec<u16>> {
    assert!(nvars >= 1, "need at least one variable");
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    fill(&mut out, &mut cur, 0, degree);
    out
}

fn fill(out: &mut Vec<Vec<u16>>, cur: &mut Vec<u16>, pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining as u16;
        out.push(cur.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e as u16;
        fill(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

/// binom(degree + nvars - 1, nvars - 1), the length of monomial_exponents.
/// None on overflow of u64.
pub fn monomial_count(nvars: usize, degree: u32) -> Option<u64> {
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// A homogeneous polynomial. Zero coefficients are never stored; the zero
/// polynomial has an empty term map but keeps its field and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    field: FieldDescriptor,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u16>, RingElement>,
}

impl HomogeneousPoly {
    pub fn new(
        field: FieldDescriptor,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u16>, RingElement)>,
    ) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::invalid("a polynomial needs at least one variable"));
        }
        let mut map = BTreeMap::new();
        for (expts, coeff) in terms {
            if expts.len() != nvars {
                return Err(Error::invalid(format!(
                    "exponent vector has {} entries, expected {}",
                    expts.len(),
                    nvars
                )));
            }
            let total: u32 = expts.iter().map(|&e| e as u32).sum();
            if total != degree {
                return Err(Error::invalid(format!(
                    "monomial of degree {total} in a degree-{degree} polynomial"
                )));
            }
            if coeff.descriptor() != field {
                return Err(Error::invalid("coefficient from a different field"));
            }
            if coeff.is_zero() {
                continue;
            }
            if map.insert(expts, coeff).is_some() {
                return Err(Error::invalid("repeated monomial"));
            }
        }
        Ok(HomogeneousPoly {
            field,
            nvars,
            degree,
            terms: map,
        })
    }

    /// Coefficients listed in the canonical monomial order.
    pub fn from_coeff_vector(
        field: FieldDescriptor,
        nvars: usize,
        degree: u32,
        coeffs: &[RingElement],
    ) -> Result<Self> {
        let expts = monomial_exponents(nvars, degree);
        if coeffs.len() != expts.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                expts.len()
            )));
        }
        Self::new(
            field,
            nvars,
            degree,
            expts.into_iter().zip(coeffs.iter().cloned()),
        )
    }

    pub fn zero(field: FieldDescriptor, nvars: usize, degree: u32) -> Self {
        HomogeneousPoly {
            field,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (descending lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &RingElement)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, expts: &[u16]) -> RingElement {
        self.terms
            .get(expts)
            .cloned()
            .unwrap_or_else(|| self.field.ring_zero())
    }

    /// Coefficients in canonical order, zeros included.
    pub fn coeff_vector(&self) -> Vec<RingElement> {
        monomial_exponents(self.nvars, self.degree)
            .iter()
            .map(|e| self.coeff(e))
            .collect()
    }

    pub fn eval(&self, point: &[RingElement]) -> RingElement {
        assert_eq!(point.len(), self.nvars, "wrong number of coordinates");
        for c in point {
            assert!(
                c.descriptor() == self.field,
                "point from a different field"
            );
        }
        // per-variable power tables up to the largest exponent in the support
        let mut max_exp = vec![0u16; self.nvars];
        for expts in self.terms.keys() {
            for (m, &e) in max_exp.iter_mut().zip(expts) {
                *m = (*m).max(e);
            }
        }
        let pows: Vec<Vec<RingElement>> = point
            .iter()
            .zip(&max_exp)
            .map(|(x, &m)| {
                let mut col = Vec::with_capacity(m as usize + 1);
                col.push(self.field.ring_one());
                for k in 1..=m as usize {
                    let next = col[k - 1].mul(x);
                    col.push(next);
                }
                col
            })
            .collect();
        let mut acc = self.field.ring_zero();
        for (expts, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in expts.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&pows[i][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::invalid("product of polynomials over different fields"));
        }
        if self.nvars != other.nvars {
            return Err(Error::invalid(
                "product of polynomials in different variable counts",
            ));
        }
        let degree = self.degree + other.degree;
        let mut map: BTreeMap<Vec<u16>, RingElement> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expts: Vec<u16> = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                let prod = ca.mul(cb);
                match map.remove(&expts) {
                    None => {
                        if !prod.is_zero() {
                            map.insert(expts, prod);
                        }
                    }
                    Some(cur) => {
                        let s = cur.add(&prod);
                        if !s.is_zero() {
                            map.insert(expts, s);
                        }
                    }
                }
            }
        }
        Ok(HomogeneousPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            degree,
            terms: map,
        })
    }

    /// Multiply by the monomial var^power; raises the degree, keeps the
    /// coefficients.
    pub fn mul_var_power(&self, var: usize, power: u16) -> Self {
        assert!(var < self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[var] += power;
                (e, c.clone())
            })
            .collect();
        HomogeneousPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            degree: self.degree + power as u32,
            terms,
        }
    }

    /// Substitute x_i <- sum_j map[i][j] * y_j. The result is homogeneous of
    /// the same degree in map[0].len() new variables.
    pub fn compose_linear(&self, map: &[Vec<RingElement>]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::invalid(format!(
                "substitution has {} rows for {} variables",
                map.len(),
                self.nvars
            )));
        }
        let new_nvars = map.first().map_or(0, |r| r.len());
        if new_nvars == 0 || map.iter().any(|r| r.len() != new_nvars) {
            return Err(Error::invalid("substitution rows must share a positive length"));
        }
        for row in map {
            for c in row {
                if c.descriptor() != self.field {
                    return Err(Error::invalid("substitution entry from a different field"));
                }
            }
        }
        let forms: Vec<HomogeneousPoly> = map
            .iter()
            .map(|row| {
                let terms = row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(
                    |(j, c)| {
                        let mut e = vec![0u16; new_nvars];
                        e[j] = 1;
                        (e, c.clone())
                    },
                );
                HomogeneousPoly {
                    field: self.field.clone(),
                    nvars: new_nvars,
                    degree: 1,
                    terms: terms.collect(),
                }
            })
            .collect();
        // power cache for each linear form up to its largest exponent
        let mut max_exp = vec![0u16; self.nvars];
        for expts in self.terms.keys() {
            for (m, &e) in max_exp.iter_mut().zip(expts) {
                *m = (*m).max(e);
            }
        }
        let mut pows: Vec<Vec<HomogeneousPoly>> = Vec::with_capacity(self.nvars);
        for (form, &m) in forms.iter().zip(&max_exp) {
            let mut col = vec![HomogeneousPoly {
                field: self.field.clone(),
                nvars: new_nvars,
                degree: 0,
                terms: [(vec![0u16; new_nvars], self.field.ring_one())]
                    .into_iter()
                    .collect(),
            }];
            for k in 1..=m as usize {
                let next = col[k - 1].mul(form)?;
                col.push(next);
            }
            pows.push(col);
        }
        let mut acc = HomogeneousPoly::zero(self.field.clone(), new_nvars, self.degree);
        for (expts, coeff) in &self.terms {
            let mut term = HomogeneousPoly {
                field: self.field.clone(),
                nvars: new_nvars,
                degree: 0,
                terms: [(vec![0u16; new_nvars], coeff.clone())].into_iter().collect(),
            };
            for (i, &e) in expts.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&pows[i][e as usize])?;
                }
            }
            acc = acc.add_raw(&term);
        }
        Ok(acc)
    }

    fn add_raw(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            match map.remove(e) {
                None => {
                    map.insert(e.clone(), c.clone());
                }
                Some(cur) => {
                    let s = cur.add(c);
                    if !s.is_zero() {
                        map.insert(e.clone(), s);
                    }
                }
            }
        }
        HomogeneousPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            degree: self.degree.max(other.degree),
            terms: map,
        }
    }

    /// Largest H(1 : c) over the coefficients; 1 for the zero polynomial.
    pub fn max_coeff_height(&self) -> HeightValue {
        let mut best = HeightValue::one_for(&self.field);
        for c in self.terms.values() {
            let h = height_one_affix(std::slice::from_ref(&c.to_field()));
            if h.cmp_value(&best) == std::cmp::Ordering::Greater {
                best = h;
            }
        }
        best
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (expts, coeff) in self.terms() {
            let cs = coeff.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = expts
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{e}")
                    }
                })
                .collect();
            let needs_parens = mag.contains(' ') || mag.contains('+');
            if mono.is_empty() {
                if needs_parens {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else if needs_parens {
                write!(f, "({})*{}", mag, mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
