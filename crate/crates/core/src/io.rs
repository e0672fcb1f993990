//! Flat-file formats: JSON Lines point sets, JSON certificates, and pretty
//! JSON reports. Every numeric payload is an exact string encoding; files
//! carry no timestamps, so identical data writes identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, FieldKind, RatFunc, RingElement};
use crate::fit::{FitStatus, IterationRecord, VanishingCertificate};
use crate::fqpoly::FqPoly;
use crate::heights::HeightValue;
use crate::params::FitParams;
use crate::poly::HomogeneousPoly;
use crate::primes::Prime;
use crate::probe::{OrderProfile, ProbeReport};
use crate::residue::{PointSet, ProjPoint, ResidueProfile};

pub const SCHEMA_VERSION: u32 = 1;

pub fn field_name(field: &FieldDescriptor) -> String {
    match field.kind {
        FieldKind::Rationals => "Q".to_string(),
        FieldKind::RationalFunctions => format!("F{}(T)", field.q_value()),
    }
}

pub fn parse_field(name: &str) -> Result<FieldDescriptor> {
    if name == "Q" {
        return Ok(FieldDescriptor::rationals());
    }
    if let Some(q) = name
        .strip_prefix('F')
        .and_then(|rest| rest.strip_suffix("(T)"))
    {
        let q: u64 = q
            .parse()
            .map_err(|_| Error::invalid(format!("bad field name {name}")))?;
        return FieldDescriptor::rational_functions(q);
    }
    Err(Error::invalid(format!(
        "unknown field {name}; expected \"Q\" or \"F<q>(T)\""
    )))
}

pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::invalid(format!("bad rational {s:?}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s.trim()).map_err(|_| bad())?,
        )),
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

pub fn height_string(h: &HeightValue) -> String {
    match h {
        HeightValue::Rational(r) => rational_string(r),
        HeightValue::QPower { q, exp } => format!("{q}^{exp}"),
    }
}

pub fn parse_height(field: &FieldDescriptor, s: &str) -> Result<HeightValue> {
    match field.kind {
        FieldKind::Rationals => Ok(HeightValue::Rational(parse_rational(s)?)),
        FieldKind::RationalFunctions => {
            let (q, exp) = s
                .split_once('^')
                .ok_or_else(|| Error::invalid(format!("bad height {s:?}: want q^exp")))?;
            let q: u64 = q
                .parse()
                .map_err(|_| Error::invalid(format!("bad height base in {s:?}")))?;
            if q != field.q_value() {
                return Err(Error::invalid(format!(
                    "height base {q} does not match the field"
                )));
            }
            let exp: i64 = exp
                .parse()
                .map_err(|_| Error::invalid(format!("bad height exponent in {s:?}")))?;
            if exp < 0 {
                return Err(Error::invalid("height exponent must be nonnegative"));
            }
            Ok(HeightValue::QPower { q, exp })
        }
    }
}

/// Ring coefficients as strings: decimal integers over Q, little-endian
/// comma-joined coefficient lists over F_q(T).
pub fn ring_string(e: &RingElement) -> String {
    match e {
        RingElement::Integer(v) => v.to_string(),
        RingElement::Polynomial(f) => {
            if f.is_zero() {
                "0".to_string()
            } else {
                f.coeffs()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
        }
    }
}

pub fn parse_ring(field: &FieldDescriptor, s: &str) -> Result<RingElement> {
    match field.kind {
        FieldKind::Rationals => Ok(RingElement::Integer(
            BigInt::from_str(s.trim())
                .map_err(|_| Error::invalid(format!("bad integer {s:?}")))?,
        )),
        FieldKind::RationalFunctions => {
            let q = field.q_value();
            let coeffs = parse_coeff_list(q, s)?;
            Ok(RingElement::Polynomial(FqPoly::new(q, coeffs)))
        }
    }
}

fn parse_coeff_list(q: u64, s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|c| {
            let v: u64 = c
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad coefficient {c:?}")))?;
            if v >= q {
                return Err(Error::invalid(format!(
                    "coefficient {v} not reduced mod {q}"
                )));
            }
            Ok(v)
        })
        .collect()
}

fn coeff_array(q: u64, v: &Value) -> Result<Vec<u64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::invalid("coefficient list must be an array"))?;
    arr.iter()
        .map(|c| {
            let c = c
                .as_u64()
                .ok_or_else(|| Error::invalid("coefficients must be nonnegative integers"))?;
            if c >= q {
                return Err(Error::invalid(format!(
                    "coefficient {c} not reduced mod {q}"
                )));
            }
            Ok(c)
        })
        .collect()
}

fn parse_coordinate(field: &FieldDescriptor, v: &Value) -> Result<FieldElement> {
    match field.kind {
        FieldKind::Rationals => {
            let s = v
                .as_str()
                .ok_or_else(|| Error::invalid("rational coordinates must be strings"))?;
            Ok(FieldElement::Rational(parse_rational(s)?))
        }
        FieldKind::RationalFunctions => {
            let obj = v.as_object().ok_or_else(|| {
                Error::invalid("function-field coordinates must be {\"num\":..} objects")
            })?;
            for key in obj.keys() {
                if key != "num" && key != "den" {
                    return Err(Error::invalid(format!("unknown coordinate key {key:?}")));
                }
            }
            let q = field.q_value();
            let num = coeff_array(
                q,
                obj.get("num")
                    .ok_or_else(|| Error::invalid("coordinate needs a \"num\" array"))?,
            )?;
            let den = match obj.get("den") {
                Some(d) => coeff_array(q, d)?,
                None => vec![1],
            };
            Ok(FieldElement::Function(RatFunc::new(
                FqPoly::new(q, num),
                FqPoly::new(q, den),
            )?))
        }
    }
}

fn coordinate_value(e: &RingElement) -> Value {
    match e {
        RingElement::Integer(v) => Value::String(v.to_string()),
        RingElement::Polynomial(f) => json!({ "num": f.coeffs(), "den": [1u64] }),
    }
}

fn bound_value(bound: &HeightValue) -> Value {
    match bound {
        HeightValue::Rational(r) => Value::String(rational_string(r)),
        HeightValue::QPower { q, exp } => json!({ "q": q, "exp": exp }),
    }
}

fn parse_bound(field: &FieldDescriptor, v: &Value) -> Result<HeightValue> {
    match (field.kind, v) {
        (FieldKind::Rationals, Value::String(s)) => {
            Ok(HeightValue::Rational(parse_rational(s)?))
        }
        (FieldKind::RationalFunctions, Value::Object(obj)) => {
            for key in obj.keys() {
                if key != "q" && key != "exp" {
                    return Err(Error::invalid(format!("unknown bound key {key:?}")));
                }
            }
            let q = obj
                .get("q")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::invalid("bound needs integer \"q\""))?;
            if q != field.q_value() {
                return Err(Error::invalid("bound base does not match the field"));
            }
            let exp = obj
                .get("exp")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::invalid("bound needs integer \"exp\""))?;
            if exp < 0 {
                return Err(Error::invalid("bound exponent must be nonnegative"));
            }
            Ok(HeightValue::QPower { q, exp })
        }
        (FieldKind::Rationals, _) => {
            Err(Error::invalid("over Q the bound N must be a string"))
        }
        (FieldKind::RationalFunctions, _) => Err(Error::invalid(
            "over F_q(T) the bound N must be {\"q\":..,\"exp\":..}",
        )),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderDto {
    field: String,
    n: u32,
    #[serde(rename = "N")]
    bound: Value,
}

fn at(line: usize, e: impl std::fmt::Display) -> Error {
    Error::ParseAt {
        line,
        msg: e.to_string(),
    }
}

/// Reads a JSON Lines point-set file: a header object, then one coordinate
/// array per line. The second return is the duplicate count dropped during
/// canonicalization. Height violations abort with the offending point named.
pub fn read_pointset(path: &Path) -> Result<(PointSet, usize)> {
    let file = fs::File::open(path)
        .map_err(|e| Error::invalid(format!("cannot open {}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    let mut header: Option<(FieldDescriptor, u32, HeightValue)> = None;
    let mut points: Vec<ProjPoint> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| at(lineno, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match &header {
            None => {
                let dto: HeaderDto =
                    serde_json::from_str(trimmed).map_err(|e| at(lineno, e))?;
                let field = parse_field(&dto.field).map_err(|e| at(lineno, e))?;
                let bound = parse_bound(&field, &dto.bound).map_err(|e| at(lineno, e))?;
                header = Some((field, dto.n, bound));
            }
            Some((field, n, _)) => {
                let v: Value = serde_json::from_str(trimmed).map_err(|e| at(lineno, e))?;
                let coords = v
                    .as_array()
                    .ok_or_else(|| at(lineno, "expected a coordinate array"))?;
                if coords.len() != *n as usize + 1 {
                    return Err(at(
                        lineno,
                        format!("expected {} coordinates, got {}", n + 1, coords.len()),
                    ));
                }
                let parsed: Vec<FieldElement> = coords
                    .iter()
                    .map(|c| parse_coordinate(field, c))
                    .collect::<Result<_>>()
                    .map_err(|e| at(lineno, e))?;
                points.push(ProjPoint::new(&parsed).map_err(|e| at(lineno, e))?);
            }
        }
    }
    let (field, n, bound) =
        header.ok_or_else(|| Error::invalid("point-set file has no header line"))?;
    PointSet::new(field, n, bound, points)
}

pub fn write_pointset(path: &Path, set: &PointSet) -> Result<()> {
    let mut out = String::new();
    let header = json!({
        "field": field_name(&set.field),
        "n": set.n,
        "N": bound_value(&set.bound),
    });
    out.push_str(&serde_json::to_string(&header).expect("header serializes"));
    out.push('\n');
    for pt in set.points() {
        let coords: Vec<Value> = pt.coords().iter().map(coordinate_value).collect();
        out.push_str(&serde_json::to_string(&Value::Array(coords)).expect("row serializes"));
        out.push('\n');
    }
    fs::write(path, out)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDto {
    n: u32,
    kappa: String,
    tau: String,
    eta: String,
    epsilon: String,
    r_override: Option<u64>,
    num_candidates: u32,
    theta: String,
    max_iterations: u32,
    seed: u64,
    alpha: String,
}

impl ParamsDto {
    fn from_params(p: &FitParams) -> Self {
        ParamsDto {
            n: p.n,
            kappa: rational_string(&p.kappa),
            tau: rational_string(&p.tau),
            eta: rational_string(&p.eta),
            epsilon: rational_string(&p.epsilon),
            r_override: p.r_override,
            num_candidates: p.num_candidates,
            theta: rational_string(&p.theta),
            max_iterations: p.max_iterations,
            seed: p.seed,
            alpha: rational_string(&p.alpha),
        }
    }

    fn into_params(self) -> Result<FitParams> {
        let mut p = FitParams::new(self.n, parse_rational(&self.kappa)?);
        p.tau = parse_rational(&self.tau)?;
        p.eta = parse_rational(&self.eta)?;
        p.epsilon = parse_rational(&self.epsilon)?;
        p.r_override = self.r_override;
        p.num_candidates = self.num_candidates;
        p.theta = parse_rational(&self.theta)?;
        p.max_iterations = self.max_iterations;
        p.seed = self.seed;
        p.alpha = parse_rational(&self.alpha)?;
        p.validate()?;
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDto {
    degree: u32,
    coefficients: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDto {
    index: u32,
    remaining_before: usize,
    dense_size: usize,
    degree_selected: u32,
    kernel_degree: u32,
    strategy: String,
    factor_height: String,
    newly_covered: usize,
    covered_total: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDto {
    schema_version: u32,
    kind: String,
    field: String,
    nvars: usize,
    params: ParamsDto,
    status: String,
    covered: usize,
    total: usize,
    iterations: u32,
    total_degree: u32,
    max_coeff_height: String,
    factors: Vec<FactorDto>,
    records: Vec<RecordDto>,
}

fn exponent_key(e: &[u16]) -> String {
    e.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_exponent_key(s: &str, nvars: usize, degree: u32) -> Result<Vec<u16>> {
    let parts: Vec<u16> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u16>()
                .map_err(|_| Error::invalid(format!("bad exponent {p:?}")))
        })
        .collect::<Result<_>>()?;
    if parts.len() != nvars {
        return Err(Error::invalid(format!(
            "exponent tuple {s:?} has {} entries, expected {nvars}",
            parts.len()
        )));
    }
    let total: u32 = parts.iter().map(|&x| x as u32).sum();
    if total != degree {
        return Err(Error::invalid(format!(
            "exponent tuple {s:?} sums to {total}, factor degree is {degree}"
        )));
    }
    Ok(parts)
}

fn factor_dto(f: &HomogeneousPoly) -> FactorDto {
    let coefficients = f
        .terms()
        .map(|(e, c)| (exponent_key(e), ring_string(c)))
        .collect();
    FactorDto {
        degree: f.degree(),
        coefficients,
    }
}

fn factor_from_dto(field: &FieldDescriptor, nvars: usize, dto: &FactorDto) -> Result<HomogeneousPoly> {
    let mut terms: Vec<(Vec<u16>, RingElement)> = Vec::with_capacity(dto.coefficients.len());
    for (k, v) in &dto.coefficients {
        terms.push((
            parse_exponent_key(k, nvars, dto.degree)?,
            parse_ring(field, v)?,
        ));
    }
    HomogeneousPoly::new(field.clone(), nvars, dto.degree, terms)
}

fn status_string(s: FitStatus) -> String {
    s.as_str().to_string()
}

fn parse_status(s: &str) -> Result<FitStatus> {
    match s {
        "success" => Ok(FitStatus::Success),
        "max_iterations" => Ok(FitStatus::MaxIterations),
        other => Err(Error::invalid(format!("unknown status {other:?}"))),
    }
}

pub fn write_certificate(
    path: &Path,
    field: &FieldDescriptor,
    nvars: usize,
    params: &FitParams,
    cert: &VanishingCertificate,
) -> Result<()> {
    let dto = CertificateDto {
        schema_version: SCHEMA_VERSION,
        kind: "vanishing_certificate".to_string(),
        field: field_name(field),
        nvars,
        params: ParamsDto::from_params(params),
        status: status_string(cert.status),
        covered: cert.covered,
        total: cert.total,
        iterations: cert.iterations,
        total_degree: cert.total_degree,
        max_coeff_height: height_string(&cert.max_coeff_height),
        factors: cert.factors.iter().map(factor_dto).collect(),
        records: cert
            .records
            .iter()
            .map(|r| RecordDto {
                index: r.index,
                remaining_before: r.remaining_before,
                dense_size: r.dense_size,
                degree_selected: r.degree_selected,
                kernel_degree: r.kernel_degree,
                strategy: r.strategy.clone(),
                factor_height: height_string(&r.factor_height),
                newly_covered: r.newly_covered,
                covered_total: r.covered_total,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&dto).expect("certificate serializes");
    fs::write(path, text + "\n")
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn read_certificate(
    path: &Path,
) -> Result<(FieldDescriptor, usize, FitParams, VanishingCertificate)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot open {}: {e}", path.display())))?;
    let dto: CertificateDto = serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("bad certificate: {e}")))?;
    if dto.schema_version != SCHEMA_VERSION {
        return Err(Error::invalid(format!(
            "unsupported schema version {}",
            dto.schema_version
        )));
    }
    if dto.kind != "vanishing_certificate" {
        return Err(Error::invalid(format!("unexpected document kind {:?}", dto.kind)));
    }
    let field = parse_field(&dto.field)?;
    let params = dto.params.into_params()?;
    let factors: Vec<HomogeneousPoly> = dto
        .factors
        .iter()
        .map(|f| factor_from_dto(&field, dto.nvars, f))
        .collect::<Result<_>>()?;
    let records: Vec<IterationRecord> = dto
        .records
        .iter()
        .map(|r| {
            Ok(IterationRecord {
                index: r.index,
                remaining_before: r.remaining_before,
                dense_size: r.dense_size,
                degree_selected: r.degree_selected,
                kernel_degree: r.kernel_degree,
                strategy: r.strategy.clone(),
                factor_height: parse_height(&field, &r.factor_height)?,
                newly_covered: r.newly_covered,
                covered_total: r.covered_total,
            })
        })
        .collect::<Result<_>>()?;
    let cert = VanishingCertificate {
        factors,
        total_degree: dto.total_degree,
        max_coeff_height: parse_height(&field, &dto.max_coeff_height)?,
        covered: dto.covered,
        total: dto.total,
        iterations: dto.iterations,
        status: parse_status(&dto.status)?,
        records,
    };
    Ok((field, dto.nvars, params, cert))
}

/// Wraps a report payload with the schema version and kind, pretty-printed.
pub fn write_report(path: &Path, kind: &str, payload: Value) -> Result<()> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "report": payload,
    });
    let text = serde_json::to_string_pretty(&doc).expect("report serializes");
    fs::write(path, text + "\n")
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn probe_report_value(r: &ProbeReport) -> Value {
    json!({
        "alpha": rational_string(&r.alpha),
        "kappa": rational_string(&r.kappa),
        "tau": rational_string(&r.tau),
        "window": {
            "field": field_name(&r.window.field),
            "lower_pow": rational_string(&r.window.lower.pow),
            "lower_root": r.window.lower.root,
            "upper_pow": rational_string(&r.window.upper.pow),
            "upper_root": r.window.upper.root,
        },
        "primes_checked": r.primes_checked,
        "pass": r.pass,
        "violations": r.violations.iter().map(|v| json!({
            "prime": v.prime.to_string(),
            "norm": v.prime.norm().to_string(),
            "class_count": v.class_count,
            "budget": v.budget,
        })).collect::<Vec<_>>(),
    })
}

pub fn order_profile_value(p: &OrderProfile) -> Value {
    json!({
        "base": p.base,
        "entries": p.entries.iter().map(|e| json!({
            "p": e.p,
            "order": e.u_p,
            "full_classes": e.full_classes,
            "full_predicted": e.full_predicted,
            "value_classes": e.value_classes,
            "value_predicted": e.value_predicted,
        })).collect::<Vec<_>>(),
        "skipped": p.skipped,
    })
}

pub fn residue_profile_value(p: &ResidueProfile) -> Value {
    json!({
        "kappa_max": p.kappa_max,
        "per_prime": p.per_prime.iter().map(|(prime, st)| json!({
            "prime": prime.to_string(),
            "norm": st.norm.to_string(),
            "class_count": st.class_count,
            "kappa": st.kappa,
        })).collect::<Vec<_>>(),
    })
}

pub fn primes_value(ps: &[Prime]) -> Value {
    Value::Array(
        ps.iter()
            .map(|p| {
                json!({
                    "prime": p.to_string(),
                    "norm": p.norm().to_string(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use tempfile::tempdir;

    fn parabola_set() -> PointSet {
        let pts: Vec<ProjPoint> = (-5i64..=5)
            .map(|a| ProjPoint::from_integers(&[1, a, a * a]).unwrap())
            .collect();
        PointSet::new(
            FieldDescriptor::rationals(),
            2,
            HeightValue::from_integer(100),
            pts,
        )
        .unwrap()
        .0
    }

    #[test]
    fn header_example_parses() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        fs::write(
            &path,
            "{\"field\":\"Q\",\"n\":2,\"N\":\"1000\"}\n[\"1\",\"7\",\"49\"]\n",
        )
        .unwrap();
        let (set, dups) = read_pointset(&path).unwrap();
        assert_eq!(dups, 0);
        assert_eq!(set.len(), 1);
        let p = &set.points()[0];
        assert_eq!(p.coords()[2], RingElement::Integer(BigInt::from(49)));
    }

    #[test]
    fn height_violation_is_fatal_and_names_the_point() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        fs::write(
            &path,
            "{\"field\":\"Q\",\"n\":1,\"N\":\"1000\"}\n[\"1\",\"2000\"]\n",
        )
        .unwrap();
        let err = read_pointset(&path).unwrap_err();
        match err {
            Error::HeightBound(msg) => assert!(msg.contains("2000"), "{msg}"),
            other => panic!("expected a height error, got {other:?}"),
        }
    }

    #[test]
    fn duplicates_reported_not_fatal() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        fs::write(
            &path,
            "{\"field\":\"Q\",\"n\":1,\"N\":\"10\"}\n[\"1\",\"2\"]\n[\"2\",\"4\"]\n[\"1\",\"3\"]\n",
        )
        .unwrap();
        let (set, dups) = read_pointset(&path).unwrap();
        assert_eq!(dups, 1);
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        fs::write(
            &path,
            "{\"field\":\"Q\",\"n\":1,\"N\":\"10\"}\n[\"1\",\"2\"]\n[\"1\"]\n",
        )
        .unwrap();
        match read_pointset(&path).unwrap_err() {
            Error::ParseAt { line, .. } => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_header_key_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        fs::write(
            &path,
            "{\"field\":\"Q\",\"n\":1,\"N\":\"10\",\"extra\":1}\n[\"1\",\"2\"]\n",
        )
        .unwrap();
        assert!(matches!(
            read_pointset(&path).unwrap_err(),
            Error::ParseAt { line: 1, .. }
        ));
    }

    #[test]
    fn rational_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        let set = parabola_set();
        write_pointset(&path, &set).unwrap();
        let (back, dups) = read_pointset(&path).unwrap();
        assert_eq!(dups, 0);
        assert_eq!(back.points(), set.points());
        assert_eq!(back.bound, set.bound);
        // byte-identical rewrite
        let first = fs::read(&path).unwrap();
        write_pointset(&path, &back).unwrap();
        assert_eq!(first, fs::read(&path).unwrap());
    }

    #[test]
    fn function_field_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        let pts: Vec<ProjPoint> = (0u64..8)
            .map(|bits| {
                let f: Vec<u64> = (0..3).map(|i| (bits >> i) & 1).collect();
                ProjPoint::from_polys(2, &[vec![1], f]).unwrap()
            })
            .collect();
        let set = PointSet::new(
            FieldDescriptor::rational_functions(2).unwrap(),
            1,
            HeightValue::q_power(2, 2),
            pts,
        )
        .unwrap()
        .0;
        write_pointset(&path, &set).unwrap();
        let (back, _) = read_pointset(&path).unwrap();
        assert_eq!(back.points(), set.points());
        assert_eq!(back.bound, set.bound);
    }

    #[test]
    fn fractional_coordinates_canonicalize() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.jsonl");
        fs::write(
            &path,
            "{\"field\":\"Q\",\"n\":1,\"N\":\"10\"}\n[\"1/2\",\"3/2\"]\n",
        )
        .unwrap();
        let (set, _) = read_pointset(&path).unwrap();
        let coords = set.points()[0].coords();
        assert_eq!(coords[0], RingElement::Integer(BigInt::from(1)));
        assert_eq!(coords[1], RingElement::Integer(BigInt::from(3)));
    }

    #[test]
    fn certificate_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cert.json");
        let set = parabola_set();
        let params = FitParams::new(2, BigRational::zero());
        let cert = crate::fit::fit_polynomial(&set, &params).unwrap();
        write_certificate(
            &path,
            &FieldDescriptor::rationals(),
            3,
            &params,
            &cert,
        )
        .unwrap();
        let (field, nvars, params2, cert2) = read_certificate(&path).unwrap();
        assert_eq!(field, FieldDescriptor::rationals());
        assert_eq!(nvars, 3);
        assert_eq!(params2.seed, params.seed);
        assert_eq!(params2.epsilon, params.epsilon);
        assert_eq!(cert2.factors, cert.factors);
        assert_eq!(cert2.covered, cert.covered);
        assert_eq!(cert2.status, cert.status);
        assert_eq!(cert2.records.len(), cert.records.len());
        // verification accepts the reloaded certificate
        let (covered, _) = crate::fit::verify_certificate(&set, &cert2).unwrap();
        assert_eq!(covered, cert2.covered);
        // redundant write is byte-identical
        let first = fs::read(&path).unwrap();
        write_certificate(&path, &field, nvars, &params2, &cert2).unwrap();
        assert_eq!(first, fs::read(&path).unwrap());
    }

    #[test]
    fn report_has_schema_version() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("report.json");
        let set = parabola_set();
        let report = crate::probe::conjecture_probe(
            &set,
            &BigRational::one(),
            &BigRational::one(),
            &BigRational::one(),
            None,
        )
        .unwrap();
        write_report(&path, "probe", probe_report_value(&report)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], json!(SCHEMA_VERSION));
        assert_eq!(v["kind"], json!("probe"));
        assert_eq!(v["report"]["pass"], json!(true));
    }

    #[test]
    fn ring_string_roundtrip_ff() {
        let field = FieldDescriptor::rational_functions(3).unwrap();
        let e = RingElement::Polynomial(FqPoly::new(3, vec![2, 0, 1]));
        let s = ring_string(&e);
        assert_eq!(s, "2,0,1");
        assert_eq!(parse_ring(&field, &s).unwrap(), e);
        let zero = RingElement::Polynomial(FqPoly::zero(3));
        assert_eq!(parse_ring(&field, &ring_string(&zero)).unwrap(), zero);
    }

    #[test]
    fn unreduced_coefficients_rejected() {
        let field = FieldDescriptor::rational_functions(3).unwrap();
        assert!(parse_ring(&field, "4,1").is_err());
    }
}
