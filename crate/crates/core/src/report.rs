//! JSON reports, schema `v1`.
//!
//! Scalars use the backend's element encoding: strings for exact backends
//! (`"1/2"`, `"2"`, `"a+1"` in `F_p^m` with `a` the field generator) and
//! `[re, im]` pairs for complex numbers. Every field-valued object carries
//! its field descriptor, so reports can be parsed and replayed on their own.

use num::complex::Complex64;
use serde_json::{json, Map, Value};

use crate::critical::{CriticalCheck, CriticalField, CriticalSet, FiberPoint};
use crate::entire::{catalog, in_domain, solve_entire, verify_entire, verify_entire_certificate, EntireFunction, Image};
use crate::error::{Error, Result};
use crate::field::{Backend, BackendDescriptor, ComplexField, Field, FiniteField, Rationals};
use crate::matrix::{JordanBlock, JordanDecomposition, Matrix};
use crate::oracle::{OracleCriticalSet, OracleReport, OracleVerdict};
use crate::poly::Poly;
use crate::solver::{solve, verify, verify_certificate, BlockWitness, CriticalBlockCertificate, SolveOutcome};

pub const SCHEMA: &str = "v1";

/// Fields that can be rebuilt from their JSON descriptor.
pub trait ReportField: CriticalField {
    fn from_descriptor(v: &Value) -> Result<Self>;
}

fn backend_of(v: &Value) -> Result<Backend> {
    let d: BackendDescriptor = serde_json::from_value(v.clone())
        .map_err(|e| Error::invalid(format!("bad field descriptor {v}: {e}")))?;
    Backend::from_descriptor(&d)
}

impl ReportField for FiniteField {
    fn from_descriptor(v: &Value) -> Result<Self> {
        match backend_of(v)? {
            Backend::Fq(k) => Ok(k),
            other => Err(Error::invalid(format!("expected a finite field, got {}", other.describe()))),
        }
    }
}

impl ReportField for Rationals {
    fn from_descriptor(v: &Value) -> Result<Self> {
        match backend_of(v)? {
            Backend::Q(k) => Ok(k),
            other => Err(Error::invalid(format!("expected Q, got {}", other.describe()))),
        }
    }
}

impl ReportField for ComplexField {
    fn from_descriptor(v: &Value) -> Result<Self> {
        match backend_of(v)? {
            Backend::C(k) => Ok(k),
            other => Err(Error::invalid(format!("expected C, got {}", other.describe()))),
        }
    }
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::invalid(format!("missing key '{key}'")))
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| Error::invalid(format!("'{key}' must be an array")))
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::invalid(format!("'{key}' must be a nonnegative integer")))
}

fn get_bool(v: &Value, key: &str) -> Result<bool> {
    get(v, key)?
        .as_bool()
        .ok_or_else(|| Error::invalid(format!("'{key}' must be a boolean")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?
        .as_str()
        .ok_or_else(|| Error::invalid(format!("'{key}' must be a string")))
}

fn elems<F: Field>(field: &F, xs: &[F::Elem]) -> Value {
    Value::Array(xs.iter().map(|x| field.elem_to_json(x)).collect())
}

fn elems_from<F: Field>(field: &F, v: &[Value]) -> Result<Vec<F::Elem>> {
    v.iter().map(|x| field.elem_from_json(x)).collect()
}

pub fn poly_json<F: Field>(p: &Poly<F>) -> Value {
    json!({
        "field": p.field().descriptor(),
        "coeffs": elems(p.field(), p.coeffs()),
        "text": p.to_string(),
    })
}

/// Coefficients are low degree first; `text` is informational.
pub fn poly_from_json<F: ReportField>(v: &Value) -> Result<Poly<F>> {
    let field = F::from_descriptor(get(v, "field")?)?;
    let coeffs = elems_from(&field, get_array(v, "coeffs")?)?;
    Ok(Poly::new(field, coeffs))
}

/// A bare `[[...], ...]` array of rows in `field`.
pub fn rows_from_json<F: Field>(field: &F, v: &Value) -> Result<Matrix<F>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::invalid("matrix must be an array of rows"))?
        .iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(|| Error::invalid("matrix row must be an array"))?;
            elems_from(field, r)
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field.clone(), rows)
}

pub fn rows_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(m.rows().iter().map(|r| elems(m.field(), r)).collect())
}

pub fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    json!({"field": m.field().descriptor(), "rows": rows_json(m)})
}

pub fn matrix_from_json<F: ReportField>(v: &Value) -> Result<Matrix<F>> {
    let field = F::from_descriptor(get(v, "field")?)?;
    rows_from_json(&field, get(v, "rows")?)
}

fn fiber_json<F: Field>(field: &F, fiber: &[FiberPoint<F>]) -> Value {
    Value::Array(
        fiber
            .iter()
            .map(|p| {
                json!({
                    "u": field.elem_to_json(&p.u),
                    "multiplicity": p.multiplicity,
                    "derivative": field.elem_to_json(&p.derivative),
                })
            })
            .collect(),
    )
}

fn fiber_from_json<F: Field>(field: &F, v: &[Value]) -> Result<Vec<FiberPoint<F>>> {
    v.iter()
        .map(|p| {
            Ok(FiberPoint {
                u: field.elem_from_json(get(p, "u")?)?,
                multiplicity: get_usize(p, "multiplicity")?,
                derivative: field.elem_from_json(get(p, "derivative")?)?,
            })
        })
        .collect()
}

pub fn check_json<F: Field>(check: &CriticalCheck<F>) -> Value {
    json!({
        "critical": format!("{:?}", check.verdict).to_lowercase(),
        "field": check.field.descriptor(),
        "fiber": fiber_json(&check.field, &check.fiber),
        "fiber_complete": check.fiber_complete,
    })
}

/// `field` is the field of the polynomial; it labels ambiguous candidates.
pub fn critical_set_json<F: Field>(field: &F, set: &CriticalSet<F>) -> Value {
    match set {
        CriticalSet::Empty => json!({"kind": "empty", "values": []}),
        CriticalSet::All { remark } => json!({"kind": "all", "remark": remark}),
        CriticalSet::Finite {
            values,
            algebraic,
            ambiguous,
        } => {
            let values: Vec<Value> = values
                .iter()
                .map(|v| {
                    json!({
                        "t": v.field.elem_to_json(&v.t),
                        "field": v.field.descriptor(),
                        "witness": check_json(&v.witness),
                    })
                })
                .collect();
            let mut out = Map::new();
            out.insert("kind".into(), json!("finite"));
            out.insert("values".into(), Value::Array(values));
            if !algebraic.is_empty() {
                let alg: Vec<Value> = algebraic
                    .iter()
                    .map(|a| {
                        json!({
                            "minimal_polynomial": poly_json(&a.minimal_polynomial),
                            "approx": a.approx.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                out.insert("algebraic".into(), Value::Array(alg));
            }
            if !ambiguous.is_empty() {
                out.insert("ambiguous".into(), elems(field, ambiguous));
            }
            Value::Object(out)
        }
    }
}

fn witness_json<F: Field>(field: &F, w: &BlockWitness<F>) -> Value {
    json!({
        "t": field.elem_to_json(&w.t),
        "size": w.size,
        "u": field.elem_to_json(&w.u),
        "derivative": field.elem_to_json(&w.derivative),
    })
}

pub fn certificate_json<F: Field>(c: &CriticalBlockCertificate<F>) -> Value {
    json!({
        "t": c.field.elem_to_json(&c.t),
        "size": c.size,
        "field": c.field.descriptor(),
        "fiber": fiber_json(&c.field, &c.fiber),
        "fiber_complete": c.fiber_complete,
    })
}

pub fn certificate_from_json<F: ReportField>(v: &Value) -> Result<CriticalBlockCertificate<F>> {
    let field = F::from_descriptor(get(v, "field")?)?;
    Ok(CriticalBlockCertificate {
        t: field.elem_from_json(get(v, "t")?)?,
        size: get_usize(v, "size")?,
        fiber: fiber_from_json(&field, get_array(v, "fiber")?)?,
        fiber_complete: get_bool(v, "fiber_complete")?,
        field,
    })
}

fn blocks_json<F: Field>(field: &F, blocks: &[JordanBlock<F>]) -> Value {
    Value::Array(
        blocks
            .iter()
            .map(|b| json!({"eigenvalue": field.elem_to_json(&b.eigenvalue), "size": b.size}))
            .collect(),
    )
}

pub fn jordan_json<F: Field>(jd: &JordanDecomposition<F>) -> Value {
    json!({
        "field": jd.field.descriptor(),
        "blocks": blocks_json(&jd.field, &jd.blocks),
        "transform": rows_json(&jd.transform),
    })
}

/// `field` is the field of the target matrix; it labels eigenvalues in
/// `not_in_domain` and `undetermined` outcomes.
pub fn outcome_json<F: Field>(field: &F, o: &SolveOutcome<F>) -> Value {
    match o {
        SolveOutcome::Preimage { x, witnesses } => json!({
            "kind": "preimage",
            "x": matrix_json(x),
            "witnesses": witnesses.iter().map(|w| witness_json(x.field(), w)).collect::<Vec<_>>(),
        }),
        SolveOutcome::NoPreimage(c) => json!({"kind": "no_preimage", "certificate": certificate_json(c)}),
        SolveOutcome::NotInDomain { offending } => json!({
            "kind": "not_in_domain",
            "field": field.descriptor(),
            "offending": elems(field, offending),
        }),
        SolveOutcome::Undetermined { reason, blocks } => json!({
            "kind": "undetermined",
            "reason": reason,
            "field": field.descriptor(),
            "blocks": blocks_json(field, blocks),
        }),
    }
}

pub fn outcome_from_json<F: ReportField>(v: &Value) -> Result<SolveOutcome<F>> {
    match get_str(v, "kind")? {
        "preimage" => {
            let x: Matrix<F> = matrix_from_json(get(v, "x")?)?;
            let field = x.field().clone();
            let witnesses = get_array(v, "witnesses")?
                .iter()
                .map(|w| {
                    Ok(BlockWitness {
                        t: field.elem_from_json(get(w, "t")?)?,
                        size: get_usize(w, "size")?,
                        u: field.elem_from_json(get(w, "u")?)?,
                        derivative: field.elem_from_json(get(w, "derivative")?)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SolveOutcome::Preimage { x, witnesses })
        }
        "no_preimage" => Ok(SolveOutcome::NoPreimage(certificate_from_json(get(v, "certificate")?)?)),
        "not_in_domain" => {
            let field = F::from_descriptor(get(v, "field")?)?;
            Ok(SolveOutcome::NotInDomain {
                offending: elems_from(&field, get_array(v, "offending")?)?,
            })
        }
        "undetermined" => {
            let field = F::from_descriptor(get(v, "field")?)?;
            let blocks = get_array(v, "blocks")?
                .iter()
                .map(|b| {
                    Ok(JordanBlock {
                        eigenvalue: field.elem_from_json(get(b, "eigenvalue")?)?,
                        size: get_usize(b, "size")?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SolveOutcome::Undetermined {
                reason: get_str(v, "reason")?.to_string(),
                blocks,
            })
        }
        other => Err(Error::invalid(format!("unknown outcome kind '{other}'"))),
    }
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Image and critical set of a catalog function.
pub fn entire_json(fun: &EntireFunction) -> Value {
    let image = match fun.image() {
        Image::All => json!({"kind": "all"}),
        Image::Omits(p) => json!({"kind": "omits", "point": c_json(p)}),
    };
    let values: Vec<Value> = fun
        .critical_values()
        .iter()
        .map(|v| json!({"t": c_json(v.t), "reason": v.reason}))
        .collect();
    let kind = if values.is_empty() { "empty" } else { "finite" };
    json!({
        "name": fun.name(),
        "image": image,
        "critical_values": {"kind": kind, "values": values},
        "image_is_full_domain": values.is_empty(),
    })
}

pub fn oracle_critical_json(set: &OracleCriticalSet, ext_bound: u32) -> Value {
    match set {
        OracleCriticalSet::All => json!({"kind": "all", "ext_bound": ext_bound}),
        OracleCriticalSet::Values(vs) => json!({
            "kind": if vs.is_empty() { "empty" } else { "finite" },
            "ext_bound": ext_bound,
            "values": vs.iter().map(|v| json!({"t": v.field.elem_to_json(&v.t), "field": v.field.descriptor()})).collect::<Vec<_>>(),
        }),
    }
}

pub fn oracle_report_json(r: &OracleReport) -> Value {
    let verdict = match &r.verdict {
        OracleVerdict::Found { x, extension } => json!({"kind": "found", "x": matrix_json(x), "extension": extension}),
        OracleVerdict::ExhaustedNoneFound => json!({"kind": "exhausted_none_found"}),
    };
    json!({
        "search_space": {
            "base": r.base.descriptor(),
            "n": r.n,
            "ext_bound": r.ext_bound,
            "searched": r.searched.iter().map(|(e, c)| json!({"extension": e, "candidates": c.to_string()})).collect::<Vec<_>>(),
        },
        "verdict": verdict,
        "candidates_tested": r.candidates_tested.to_string(),
        "elapsed_ms": r.elapsed.as_secs_f64() * 1e3,
    })
}

/// Wraps a body with the schema tag and the command name.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

/// Result of replaying a solve report.
#[derive(Clone, Debug, PartialEq)]
pub struct Replay {
    pub outcome: String,
    pub pass: bool,
    pub residual: Option<f64>,
}

fn replay_poly<F: ReportField>(report: &Value) -> Result<Replay> {
    let f: Poly<F> = poly_from_json(get(report, "poly")?)?;
    let a: Matrix<F> = matrix_from_json(get(report, "matrix")?)?;
    let outcome: SolveOutcome<F> = outcome_from_json(get(report, "outcome")?)?;
    let kind = outcome.kind().to_string();
    let (pass, residual) = match &outcome {
        SolveOutcome::Preimage { x, .. } => {
            let v = verify(&f, x, &a)?;
            (v.pass, Some(v.residual))
        }
        SolveOutcome::NoPreimage(c) => (verify_certificate(&f, c)?, None),
        // other outcomes are replayed by solving again
        _ => (solve(&f, &a)?.kind() == kind, None),
    };
    Ok(Replay {
        outcome: kind,
        pass,
        residual,
    })
}

fn replay_entire(fun: &EntireFunction, report: &Value) -> Result<Replay> {
    let a: Matrix<ComplexField> = matrix_from_json(get(report, "matrix")?)?;
    let outcome: SolveOutcome<ComplexField> = outcome_from_json(get(report, "outcome")?)?;
    let kind = outcome.kind().to_string();
    let (pass, residual) = match &outcome {
        SolveOutcome::Preimage { x, .. } => {
            let v = verify_entire(fun, x, &a)?;
            (v.pass, Some(v.residual))
        }
        SolveOutcome::NoPreimage(c) => (verify_entire_certificate(fun, c), None),
        SolveOutcome::NotInDomain { offending } => {
            let d = in_domain(fun, &a)?;
            (!d.in_domain && d.offending.len() == offending.len(), None)
        }
        SolveOutcome::Undetermined { .. } => (solve_entire(fun, &a)?.kind() == kind, None),
    };
    Ok(Replay {
        outcome: kind,
        pass,
        residual,
    })
}

/// Replays a `solve` report: preimages are re-evaluated, certificates
/// re-checked, and the remaining outcomes recomputed.
pub fn replay(report: &Value) -> Result<Replay> {
    match report.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => {}
        Some(other) => return Err(Error::invalid(format!("unsupported schema '{other}'"))),
        None => return Err(Error::invalid("missing key 'schema'")),
    }
    if let Some(name) = report.get("function").and_then(Value::as_str) {
        return replay_entire(&catalog(name)?, report);
    }
    match backend_of(get(get(report, "matrix")?, "field")?)? {
        Backend::Fq(_) => replay_poly::<FiniteField>(report),
        Backend::Q(_) => replay_poly::<Rationals>(report),
        Backend::C(_) => replay_poly::<ComplexField>(report),
    }
}

/// A complete `solve` report for a polynomial.
pub fn solve_report<F: Field>(f: &Poly<F>, a: &Matrix<F>, o: &SolveOutcome<F>) -> Value {
    envelope(
        "solve",
        json!({
            "backend": a.field().descriptor(),
            "poly": poly_json(f),
            "matrix": matrix_json(a),
            "outcome": outcome_json(a.field(), o),
        }),
    )
}

/// A complete `solve` report for a catalog function.
pub fn solve_entire_report(fun: &EntireFunction, a: &Matrix<ComplexField>, o: &SolveOutcome<ComplexField>) -> Value {
    envelope(
        "solve",
        json!({
            "backend": a.field().descriptor(),
            "function": fun.name(),
            "matrix": matrix_json(a),
            "outcome": outcome_json(a.field(), o),
        }),
    )
}
