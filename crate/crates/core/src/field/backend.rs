//! Run-time backend selection and dynamically typed scalars.

use std::str::FromStr;

use num::complex::Complex64;
use num::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ComplexField, Embedding, Field, FiniteField, Rationals, DEFAULT_EPS};
use crate::error::{Error, Result};

fn one() -> u32 {
    1
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

/// Serialized backend choice: `{"kind":"Fq","p":2,"m":2}`, `{"kind":"Q"}`,
/// `{"kind":"C","eps":1e-8}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BackendDescriptor {
    Fq {
        p: u64,
        #[serde(default = "one")]
        m: u32,
    },
    Q,
    C {
        #[serde(default = "default_eps")]
        eps: f64,
    },
}

/// Accepts JSON descriptors and the shorthands `Q`, `C`, `F5`, `F2^4`.
impl FromStr for BackendDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::Parse {
                position: e.column().saturating_sub(1),
                message: e.to_string(),
            });
        }
        let bad = || Error::invalid(format!("unknown backend '{s}'"));
        match t {
            "Q" | "q" => Ok(BackendDescriptor::Q),
            "C" | "c" => Ok(BackendDescriptor::C { eps: DEFAULT_EPS }),
            _ => {
                let rest = t.strip_prefix(['F', 'f']).ok_or_else(bad)?;
                let (p, m) = match rest.split_once('^') {
                    Some((p, m)) => (p, m.parse().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                Ok(BackendDescriptor::Fq {
                    p: p.parse().map_err(|_| bad())?,
                    m,
                })
            }
        }
    }
}

/// A validated backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    Fq(FiniteField),
    Q(Rationals),
    C(ComplexField),
}

impl Backend {
    pub fn from_descriptor(d: &BackendDescriptor) -> Result<Self> {
        Ok(match *d {
            BackendDescriptor::Fq { p, m } => Backend::Fq(FiniteField::new(p, m)?),
            BackendDescriptor::Q => Backend::Q(Rationals),
            BackendDescriptor::C { eps } => Backend::C(ComplexField::new(eps)?),
        })
    }

    pub fn descriptor(&self) -> BackendDescriptor {
        match self {
            Backend::Fq(f) => BackendDescriptor::Fq {
                p: f.characteristic_prime(),
                m: f.degree(),
            },
            Backend::Q(_) => BackendDescriptor::Q,
            Backend::C(c) => BackendDescriptor::C { eps: c.tolerance() },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Backend::Fq(f) => f.describe(),
            Backend::Q(f) => f.describe(),
            Backend::C(f) => f.describe(),
        }
    }

    /// Degree-`m` extension with its embedding; finite fields only.
    pub fn extend(&self, m: u32) -> Result<(Backend, Embedding)> {
        match self {
            Backend::Fq(f) => {
                if m == 0 {
                    return Err(Error::invalid("extension degree must be at least 1"));
                }
                let (g, e) = f.extend(m)?;
                Ok((Backend::Fq(g), e))
            }
            other => Err(Error::UnsupportedBackend(other.describe())),
        }
    }

    pub fn parse_elem(&self, v: &Value) -> Result<FieldElement> {
        Ok(match self {
            Backend::Fq(f) => FieldElement::Fq(f.clone(), f.elem_from_json(v)?),
            Backend::Q(f) => FieldElement::Q(f.elem_from_json(v)?),
            Backend::C(f) => FieldElement::C(*f, f.elem_from_json(v)?),
        })
    }
}

/// A scalar tagged with its backend.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldElement {
    Fq(FiniteField, u64),
    Q(BigRational),
    C(ComplexField, Complex64),
}

impl FieldElement {
    pub fn backend(&self) -> Backend {
        match self {
            FieldElement::Fq(f, _) => Backend::Fq(f.clone()),
            FieldElement::Q(_) => Backend::Q(Rationals),
            FieldElement::C(c, _) => Backend::C(*c),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FieldElement::Fq(f, x) => f.elem_to_json(x),
            FieldElement::Q(x) => Rationals.elem_to_json(x),
            FieldElement::C(c, x) => c.elem_to_json(x),
        }
    }

    /// Equality under the backend's notion (tolerance for complex).
    pub fn approx_eq(&self, other: &FieldElement) -> bool {
        match (self, other) {
            (FieldElement::Fq(f, a), FieldElement::Fq(g, b)) => f == g && a == b,
            (FieldElement::Q(a), FieldElement::Q(b)) => a == b,
            (FieldElement::C(c, a), FieldElement::C(d, b)) => c == d && c.approx_eq(a, b),
            _ => false,
        }
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldElement::Fq(k, x) => write!(f, "{}", k.format_elem(x)),
            FieldElement::Q(x) => write!(f, "{}", Rationals.format_elem(x)),
            FieldElement::C(c, x) => write!(f, "{}", c.format_elem(x)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

fn apply<F: Field>(field: &F, op: ArithOp, a: &F::Elem, b: Option<&F::Elem>) -> Result<F::Elem> {
    let rhs = || b.ok_or_else(|| Error::invalid(format!("{op:?} needs two operands")));
    Ok(match op {
        ArithOp::Add => field.add(a, rhs()?),
        ArithOp::Sub => field.sub(a, rhs()?),
        ArithOp::Mul => field.mul(a, rhs()?),
        ArithOp::Div => field.div(a, rhs()?)?,
        ArithOp::Neg => field.neg(a),
        ArithOp::Inv => field.inv(a)?,
        ArithOp::Pow(e) => field.pow(a, e),
    })
}

/// One field operation on tagged scalars; operands must share a backend.
pub fn arith(op: ArithOp, a: &FieldElement, b: Option<&FieldElement>) -> Result<FieldElement> {
    let mismatch = |b: &FieldElement| Error::BackendMismatch {
        left: a.backend().describe(),
        right: b.backend().describe(),
    };
    match a {
        FieldElement::Fq(f, x) => {
            let y = match b {
                None => None,
                Some(FieldElement::Fq(g, y)) if g == f => Some(y),
                Some(other) => return Err(mismatch(other)),
            };
            Ok(FieldElement::Fq(f.clone(), apply(f, op, x, y)?))
        }
        FieldElement::Q(x) => {
            let y = match b {
                None => None,
                Some(FieldElement::Q(y)) => Some(y),
                Some(other) => return Err(mismatch(other)),
            };
            Ok(FieldElement::Q(apply(&Rationals, op, x, y)?))
        }
        FieldElement::C(c, x) => {
            let y = match b {
                None => None,
                Some(FieldElement::C(d, y)) if d == c => Some(y),
                Some(other) => return Err(mismatch(other)),
            };
            Ok(FieldElement::C(*c, apply(c, op, x, y)?))
        }
    }
}
