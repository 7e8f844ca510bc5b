use std::cmp::Ordering;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::Field;
use crate::error::{Error, Result};

/// The rationals with exact big-integer fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// Canonical ordering key: height `max(|num|, den)`, then denominator,
/// then `|num|`, positives before negatives. Small, simple values come first,
/// so `1` precedes `-1`.
pub fn rational_key(r: &BigRational) -> (BigInt, BigInt, BigInt, bool) {
    let num = r.numer().abs();
    let den = r.denom().clone();
    let height = if num > den { num.clone() } else { den.clone() };
    (height, den, num, r.is_negative())
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse {
        position: 0,
        message: format!("not a rational number: '{s}'"),
    };
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.chars().all(|c| c.is_ascii_digit()) && !t.contains('/') {
            let digits = format!("{int}{frac}");
            let n = BigInt::from_str(&digits).map_err(|_| bad())?;
            let d = num::pow(BigInt::from(10), frac.len());
            return Ok(BigRational::new(n, d));
        }
    }
    BigRational::from_str(t).map_err(|_| bad())
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, r: &BigRational) -> Result<BigRational> {
        Ok(r.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn approx_eq(&self, a: &BigRational, b: &BigRational) -> bool {
        a == b
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn magnitude(&self, a: &BigRational) -> f64 {
        if a.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn canonical_cmp(&self, a: &BigRational, b: &BigRational) -> Ordering {
        rational_key(a).cmp(&rational_key(b))
    }
    fn describe(&self) -> String {
        "Q".into()
    }
    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn elem_to_json(&self, a: &BigRational) -> Value {
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(self.from_int(i))
                } else {
                    parse_rational(&n.to_string())
                }
            }
            other => Err(Error::invalid(format!("expected rational, got {other}"))),
        }
    }
    fn descriptor(&self) -> Value {
        serde_json::json!({"kind": "Q"})
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
