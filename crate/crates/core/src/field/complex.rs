use std::cmp::Ordering;

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive};
use serde_json::Value;

use super::Field;
use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-8;

/// Double-precision complex numbers with a relative tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexField {
    eps: f64,
}

impl Default for ComplexField {
    fn default() -> Self {
        ComplexField { eps: DEFAULT_EPS }
    }
}

impl ComplexField {
    /// `eps` must lie in `(0, 1e-4]`.
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1e-4) {
            return Err(Error::invalid(format!(
                "complex tolerance {eps} outside (0, 1e-4]"
            )));
        }
        Ok(ComplexField { eps })
    }

    pub fn tolerance(&self) -> f64 {
        self.eps
    }
}

impl Field for ComplexField {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn from_bigint(&self, n: &BigInt) -> Complex64 {
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_rational(&self, r: &BigRational) -> Result<Complex64> {
        Ok(Complex64::new(super::rational::to_f64(r), 0.0))
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Result<Complex64> {
        if a.norm() == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.inv())
        }
    }
    fn pow(&self, a: &Complex64, e: u64) -> Complex64 {
        let mut acc = self.one();
        let mut base = *a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }
    fn approx_eq(&self, a: &Complex64, b: &Complex64) -> bool {
        let scale = 1f64.max(a.norm()).max(b.norm());
        (a - b).norm() <= self.eps * scale
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn magnitude(&self, a: &Complex64) -> f64 {
        a.norm()
    }
    fn eps(&self) -> f64 {
        self.eps
    }
    fn canonical_cmp(&self, a: &Complex64, b: &Complex64) -> Ordering {
        a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
    }
    fn describe(&self) -> String {
        format!("C(eps={:e})", self.eps)
    }
    fn format_elem(&self, a: &Complex64) -> String {
        if a.im == 0.0 {
            format!("{}", a.re)
        } else if a.im < 0.0 {
            format!("{}-{}i", a.re, -a.im)
        } else {
            format!("{}+{}i", a.re, a.im)
        }
    }
    fn elem_to_json(&self, a: &Complex64) -> Value {
        serde_json::json!([a.re, a.im])
    }
    fn elem_from_json(&self, v: &Value) -> Result<Complex64> {
        let num = |v: &Value| -> Result<f64> {
            match v {
                Value::Number(n) => n
                    .as_f64()
                    .ok_or_else(|| Error::invalid("non-finite number")),
                Value::String(s) => super::rational::parse_rational(s)
                    .map(|r| super::rational::to_f64(&r)),
                other => Err(Error::invalid(format!("expected number, got {other}"))),
            }
        };
        match v {
            Value::Array(pair) if pair.len() == 2 => {
                Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?))
            }
            Value::Number(_) | Value::String(_) => Ok(Complex64::new(num(v)?, 0.0)),
            other => Err(Error::invalid(format!(
                "expected [re, im] pair, got {other}"
            ))),
        }
    }
    fn descriptor(&self) -> Value {
        serde_json::json!({"kind": "C", "eps": self.eps})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_bounds_are_enforced() {
        assert!(ComplexField::new(1e-3).is_err());
        assert!(ComplexField::new(0.0).is_err());
        assert!(ComplexField::new(1e-10).is_ok());
    }

    #[test]
    fn approx_eq_is_relative() {
        let c = ComplexField::default();
        let big = Complex64::new(1e6, 0.0);
        assert!(c.approx_eq(&big, &(big + Complex64::new(1e-3, 0.0))));
        assert!(!c.approx_eq(&Complex64::new(1.0, 0.0), &Complex64::new(1.0 + 1e-6, 0.0)));
        let a = Complex64::new(0.3, -0.2);
        assert!(c.approx_eq(&a, &a));
    }

    #[test]
    fn json_pairs() {
        let c = ComplexField::default();
        let z = Complex64::new(1.5, -2.0);
        assert_eq!(c.elem_from_json(&c.elem_to_json(&z)).unwrap(), z);
        assert_eq!(c.elem_from_json(&serde_json::json!(3)).unwrap(), Complex64::new(3.0, 0.0));
    }
}
