//! Scalar backends.
//!
//! A [`Field`] is a context object that owns the arithmetic; elements are
//! plain values interpreted relative to it. Matrices and polynomials carry
//! their field so that mixing backends is caught at run time.

mod backend;
mod complex;
mod finite;
mod number;
mod rational;

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational};
use serde_json::Value;

use crate::error::Result;

pub use backend::{arith, ArithOp, Backend, BackendDescriptor, FieldElement};
pub use complex::{ComplexField, DEFAULT_EPS};
pub use finite::{Embedding, FiniteField, SCAN_LIMIT};
pub use number::{split_on_zero_divisors, NumberField};
pub use rational::{rational_key, Rationals};

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// Maps a rational into the field; fails when the denominator vanishes
    /// (characteristic divides it).
    fn from_rational(&self, r: &BigRational) -> Result<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Binomial coefficient `C(m, d)` mapped into the field.
    fn binomial(&self, m: u64, d: u64) -> Self::Elem {
        self.from_bigint(&exact_binomial(m, d))
    }

    /// Structural zero test. For floating point this is exact `== 0`;
    /// tolerance-based decisions go through [`Field::approx_eq`] or
    /// [`Field::magnitude`].
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Exact equality on exact backends, `|a-b| <= eps*max(1,|a|,|b|)` on
    /// floating point. Reflexive and symmetric, not transitive.
    fn approx_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn is_exact(&self) -> bool;
    fn characteristic(&self) -> u64;

    /// Pivoting weight. Exact backends report 0 or 1.
    fn magnitude(&self, a: &Self::Elem) -> f64;

    /// Relative tolerance of a floating backend, 0 for exact ones.
    fn eps(&self) -> f64 {
        0.0
    }

    /// Total order on canonical encodings, used wherever a reproducible
    /// choice between elements is needed.
    fn canonical_cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    fn describe(&self) -> String;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
    /// JSON backend descriptor.
    fn descriptor(&self) -> Value;

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.approx_eq(a, &self.one())
    }
}

pub(crate) fn exact_binomial(m: u64, d: u64) -> BigInt {
    if d > m {
        return BigInt::from(0);
    }
    let d = d.min(m - d);
    let mut acc = BigInt::from(1);
    for i in 0..d {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn mismatch<F: Field>(left: &F, right: &F) -> crate::Error {
    crate::Error::BackendMismatch {
        left: left.describe(),
        right: right.describe(),
    }
}

/// Fails with `BackendMismatch` unless both fields are identical.
pub(crate) fn ensure_same<F: Field>(left: &F, right: &F) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(mismatch(left, right))
    }
}
