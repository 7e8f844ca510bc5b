//! Number fields `Q[a]/(m)`, used to run the critical-value test at
//! algebraic values exactly.
//!
//! The modulus only has to be squarefree. If it factors, some nonzero
//! element is a zero divisor; inverting it fails with
//! [`Error::ZeroDivisor`] carrying a proper factor, and
//! [`split_on_zero_divisors`] restarts the computation on both factors.
//! Whatever finishes without such an error holds at every root of the
//! modulus it ran under.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};
use serde_json::Value;

use super::rational::rational_key;
use super::{Field, Rationals};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone)]
pub struct NumberField {
    modulus: Arc<Poly<Rationals>>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl NumberField {
    /// `modulus` must be nonconstant and squarefree; it is made monic.
    pub fn new(modulus: &Poly<Rationals>) -> Result<Self> {
        match modulus.degree() {
            None | Some(0) => return Err(Error::invalid("number field modulus must be nonconstant")),
            _ => {}
        }
        if modulus.gcd(&modulus.derivative())?.degree() != Some(0) {
            return Err(Error::invalid("number field modulus must be squarefree"));
        }
        Ok(NumberField {
            modulus: Arc::new(modulus.monic()?),
        })
    }

    pub fn modulus(&self) -> &Poly<Rationals> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonconstant")
    }

    /// The class of the indeterminate, a root of the modulus.
    pub fn generator(&self) -> Vec<BigRational> {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_poly(&self, p: &Poly<Rationals>) -> Vec<BigRational> {
        self.reduce(p.coeffs().to_vec())
    }

    pub fn to_poly(&self, a: &[BigRational]) -> Poly<Rationals> {
        Poly::new(Rationals, a.to_vec())
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let m = self.modulus.coeffs();
        let d = m.len() - 1;
        while c.len() > d {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for (i, mi) in m[..d].iter().enumerate() {
                c[base + i] -= &top * mi;
            }
        }
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        c
    }
}

/// Runs `op` in `Q[a]/(modulus)`, splitting the modulus at every zero
/// divisor met. Returns the final factors with their results, factors
/// ordered by degree then coefficients.
pub fn split_on_zero_divisors<T>(
    modulus: &Poly<Rationals>,
    mut op: impl FnMut(&NumberField) -> Result<T>,
) -> Result<Vec<(Poly<Rationals>, T)>> {
    let mut pending = vec![modulus.monic()?];
    let mut done = Vec::new();
    while let Some(m) = pending.pop() {
        let k = NumberField::new(&m)?;
        match op(&k) {
            Ok(v) => done.push((m, v)),
            Err(Error::ZeroDivisor(factor)) => {
                let g = Poly::new(Rationals, factor).monic()?;
                let h = m.exact_div(&g)?.monic()?;
                pending.push(g);
                pending.push(h);
            }
            Err(e) => return Err(e),
        }
    }
    done.sort_by(|a, b| {
        a.0.coeffs()
            .len()
            .cmp(&b.0.coeffs().len())
            .then_with(|| cmp_coeffs(a.0.coeffs(), b.0.coeffs()))
    });
    Ok(done)
}

fn cmp_coeffs(a: &[BigRational], b: &[BigRational]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .rev()
            .zip(b.iter().rev())
            .map(|(x, y)| rational_key(x).cmp(&rational_key(y)))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}

impl Field for NumberField {
    type Elem = Vec<BigRational>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        self.reduce(vec![BigRational::one()])
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.reduce(vec![BigRational::from_integer(n.into())])
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.reduce(vec![BigRational::from_integer(n.clone())])
    }
    fn from_rational(&self, r: &BigRational) -> Result<Self::Elem> {
        Ok(self.reduce(vec![r.clone()]))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.len().max(b.len());
        let z = BigRational::zero();
        let c = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
        self.reduce(c)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        self.reduce(c)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| -x).collect()
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.to_poly(a).ext_gcd(&self.modulus)?;
        if g.degree() != Some(0) {
            return Err(Error::ZeroDivisor(g.into_coeffs()));
        }
        Ok(self.reduce(s.into_coeffs()))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn approx_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn magnitude(&self, a: &Self::Elem) -> f64 {
        if a.is_empty() {
            0.0
        } else {
            1.0
        }
    }
    fn canonical_cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        cmp_coeffs(a, b)
    }
    fn describe(&self) -> String {
        format!("Q[a]/({})", format_in(self.modulus.coeffs(), 'a'))
    }
    fn format_elem(&self, a: &Self::Elem) -> String {
        format_in(a, 'a')
    }
    fn elem_to_json(&self, a: &Self::Elem) -> Value {
        Value::String(self.format_elem(a))
    }
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem> {
        match v {
            Value::String(s) => Ok(self.reduce(crate::parse::parse_terms(s, 'a')?)),
            Value::Number(_) => Ok(self.reduce(vec![Rationals.elem_from_json(v)?])),
            other => Err(Error::invalid(format!("expected number field element, got {other}"))),
        }
    }
    fn descriptor(&self) -> Value {
        serde_json::json!({
            "kind": "NumberField",
            "modulus": self.modulus.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Polynomial with rational coefficients in variable `var`, highest
/// degree first.
pub(crate) fn format_in(c: &[BigRational], var: char) -> String {
    let mut out = String::new();
    for (i, x) in c.iter().enumerate().rev() {
        if x.is_zero() {
            continue;
        }
        let neg = x < &BigRational::zero();
        let abs = if neg { -x } else { x.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if abs.is_one() && i > 0 {
            String::new()
        } else if abs.is_integer() || i == 0 {
            abs.to_string()
        } else {
            format!("({abs})")
        };
        out.push_str(&coef);
        match i {
            0 => {}
            1 => out.push(var),
            _ => out.push_str(&format!("{var}^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_ints(Rationals, coeffs)
    }

    #[test]
    fn sqrt_two_squares_to_two() {
        let k = NumberField::new(&q(&[-2, 0, 1])).unwrap();
        let a = k.generator();
        assert_eq!(k.mul(&a, &a), k.from_int(2));
        let inv = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), k.one());
    }

    #[test]
    fn zero_divisor_reports_factor() {
        // x^2 - 1 = (x - 1)(x + 1); a - 1 is a zero divisor
        let k = NumberField::new(&q(&[-1, 0, 1])).unwrap();
        let z = k.sub(&k.generator(), &k.one());
        match k.inv(&z) {
            Err(Error::ZeroDivisor(f)) => assert_eq!(Poly::new(Rationals, f), q(&[-1, 1])),
            other => panic!("expected zero divisor, got {other:?}"),
        }
    }

    #[test]
    fn splitting_driver_separates_roots() {
        // is a == 1? decided per factor of x^2 - 1
        let parts = split_on_zero_divisors(&q(&[-1, 0, 1]), |k| {
            let z = k.sub(&k.generator(), &k.one());
            if z.is_empty() {
                return Ok(true);
            }
            k.inv(&z)?;
            Ok(false)
        })
        .unwrap();
        let summary: Vec<(String, bool)> = parts.iter().map(|(m, v)| (m.to_string(), *v)).collect();
        assert_eq!(summary, vec![("x + 1".to_string(), false), ("x - 1".to_string(), true)]);
    }

    #[test]
    fn rejects_non_squarefree_modulus() {
        assert!(NumberField::new(&q(&[1, 2, 1])).is_err());
    }

    #[test]
    fn formats_elements() {
        let k = NumberField::new(&q(&[-2, 0, 0, 1])).unwrap();
        let e = k.reduce(vec![BigRational::new(1.into(), 2.into()), k.from_int(-1)[0].clone(), k.from_int(3)[0].clone()]);
        assert_eq!(k.format_elem(&e), "3a^2 - a + 1/2");
        assert_eq!(k.elem_from_json(&k.elem_to_json(&e)).unwrap(), e);
    }
}
