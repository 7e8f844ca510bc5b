//! Dense univariate polynomials over any backend.

mod resultant;
mod roots;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{ensure_same, Field};

pub use resultant::{critical_resultant, resultant};
pub use roots::{
    aberth_roots, cluster_roots, complex_roots, polish_cluster, rational_roots, scan_roots, Root, RootMultiset,
    ABERTH_MAX_ITERATIONS,
};

/// Coefficients low degree first; the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field.describe(), self)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let s = self.field.format_elem(c);
            let negated = !first && s.starts_with('-') && !s[1..].contains(['+', '-']);
            let s = if negated { s[1..].to_string() } else { s };
            if !first {
                write!(f, "{}", if negated { " - " } else { " + " })?;
            }
            first = false;
            let s = if s.contains(['+', '-']) && i > 0 { format!("({s})") } else { s };
            match i {
                0 => write!(f, "{s}")?,
                1 if self.field.is_one(c) => write!(f, "x")?,
                1 => write!(f, "{s}*x")?,
                _ if self.field.is_one(c) => write!(f, "x^{i}")?,
                _ => write!(f, "{s}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, coeffs: Vec<F::Elem>) -> Self {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: F) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    /// The indeterminate `x`.
    pub fn x(field: F) -> Self {
        let coeffs = vec![field.zero(), field.one()];
        Poly::new(field, coeffs)
    }

    pub fn from_ints(field: F, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|n| field.from_int(*n)).collect();
        Poly::new(field, c)
    }

    /// `x - a`
    pub fn linear_root(field: F, a: &F::Elem) -> Self {
        let coeffs = vec![field.neg(a), field.one()];
        Poly::new(field, coeffs)
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if self.field.is_zero(c) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Coefficient `i` becomes `(i+1) * c_{i+1}`, with the integer mapped
    /// into the backend.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_int(i as i64), c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Ok(Poly::new(f.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect();
        Ok(Poly::new(f.clone(), coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.field, &other.field)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(f.clone()));
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Ok(Poly::new(f.clone(), out))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        Poly::new(self.field.clone(), coeffs)
    }

    /// `self - t`
    pub fn sub_constant(&self, t: &F::Elem) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(self.field.zero());
        }
        coeffs[0] = self.field.sub(&coeffs[0], t);
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut acc = Poly::constant(self.field.clone(), self.field.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        ensure_same(&self.field, &d.field)?;
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(d.leading().expect("nonzero"))?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f.clone()), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(&rem[k], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, dc));
            }
            // the leading term cancels exactly in exact arithmetic; force it
            rem[k] = f.zero();
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(f.clone(), quot), Poly::new(f.clone(), rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient when `d` divides exactly.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::invalid("polynomial division is not exact"));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<Self> {
        match self.leading() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&self.field.inv(l)?)),
        }
    }

    fn require_exact(&self) -> Result<()> {
        if self.field.is_exact() {
            Ok(())
        } else {
            Err(Error::UnsupportedBackend(self.field.describe()))
        }
    }

    /// Monic greatest common divisor; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.require_exact()?;
        ensure_same(&self.field, &other.field)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.require_exact()?;
        ensure_same(&self.field, &other.field)?;
        let f = self.field.clone();
        let one = Poly::constant(f.clone(), f.one());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), Poly::zero(f.clone()));
        let (mut t0, mut t1) = (Poly::zero(f.clone()), one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1)?)?;
            let t = t0.sub(&q.mul(&t1)?)?;
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => Ok((r0, s0, t0)),
            Some(l) => {
                let li = f.inv(&l)?;
                Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
            }
        }
    }

    /// Squarefree part in characteristic 0: `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.field.characteristic() != 0 {
            return Err(Error::UnsupportedBackend(self.field.describe()));
        }
        let g = self.gcd(&self.derivative())?;
        self.exact_div(&g)?.monic()
    }

    /// Maps every coefficient into another field.
    pub fn map_into<G: Field>(
        &self,
        target: &G,
        mut map: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<Poly<G>> {
        let coeffs = self.coeffs.iter().map(&mut map).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(target.clone(), coeffs))
    }
}

/// True iff `g` divides `h^n`.
///
/// Repeatedly strips `gcd(g, h)` from `g`. After `k` rounds a root of
/// multiplicity `m_g` in `g` and `m_h` in `h` keeps multiplicity
/// `max(0, m_g - k*m_h)`, so reaching a constant within `n` rounds is exactly
/// divisibility of `h^n`. For `n >= deg g` this is "every root of `g` is a
/// root of `h`". The power `h^n` is never formed.
pub fn divides_power<F: Field>(g: &Poly<F>, h: &Poly<F>, n: u32) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut g = g.clone();
    for _ in 0..n {
        if g.degree() == Some(0) {
            return Ok(true);
        }
        let d = g.gcd(h)?;
        if d.degree() == Some(0) {
            return Ok(false);
        }
        g = g.exact_div(&d)?;
    }
    Ok(g.degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Rationals};
    use num::BigRational;

    fn q(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_ints(Rationals, coeffs)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(q(&[0, -3, 0, 1]).derivative(), q(&[-3, 0, 3]));
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(
            Poly::from_ints(f2.clone(), &[0, 1, 0, 0, 1]).derivative(),
            Poly::from_ints(f2.clone(), &[1])
        );
        let f5 = FiniteField::prime(5).unwrap();
        assert!(Poly::from_ints(f5, &[0, 0, 0, 0, 0, 1]).derivative().is_zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(q(&[-1, 0, 1]).gcd(&q(&[-1, 0, 0, 1])).unwrap(), q(&[-1, 1]));
        let f = q(&[2, 0, 4]);
        assert_eq!(f.gcd(&Poly::zero(Rationals)).unwrap(), f.monic().unwrap());
        let f2 = FiniteField::prime(2).unwrap();
        let a = Poly::from_ints(f2.clone(), &[1, 0, 1]);
        let b = Poly::from_ints(f2.clone(), &[1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn gcd_rejects_complex() {
        let c = crate::field::ComplexField::default();
        let p = Poly::from_ints(c, &[1, 1]);
        assert!(matches!(p.gcd(&p), Err(Error::UnsupportedBackend(_))));
    }

    #[test]
    fn divides_power_examples() {
        assert!(divides_power(&q(&[0, 0, 1]), &q(&[0, 2]), 2).unwrap());
        assert!(!divides_power(&q(&[-2, -3, 0, 1]), &q(&[-3, 0, 3]), 3).unwrap());
        let f2 = FiniteField::prime(2).unwrap();
        let g = Poly::from_ints(f2.clone(), &[1, 0, 1]);
        let h = Poly::from_ints(f2, &[1, 1]);
        assert!(divides_power(&g, &h, 2).unwrap());
        assert_eq!(divides_power(&Poly::zero(Rationals), &q(&[1]), 1), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn divides_power_respects_exponent() {
        // x^3 | x^2 ^ n  iff  n >= 2
        let g = q(&[0, 0, 0, 1]);
        let h = q(&[0, 0, 1]);
        assert!(!divides_power(&g, &h, 1).unwrap());
        assert!(divides_power(&g, &h, 2).unwrap());
    }

    #[test]
    fn eval_examples() {
        let f = q(&[0, -3, 0, 1]);
        let one = BigRational::from_integer(1.into());
        assert_eq!(f.eval(&one), BigRational::from_integer((-2).into()));
        assert_eq!(f.eval(&-one.clone()), BigRational::from_integer(2.into()));
        assert_eq!(Poly::zero(Rationals).eval(&one), BigRational::from_integer(0.into()));
    }

    #[test]
    fn mixing_fields_is_rejected() {
        let a = Poly::from_ints(FiniteField::prime(2).unwrap(), &[1, 1]);
        let b = Poly::from_ints(FiniteField::prime(3).unwrap(), &[1, 1]);
        assert!(matches!(a.add(&b), Err(Error::BackendMismatch { .. })));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = q(&[-1, 0, 1]);
        let b = q(&[2, 1]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(g, q(&[1]));
        assert_eq!(s.mul(&a).unwrap().add(&t.mul(&b).unwrap()).unwrap(), g);
    }
}
