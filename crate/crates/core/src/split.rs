//! Root finding uniformly across backends, moving into extension fields
//! where the backend allows it.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Embedding, Field, FiniteField, Rationals};
use crate::matrix::Matrix;
use crate::poly::{complex_roots, polish_cluster, rational_roots, scan_roots, Poly};

/// Roots of a polynomial, all expressed in one field.
#[derive(Clone, Debug)]
pub struct Split<F: Field> {
    pub field: F,
    pub roots: Vec<(F::Elem, usize)>,
    pub degree: usize,
}

impl<F: Field> Split<F> {
    pub fn is_complete(&self) -> bool {
        self.roots.iter().map(|r| r.1).sum::<usize>() == self.degree
    }
}

pub trait SplitField: Field {
    /// Roots of `f` with multiplicities, in a field containing all of them
    /// (for finite fields, searching extensions of degree at most `bound`).
    /// May be incomplete when the backend cannot reach every root.
    fn split(f: &Poly<Self>, bound: u32) -> Result<Split<Self>>;

    /// Eigenvalues from a characteristic polynomial of an `n x n` matrix
    /// with norm `norm`. Fails unless the polynomial splits.
    fn split_eigen(chi: &Poly<Self>, n: usize, norm: f64) -> Result<Split<Self>> {
        let _ = norm;
        let s = Self::split(chi, n as u32)?;
        if s.is_complete() {
            Ok(s)
        } else {
            Err(Error::EigenvaluesNotSplit)
        }
    }

    /// Smallest field containing both.
    fn join(&self, other: &Self) -> Result<Self>;

    /// Canonical embedding of elements into `target`, which must contain
    /// this field.
    fn lift_all(&self, target: &Self, xs: &[Self::Elem]) -> Result<Vec<Self::Elem>>;

    fn lift(&self, target: &Self, x: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.lift_all(target, std::slice::from_ref(x))?.remove(0))
    }
}

pub fn lift_poly<F: SplitField>(p: &Poly<F>, target: &F) -> Result<Poly<F>> {
    if p.field() == target {
        return Ok(p.clone());
    }
    let coeffs = p.field().lift_all(target, p.coeffs())?;
    Ok(Poly::new(target.clone(), coeffs))
}

pub fn lift_matrix<F: SplitField>(m: &Matrix<F>, target: &F) -> Result<Matrix<F>> {
    if m.field() == target {
        return Ok(m.clone());
    }
    let rows = m
        .rows()
        .iter()
        .map(|r| m.field().lift_all(target, r))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(target.clone(), rows)
}

impl SplitField for FiniteField {
    fn split(f: &Poly<Self>, bound: u32) -> Result<Split<Self>> {
        let found = scan_roots(f, bound)?;
        let mut field = f.field().clone();
        for r in &found.roots {
            field = field.join(&r.field)?;
        }
        let mut roots = Vec::with_capacity(found.roots.len());
        for r in &found.roots {
            roots.push((r.field.lift(&field, &r.value)?, r.multiplicity));
        }
        Ok(Split {
            field,
            roots,
            degree: found.degree,
        })
    }

    fn join(&self, other: &Self) -> Result<Self> {
        self.compositum(other)
    }

    fn lift_all(&self, target: &Self, xs: &[u64]) -> Result<Vec<u64>> {
        if self == target {
            return Ok(xs.to_vec());
        }
        let e = Embedding::new(self, target)?;
        Ok(xs.iter().map(|x| e.apply(*x)).collect())
    }
}

impl SplitField for Rationals {
    fn split(f: &Poly<Self>, _bound: u32) -> Result<Split<Self>> {
        let found = rational_roots(f)?;
        Ok(Split {
            field: Rationals,
            roots: found.roots.into_iter().map(|r| (r.value, r.multiplicity)).collect(),
            degree: found.degree,
        })
    }

    fn join(&self, _other: &Self) -> Result<Self> {
        Ok(Rationals)
    }

    fn lift_all(&self, _target: &Self, xs: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        Ok(xs.to_vec())
    }
}

impl SplitField for ComplexField {
    fn split(f: &Poly<Self>, _bound: u32) -> Result<Split<Self>> {
        let found = complex_roots(f)?;
        Ok(Split {
            field: *f.field(),
            roots: found.roots.into_iter().map(|r| (r.value, r.multiplicity)).collect(),
            degree: found.degree,
        })
    }

    /// Eigenvalues closer than `n * eps^(1/2) * max(1, ||A||)` are merged
    /// into their centroid before any rank decision.
    fn split_eigen(chi: &Poly<Self>, n: usize, norm: f64) -> Result<Split<Self>> {
        let field = *chi.field();
        let raw = crate::poly::aberth_roots(chi)?;
        let radius = n as f64 * field.tolerance().sqrt() * norm.max(1.0);
        let clusters = cluster_absolute(&raw, radius)
            .into_iter()
            .map(|(z, m)| (polish_cluster(chi, z, m, radius), m))
            .collect();
        Ok(Split {
            field,
            roots: clusters,
            degree: raw.len(),
        })
    }

    fn join(&self, other: &Self) -> Result<Self> {
        crate::field::ensure_same(self, other)?;
        Ok(*self)
    }

    fn lift_all(&self, target: &Self, xs: &[Complex64]) -> Result<Vec<Complex64>> {
        crate::field::ensure_same(self, target)?;
        Ok(xs.to_vec())
    }
}

fn cluster_absolute(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if (points[i] - points[j]).norm() <= radius && label[j] != label[i] {
                let (from, to) = (label[j], label[i]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..n {
        if seen.contains(&label[i]) {
            continue;
        }
        seen.push(label[i]);
        let members: Vec<Complex64> = (0..n).filter(|&j| label[j] == label[i]).map(|j| points[j]).collect();
        let sum: Complex64 = members.iter().sum();
        out.push((sum / members.len() as f64, members.len()));
    }
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_split_lands_in_compositum() {
        let f2 = FiniteField::prime(2).unwrap();
        // (x^2+x+1)(x^3+x+1)
        let f = Poly::from_ints(f2.clone(), &[1, 0, 0, 0, 1, 1]);
        let s = FiniteField::split(&f, 3).unwrap();
        assert!(s.is_complete());
        assert_eq!(s.field.degree(), 6);
        let lifted = lift_poly(&f, &s.field).unwrap();
        for (r, _) in &s.roots {
            assert_eq!(lifted.eval(r), 0);
        }
    }

    #[test]
    fn rational_split_can_be_incomplete() {
        let f = Poly::from_ints(Rationals, &[-2, 0, 1]);
        let s = Rationals::split(&f, 2).unwrap();
        assert!(!s.is_complete());
        let chi = Poly::from_ints(Rationals, &[-2, 0, 1]);
        assert_eq!(Rationals::split_eigen(&chi, 2, 1.0).unwrap_err(), Error::EigenvaluesNotSplit);
    }

    #[test]
    fn complex_eigen_clusters_double_root() {
        let c = ComplexField::default();
        let chi = Poly::from_ints(c, &[1, -2, 1]);
        let s = ComplexField::split_eigen(&chi, 2, 1.0).unwrap();
        assert_eq!(s.roots.len(), 1);
        assert_eq!(s.roots[0].1, 2);
    }
}
