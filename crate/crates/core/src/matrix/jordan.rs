//! Jordan decomposition from Weyr sequences and generalized eigenvector
//! chains.

use std::cmp::Ordering;

use super::{rank_tolerance, rref, Matrix};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::split::{lift_matrix, SplitField};

#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock<F: Field> {
    pub eigenvalue: F::Elem,
    pub size: usize,
}

/// `A = P J P^-1` with `J` block diagonal in the order of `blocks`.
#[derive(Clone, Debug)]
pub struct JordanDecomposition<F: Field> {
    pub field: F,
    pub blocks: Vec<JordanBlock<F>>,
    pub transform: Matrix<F>,
}

impl<F: Field> JordanDecomposition<F> {
    pub fn jordan_matrix(&self) -> Result<Matrix<F>> {
        let blocks: Vec<Matrix<F>> = self
            .blocks
            .iter()
            .map(|b| Matrix::jordan_block(self.field.clone(), &b.eigenvalue, b.size))
            .collect();
        Matrix::block_diag(self.field.clone(), &blocks)
    }

    pub fn reconstruct(&self) -> Result<Matrix<F>> {
        let p = &self.transform;
        p.mul(&self.jordan_matrix()?)?.mul(&p.inverse()?)
    }

    /// Distinct eigenvalues in block order.
    pub fn eigenvalues(&self) -> Vec<F::Elem> {
        let mut out: Vec<F::Elem> = Vec::new();
        for b in &self.blocks {
            if !out.iter().any(|e| self.field.approx_eq(e, &b.eigenvalue)) {
                out.push(b.eigenvalue.clone());
            }
        }
        out
    }
}

/// `dim ker(A - lambda I)`: the number of Jordan blocks for `lambda`.
pub fn block_count<F: Field>(a: &Matrix<F>, lambda: &F::Elem) -> Result<usize> {
    let shifted = a.add_scalar(&a.field().neg(lambda));
    Ok(shifted.nullspace()?.len())
}

/// Jordan form of `a`. Eigenvalues are roots of the characteristic
/// polynomial: over finite fields the decomposition lives in the smallest
/// extension containing them, over Q they must be rational, over C they are
/// clustered numerically.
pub fn jordan_form<F: SplitField>(a: &Matrix<F>) -> Result<JordanDecomposition<F>> {
    let chi = a.charpoly();
    let split = F::split_eigen(&chi, a.n(), a.norm())?;
    let lifted = lift_matrix(a, &split.field)?;
    jordan_structure(&lifted, &split.roots)
}

fn independent<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(true);
    }
    let mut rows = vectors.to_vec();
    let norm = rows
        .iter()
        .flatten()
        .map(|x| field.magnitude(x).powi(2))
        .sum::<f64>()
        .sqrt();
    let tol = rank_tolerance(field, rows[0].len(), norm);
    Ok(rref(field, &mut rows, tol)?.len() == vectors.len())
}

fn defective(msg: String) -> Error {
    Error::NumericallyDefective(msg)
}

/// Jordan decomposition given the eigenvalues and their algebraic
/// multiplicities, all in `a`'s field.
pub fn jordan_structure<F: Field>(
    a: &Matrix<F>,
    eigenvalues: &[(F::Elem, usize)],
) -> Result<JordanDecomposition<F>> {
    let field = a.field().clone();
    let n = a.n();
    // (eigenvalue, size, columns) per chain
    let mut chains: Vec<(F::Elem, usize, Vec<Vec<F::Elem>>)> = Vec::new();
    for (lambda, mult) in eigenvalues {
        let nil = a.add_scalar(&field.neg(lambda));
        let mut kernels: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new()];
        let mut power = Matrix::identity(field.clone(), n);
        loop {
            power = power.mul(&nil)?;
            let ker = power.nullspace()?;
            let prev = kernels.last().expect("nonempty").len();
            let done = ker.len() >= *mult || ker.len() == prev;
            kernels.push(ker);
            if done {
                break;
            }
        }
        let top = kernels.last().expect("nonempty").len();
        if top != *mult || kernels[1].is_empty() {
            return Err(defective(format!(
                "eigenvalue {} has algebraic multiplicity {mult} but generalized eigenspace of dimension {top}",
                field.format_elem(lambda)
            )));
        }
        let s = kernels.len() - 1;
        let mut carried: Vec<Vec<F::Elem>> = Vec::new();
        for k in (1..=s).rev() {
            let wanted = kernels[k].len() - kernels[k - 1].len();
            let mut basis: Vec<Vec<F::Elem>> = kernels[k - 1].clone();
            basis.extend(carried.iter().cloned());
            for v in &kernels[k] {
                if carried.len() >= wanted {
                    break;
                }
                basis.push(v.clone());
                if independent(&field, &basis)? {
                    carried.push(v.clone());
                    let mut cols = vec![v.clone()];
                    for _ in 1..k {
                        let next = nil.mul_vec(cols.last().expect("nonempty"));
                        cols.push(next);
                    }
                    cols.reverse();
                    chains.push((lambda.clone(), k, cols));
                } else {
                    basis.pop();
                }
            }
            if carried.len() != wanted {
                return Err(defective(format!(
                    "could not complete the chains of length {k} for eigenvalue {}",
                    field.format_elem(lambda)
                )));
            }
            carried = carried.iter().map(|v| nil.mul_vec(v)).collect();
        }
    }
    chains.sort_by(|a, b| canonical(&field, &a.0, &b.0).then(b.1.cmp(&a.1)));
    let total: usize = chains.iter().map(|c| c.1).sum();
    if total != n {
        return Err(defective(format!("chains cover {total} of {n} dimensions")));
    }
    let cols: Vec<Vec<F::Elem>> = chains.iter().flat_map(|c| c.2.iter().cloned()).collect();
    let transform = Matrix::from_columns(field.clone(), &cols)?;
    let blocks = chains
        .into_iter()
        .map(|(eigenvalue, size, _)| JordanBlock { eigenvalue, size })
        .collect();
    Ok(JordanDecomposition {
        field,
        blocks,
        transform,
    })
}

fn canonical<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Ordering {
    if field.approx_eq(a, b) {
        Ordering::Equal
    } else {
        field.canonical_cmp(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ComplexField, FiniteField, Rationals};
    use num::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn diagonal() {
        let a = Matrix::from_ints(Rationals, &[&[2, 0], &[0, 3]]).unwrap();
        let j = jordan_form(&a).unwrap();
        assert_eq!(
            j.blocks,
            vec![JordanBlock { eigenvalue: q(2), size: 1 }, JordanBlock { eigenvalue: q(3), size: 1 }]
        );
        assert_eq!(j.transform, Matrix::identity(Rationals, 2));
    }

    #[test]
    fn nilpotent_block() {
        let a = Matrix::from_ints(Rationals, &[&[0, 1], &[0, 0]]).unwrap();
        let j = jordan_form(&a).unwrap();
        assert_eq!(j.blocks, vec![JordanBlock { eigenvalue: q(0), size: 2 }]);
        assert_eq!(j.transform, Matrix::identity(Rationals, 2));
    }

    #[test]
    fn defective_rational() {
        let a = Matrix::from_ints(Rationals, &[&[5, 4], &[-4, -3]]).unwrap();
        let j = jordan_form(&a).unwrap();
        assert_eq!(j.blocks, vec![JordanBlock { eigenvalue: q(1), size: 2 }]);
        assert_eq!(j.reconstruct().unwrap(), a);
    }

    #[test]
    fn irrational_eigenvalues_are_rejected() {
        let a = Matrix::from_ints(Rationals, &[&[0, 2], &[1, 0]]).unwrap();
        assert_eq!(jordan_form(&a).unwrap_err(), Error::EigenvaluesNotSplit);
    }

    #[test]
    fn block_counts() {
        let i2 = Matrix::identity(Rationals, 2);
        assert_eq!(block_count(&i2, &q(1)).unwrap(), 2);
        let j2 = Matrix::from_ints(Rationals, &[&[0, 1], &[0, 0]]).unwrap();
        assert_eq!(block_count(&j2, &q(0)).unwrap(), 1);
        let j21 = Matrix::from_ints(Rationals, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]).unwrap();
        assert_eq!(block_count(&j21, &q(0)).unwrap(), 2);
        assert_eq!(block_count(&i2, &q(5)).unwrap(), 0);
    }

    #[test]
    fn finite_field_eigenvalues_in_extension() {
        // companion matrix of x^2+x+1 over F_2
        let f2 = FiniteField::prime(2).unwrap();
        let a = Matrix::from_ints(f2, &[&[0, 1], &[1, 1]]).unwrap();
        let j = jordan_form(&a).unwrap();
        assert_eq!(j.field.degree(), 2);
        assert_eq!(j.blocks.len(), 2);
        let lifted = lift_matrix(&a, &j.field).unwrap();
        assert_eq!(j.reconstruct().unwrap(), lifted);
    }

    #[test]
    fn mixed_structure_over_f3() {
        let f3 = FiniteField::prime(3).unwrap();
        let j = Matrix::block_diag(
            f3.clone(),
            &[
                Matrix::jordan_block(f3.clone(), &1, 1),
                Matrix::jordan_block(f3.clone(), &2, 2),
                Matrix::jordan_block(f3.clone(), &1, 2),
            ],
        )
        .unwrap();
        let p = Matrix::from_ints(f3.clone(), &[&[1, 1, 0, 0, 2], &[0, 1, 0, 1, 0], &[1, 0, 1, 0, 0], &[0, 0, 1, 1, 0], &[2, 0, 0, 0, 1]]).unwrap();
        let a = p.mul(&j).unwrap().mul(&p.inverse().unwrap()).unwrap();
        let d = jordan_form(&a).unwrap();
        let sizes: Vec<(u64, usize)> = d.blocks.iter().map(|b| (b.eigenvalue, b.size)).collect();
        assert_eq!(sizes, vec![(1, 2), (1, 1), (2, 2)]);
        assert_eq!(d.reconstruct().unwrap(), a);
    }

    #[test]
    fn numeric_defective_block() {
        let c = ComplexField::default();
        let a = Matrix::from_ints(c, &[&[5, 4], &[-4, -3]]).unwrap();
        let j = jordan_form(&a).unwrap();
        assert_eq!(j.blocks.len(), 1);
        assert_eq!(j.blocks[0].size, 2);
        let back = j.reconstruct().unwrap();
        assert!(back.sub(&a).unwrap().norm() <= 1e-8 * 2.0 * a.norm());
    }
}
