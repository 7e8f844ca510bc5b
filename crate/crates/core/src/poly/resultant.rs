//! Resultants, and the critical resultant `Res_x(f - T, f')` whose roots are
//! the candidate critical values of `f`.

use super::Poly;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// `Res(a, b)` as the determinant of the Sylvester matrix.
pub fn resultant<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Result<F::Elem> {
    crate::field::ensure_same(a.field(), b.field())?;
    let field = a.field().clone();
    let (da, db) = match (a.degree(), b.degree()) {
        (Some(da), Some(db)) => (da, db),
        _ => return Ok(field.zero()),
    };
    let n = da + db;
    if n == 0 {
        return Ok(field.one());
    }
    let mut m = Matrix::zeros(field.clone(), n);
    for row in 0..db {
        for (i, c) in a.coeffs().iter().rev().enumerate() {
            m.set(row, row + i, c.clone());
        }
    }
    for row in 0..da {
        for (i, c) in b.coeffs().iter().rev().enumerate() {
            m.set(db + row, row + i, c.clone());
        }
    }
    m.det()
}

/// `R(T) = Res_x(f(x) - T, f'(x))` as a polynomial in `T`.
///
/// With `b = lc(f')`, `d = deg f`, `e = deg f'`:
/// `R(T) = (-1)^(d e) b^d prod_{f'(z)=0} (f(z) - T)`, and the product is
/// `(-1)^e` times the characteristic polynomial of multiplication by `f` on
/// `k[x]/(f')`. That characteristic polynomial is computed division-free,
/// so the construction is valid in every characteristic.
pub fn critical_resultant<F: Field>(f: &Poly<F>) -> Result<Poly<F>> {
    let field = f.field().clone();
    if !field.is_exact() {
        return Err(Error::UnsupportedBackend(field.describe()));
    }
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let fp = f.derivative();
    let e = fp.degree().ok_or(Error::DerivativeZero)?;
    let b = fp.leading().expect("nonzero").clone();
    let mut scale = field.pow(&b, d as u64);
    if (d * e + e) % 2 == 1 {
        scale = field.neg(&scale);
    }
    if e == 0 {
        return Ok(Poly::constant(field, scale));
    }
    let g = f.rem(&fp)?;
    let mut mult = Matrix::zeros(field.clone(), e);
    let mut col = g.clone();
    for j in 0..e {
        for i in 0..e {
            mult.set(i, j, col.coeff(i));
        }
        col = col.mul(&Poly::x(field.clone()))?.rem(&fp)?;
    }
    Ok(mult.charpoly().scale(&scale))
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
    fn square_has_resultant_minus_four_t() {
        assert_eq!(critical_resultant(&q(&[0, 0, 1])).unwrap(), q(&[0, -4]));
    }

    #[test]
    fn cubic_has_resultant_27_t2_minus_4() {
        let r = critical_resultant(&q(&[0, -3, 0, 1])).unwrap();
        assert_eq!(r, q(&[-108, 0, 27]));
    }

    #[test]
    fn linear_gives_constant() {
        let r = critical_resultant(&q(&[5, 3])).unwrap();
        assert_eq!(r, q(&[3]));
    }

    #[test]
    fn inseparable_is_rejected() {
        let f2 = FiniteField::prime(2).unwrap();
        let f = Poly::from_ints(f2, &[1, 0, 1]);
        assert_eq!(critical_resultant(&f), Err(Error::DerivativeZero));
    }

    #[test]
    fn agrees_with_sylvester_at_sample_points() {
        let f = q(&[1, -2, 0, 3, 1, -1]);
        let r = critical_resultant(&f).unwrap();
        let fp = f.derivative();
        for t in -3..=3 {
            let tq = BigRational::from_integer(t.into());
            let direct = resultant(&f.sub_constant(&tq), &fp).unwrap();
            assert_eq!(r.eval(&tq), direct, "t = {t}");
        }
    }

    #[test]
    fn sylvester_of_coprime_linears() {
        // Res(x - 1, x - 3) = 1 - 3
        let r = resultant(&q(&[-1, 1]), &q(&[-3, 1])).unwrap();
        assert_eq!(r, BigRational::from_integer((-2).into()));
    }
}
