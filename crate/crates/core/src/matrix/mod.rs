//! Square matrices over any backend.

mod jordan;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{ensure_same, Field};
use crate::poly::Poly;

pub use jordan::{block_count, jordan_form, jordan_structure, JordanBlock, JordanDecomposition};

/// Pivots whose magnitude falls in `(tol, AMBIGUITY_FACTOR * tol]` are
/// neither clearly zero nor clearly nonzero.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    n: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.data == other.data
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]{}", self.field.describe(), self)
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.field.format_elem(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, n: usize) -> Self {
        let data = vec![field.zero(); n * n];
        Matrix { field, n, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        Matrix::scalar(field.clone(), n, field.one())
    }

    pub fn scalar(field: F, n: usize, c: F::Elem) -> Self {
        let mut m = Matrix::zeros(field, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("matrix must have at least one row".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            field,
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(field: F, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|v| field.from_int(*v)).collect())
            .collect();
        Matrix::from_rows(field, rows)
    }

    /// `J_r(lambda)`: `lambda` on the diagonal, ones above it.
    pub fn jordan_block(field: F, lambda: &F::Elem, r: usize) -> Self {
        let mut m = Matrix::scalar(field.clone(), r, lambda.clone());
        for i in 1..r {
            m.set(i - 1, i, field.one());
        }
        m
    }

    pub fn block_diag(field: F, blocks: &[Matrix<F>]) -> Result<Self> {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Matrix::zeros(field.clone(), n);
        let mut off = 0;
        for b in blocks {
            ensure_same(&field, &b.field)?;
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.n;
        }
        Ok(m)
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(field: F, cols: &[Vec<F::Elem>]) -> Result<Self> {
        let n = cols.len();
        let mut m = Matrix::zeros(field, n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::ShapeMismatch(format!("column {j} has length {}", c.len())));
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<F::Elem>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        ensure_same(&self.field, &other.field)?;
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)));
        }
        Ok(())
    }

    fn zip(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        self.check(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), n: self.n, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| self.field.sub(a, b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let n = self.n;
        let mut out = Matrix::zeros(f.clone(), n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &v[j])))
            })
            .collect()
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), n: self.n, data }
    }

    /// `self + c * I`
    pub fn add_scalar(&self, c: &F::Elem) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let v = self.field.add(m.get(i, i), c);
            m.set(i, i, v);
        }
        m
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut acc = Matrix::identity(self.field.clone(), self.n);
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

    /// Frobenius norm of the entry magnitudes.
    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|a| self.field.magnitude(a).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.field == other.field
            && self.data.iter().zip(&other.data).all(|(a, b)| self.field.approx_eq(a, b))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.field.is_zero(self.get(i, j))))
    }

    pub fn map_into<G: Field>(
        &self,
        target: &G,
        mut map: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<Matrix<G>> {
        let data = self.data.iter().map(&mut map).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { field: target.clone(), n: self.n, data })
    }

    /// Rank threshold: 0 on exact backends, `eps * n * max(1, ||M||_F)`
    /// on floating ones.
    pub fn tolerance(&self) -> f64 {
        rank_tolerance(&self.field, self.n, self.norm())
    }

    pub fn rank(&self) -> Result<usize> {
        let mut rows = self.rows();
        Ok(rref(&self.field, &mut rows, self.tolerance())?.len())
    }

    /// Basis of the right kernel, one vector per free column in increasing
    /// column order.
    pub fn nullspace(&self) -> Result<Vec<Vec<F::Elem>>> {
        let f = &self.field;
        let mut rows = self.rows();
        let pivots = rref(f, &mut rows, self.tolerance())?;
        let mut basis = Vec::new();
        for free in (0..self.n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.n];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&rows[r][free]);
            }
            basis.push(v);
        }
        Ok(basis)
    }

    pub fn inverse(&self) -> Result<Self> {
        let f = &self.field;
        let n = self.n;
        let mut rows: Vec<Vec<F::Elem>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                r
            })
            .collect();
        let pivots = rref(f, &mut rows, self.tolerance())?;
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let data = rows.into_iter().flat_map(|r| r[n..].to_vec()).collect();
        Ok(Matrix { field: f.clone(), n, data })
    }

    /// Determinant by Gaussian elimination, pivoting on the largest entry
    /// of each column.
    pub fn det(&self) -> Result<F::Elem> {
        let f = &self.field;
        let n = self.n;
        let mut rows = self.rows();
        let mut det = f.one();
        for c in 0..n {
            let pivot = (c..n)
                .filter(|&r| !f.is_zero(&rows[r][c]))
                .max_by(|&a, &b| f.magnitude(&rows[a][c]).total_cmp(&f.magnitude(&rows[b][c])).then(b.cmp(&a)));
            let Some(p) = pivot else {
                return Ok(f.zero());
            };
            if p != c {
                rows.swap(p, c);
                det = f.neg(&det);
            }
            let pv = rows[c][c].clone();
            det = f.mul(&det, &pv);
            let inv = f.inv(&pv)?;
            for r in c + 1..n {
                if f.is_zero(&rows[r][c]) {
                    continue;
                }
                let factor = f.mul(&rows[r][c], &inv);
                for k in c..n {
                    let v = f.sub(&rows[r][k], &f.mul(&factor, &rows[c][k]));
                    rows[r][k] = v;
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(xI - A)` by Berkowitz' algorithm,
    /// which uses no division.
    pub fn charpoly(&self) -> Poly<F> {
        let f = &self.field;
        let n = self.n;
        if n == 0 {
            return Poly::constant(f.clone(), f.one());
        }
        // coefficients high degree first
        let mut c = vec![f.one(), f.neg(self.get(0, 0))];
        for r in 1..n {
            let mut q = vec![f.zero(); r + 2];
            q[0] = f.one();
            q[1] = f.neg(self.get(r, r));
            let mut v: Vec<F::Elem> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for k in 0..r {
                let dot = (0..r).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(r, j), &v[j])));
                q[k + 2] = f.neg(&dot);
                if k + 1 < r {
                    v = (0..r)
                        .map(|i| (0..r).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &v[j]))))
                        .collect();
                }
            }
            let mut next = vec![f.zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for j in 0..=i.min(r) {
                    *slot = f.add(slot, &f.mul(&q[i - j], &c[j]));
                }
            }
            c = next;
        }
        c.reverse();
        Poly::new(f.clone(), c)
    }
}

pub(crate) fn rank_tolerance<F: Field>(field: &F, n: usize, norm: f64) -> f64 {
    if field.is_exact() {
        0.0
    } else {
        field.eps() * n as f64 * norm.max(1.0)
    }
}

/// Reduces `rows` (any shape) to reduced row echelon form in place and
/// returns the pivot columns. On floating backends columns whose best
/// pivot is at most `tol` are treated as zero, and a best pivot inside
/// the ambiguity band is an error.
pub(crate) fn rref<F: Field>(field: &F, rows: &mut [Vec<F::Elem>], tol: f64) -> Result<Vec<usize>> {
    let f = field;
    let exact = f.is_exact();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .map(|i| (i, f.magnitude(&rows[i][c])))
            .fold(None::<(usize, f64)>, |acc, (i, m)| match acc {
                Some((_, bm)) if bm >= m => acc,
                _ => Some((i, m)),
            });
        let (p, mag) = best.expect("nonempty range");
        let is_zero = if exact { f.is_zero(&rows[p][c]) } else { mag <= tol };
        if is_zero {
            if !exact {
                for row in rows.iter_mut().skip(r) {
                    row[c] = f.zero();
                }
            }
            continue;
        }
        if !exact && mag <= AMBIGUITY_FACTOR * tol {
            return Err(Error::NumericallyDefective(format!(
                "pivot {mag:.3e} within the ambiguity band above tolerance {tol:.3e}"
            )));
        }
        rows.swap(p, r);
        let inv = f.inv(&rows[r][c])?;
        for k in 0..ncols {
            rows[r][k] = f.mul(&rows[r][k], &inv);
        }
        for i in 0..rows.len() {
            if i == r || f.is_zero(&rows[i][c]) {
                continue;
            }
            let factor = rows[i][c].clone();
            for k in 0..ncols {
                let v = f.sub(&rows[i][k], &f.mul(&factor, &rows[r][k]));
                rows[i][k] = v;
            }
            rows[i][c] = f.zero();
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// `f(A)` by Horner's rule.
pub fn mat_eval_poly<F: Field>(f: &Poly<F>, a: &Matrix<F>) -> Result<Matrix<F>> {
    ensure_same(f.field(), a.field())?;
    let field = a.field().clone();
    let mut acc = Matrix::zeros(field.clone(), a.n());
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(a)?.add_scalar(c);
    }
    Ok(acc)
}

/// `f(J_r(lambda))` in closed form: upper triangular Toeplitz whose entry
/// at offset `d` is `sum_m a_m C(m, d) lambda^(m-d)`, i.e.
/// `f^(d)(lambda)/d!`, with the binomials reduced in the field.
pub fn jordan_block_eval<F: Field>(f: &Poly<F>, lambda: &F::Elem, r: usize) -> Matrix<F> {
    let field = f.field().clone();
    let diag: Vec<F::Elem> = (0..r)
        .map(|d| {
            f.coeffs()
                .iter()
                .enumerate()
                .skip(d)
                .fold(field.zero(), |acc, (m, a)| {
                    let term = field.mul(
                        &field.mul(a, &field.binomial(m as u64, d as u64)),
                        &field.pow(lambda, (m - d) as u64),
                    );
                    field.add(&acc, &term)
                })
        })
        .collect();
    toeplitz(field, &diag)
}

/// Upper triangular Toeplitz matrix with `diag[d]` on the `d`-th
/// superdiagonal.
pub fn toeplitz<F: Field>(field: F, diag: &[F::Elem]) -> Matrix<F> {
    let r = diag.len();
    let mut m = Matrix::zeros(field, r);
    for i in 0..r {
        for j in i..r {
            m.set(i, j, diag[j - i].clone());
        }
    }
    m
}
