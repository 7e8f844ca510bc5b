//! Exhaustive ground truth over small finite fields: critical values by
//! scanning fibers point by point, and preimages by enumerating every
//! matrix. Deliberately brute force; negative answers only cover the
//! extensions that were searched.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::solver::verify;
use crate::split::{lift_matrix, lift_poly, SplitField};

/// Largest field `F_{q^m}` whose points are tried as zeros of `f'`.
pub const CRITICAL_SCAN_CAP: u64 = 1 << 10;
/// Largest field scanned while collecting a fiber.
pub const FIBER_SCAN_CAP: u64 = 1 << 20;
/// Largest degree accepted by [`oracle_critical_values`].
pub const MAX_ORACLE_DEGREE: usize = 6;
/// Bits of the largest matrix search space, `n^2 log2(q^e)`.
pub const IMAGE_SEARCH_BITS: u32 = 26;

/// A value found critical by the oracle, in the smallest field holding it.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleValue {
    pub t: u64,
    pub field: FiniteField,
}

impl OracleValue {
    /// `(degree over the prime field, packed value)`; equal keys mean equal
    /// elements because embeddings between fields are compatible.
    pub fn key(&self) -> (u32, u64) {
        (self.field.degree(), self.t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleCriticalSet {
    /// `f' = 0`.
    All,
    Values(Vec<OracleValue>),
}

/// Moves `t` into the smallest subfield of `field` containing it.
pub fn minimal_representative(field: &FiniteField, t: u64) -> Result<OracleValue> {
    let d = field.element_degree(t);
    let sub = FiniteField::new(field.characteristic_prime(), d)?;
    let value = field
        .restrict(&sub, t)?
        .ok_or_else(|| Error::invalid("element outside its own subfield"))?;
    Ok(OracleValue { t: value, field: sub })
}

fn multiplicity(f: &Poly<FiniteField>, u: u64) -> Result<usize> {
    let lin = Poly::linear_root(f.field().clone(), &u);
    let mut g = f.clone();
    let mut m = 0;
    loop {
        let (q, r) = g.divrem(&lin)?;
        if !r.is_zero() {
            return Ok(m);
        }
        g = q;
        m += 1;
    }
}

/// Whether every point of the fiber of `t` is a zero of `f'`, found by
/// scanning `F_{q^(m e)}` for `e = 1, 2, ...` until the multiplicities
/// reach `deg f`.
fn fiber_is_critical(f: &Poly<FiniteField>, t: u64, m: u32) -> Result<bool> {
    let base = f.field().clone();
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let k = base.degree();
    let mut found = 0usize;
    for e in 1..=d as u32 {
        let ext = FiniteField::new(base.characteristic_prime(), k * m * e)?;
        if ext.size() > FIBER_SCAN_CAP {
            return Err(Error::SearchSpaceTooLarge {
                bits: (ext.size() as f64).log2(),
                cap: FIBER_SCAN_CAP.trailing_zeros(),
            });
        }
        let g = lift_poly(f, &ext)?.sub_constant(&base.lift(&ext, &t)?);
        let gp = lift_poly(&f.derivative(), &ext)?;
        for u in ext.elements() {
            if !ext.is_zero(&g.eval(&u)) {
                continue;
            }
            // count each root only in the first field where it appears
            let deg_u = ext.element_degree(u);
            if (1..e).any(|e2| (k * m * e2) % deg_u == 0) {
                continue;
            }
            if !ext.is_zero(&gp.eval(&u)) {
                return Ok(false);
            }
            found += multiplicity(&g, u)?;
        }
        if found == d {
            return Ok(true);
        }
    }
    Err(Error::invalid("fiber scan did not account for every root"))
}

/// Critical values `t = f(u)` for zeros `u` of `f'` in `F_{q^m}`, each
/// confirmed by scanning its whole fiber.
pub fn oracle_critical_values(f: &Poly<FiniteField>, m: u32) -> Result<OracleCriticalSet> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    if d > MAX_ORACLE_DEGREE {
        return Err(Error::invalid(format!("oracle accepts degree at most {MAX_ORACLE_DEGREE}")));
    }
    if m == 0 {
        return Err(Error::invalid("extension bound must be at least 1"));
    }
    let base = f.field().clone();
    let size = (base.size() as f64).powi(m as i32);
    if size > CRITICAL_SCAN_CAP as f64 {
        return Err(Error::SearchSpaceTooLarge {
            bits: size.log2(),
            cap: CRITICAL_SCAN_CAP.trailing_zeros(),
        });
    }
    if f.derivative().is_zero() {
        return Ok(OracleCriticalSet::All);
    }
    let ext = FiniteField::new(base.characteristic_prime(), base.degree() * m)?;
    let fl = lift_poly(f, &ext)?;
    let fp = fl.derivative();
    let mut values: Vec<OracleValue> = Vec::new();
    for u in ext.elements() {
        if !ext.is_zero(&fp.eval(&u)) {
            continue;
        }
        let t = minimal_representative(&ext, fl.eval(&u))?;
        if values.iter().any(|v| v.key() == t.key()) {
            continue;
        }
        // the fiber is taken over the field generated by t and F_q
        let over = base.compositum(&t.field)?;
        let f_over = lift_poly(f, &over)?;
        if fiber_is_critical(&f_over, t.field.lift(&over, &t.t)?, 1)? {
            values.push(t);
        }
    }
    values.sort_by_key(|v| v.key());
    Ok(OracleCriticalSet::Values(values))
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleVerdict {
    /// The first `X` in enumeration order, over `F_{q^e}`.
    Found { x: Matrix<FiniteField>, extension: u32 },
    ExhaustedNoneFound,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub base: FiniteField,
    pub n: usize,
    pub ext_bound: u32,
    /// Extension degrees actually searched, with the candidates tried in
    /// each.
    pub searched: Vec<(u32, u128)>,
    pub verdict: OracleVerdict,
    pub candidates_tested: u128,
    pub elapsed: Duration,
}

/// Enumerates `X` in `M_n(F_{q^e})` for `e = 1..=m`, row-major with
/// entries in canonical order, and stops at the first `f(X) = A`.
pub fn oracle_image_search(f: &Poly<FiniteField>, a: &Matrix<FiniteField>, m: u32) -> Result<OracleReport> {
    crate::field::ensure_same(f.field(), a.field())?;
    if m == 0 {
        return Err(Error::invalid("extension bound must be at least 1"));
    }
    let base = a.field().clone();
    let n = a.n();
    let bits = (n * n) as f64 * (base.size() as f64).log2() * m as f64;
    if bits > IMAGE_SEARCH_BITS as f64 + 1e-9 {
        return Err(Error::SearchSpaceTooLarge {
            bits,
            cap: IMAGE_SEARCH_BITS,
        });
    }
    let start = Instant::now();
    let mut searched = Vec::new();
    let mut total = 0u128;
    for e in 1..=m {
        let ext = FiniteField::new(base.characteristic_prime(), base.degree() * e)?;
        let fl = lift_poly(f, &ext)?;
        let al = lift_matrix(a, &ext)?;
        let (hit, tested) = search_field(&fl, &al);
        total += tested;
        searched.push((e, tested));
        if let Some(x) = hit {
            debug_assert!(verify(&fl, &x, &al).map(|v| v.pass).unwrap_or(false));
            return Ok(OracleReport {
                base,
                n,
                ext_bound: m,
                searched,
                verdict: OracleVerdict::Found { x, extension: e },
                candidates_tested: total,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(OracleReport {
        base,
        n,
        ext_bound: m,
        searched,
        verdict: OracleVerdict::ExhaustedNoneFound,
        candidates_tested: total,
        elapsed: start.elapsed(),
    })
}

/// Flat `n x n` arithmetic on packed elements; the generic matrix type
/// allocates too much for a search over tens of millions of candidates.
struct Flat<'a> {
    k: &'a FiniteField,
    n: usize,
}

impl Flat<'_> {
    fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for l in 0..n {
                    s = self.k.add(&s, &self.k.mul(&a[i * n + l], &b[l * n + j]));
                }
                out[i * n + j] = s;
            }
        }
    }

    /// Horner evaluation into `acc`, using `tmp` as scratch.
    fn eval(&self, coeffs: &[u64], x: &[u64], acc: &mut [u64], tmp: &mut [u64]) {
        let n = self.n;
        acc.fill(0);
        for c in coeffs.iter().rev() {
            self.mul_into(acc, x, tmp);
            for i in 0..n {
                tmp[i * n + i] = self.k.add(&tmp[i * n + i], c);
            }
            acc.copy_from_slice(tmp);
        }
    }
}

fn search_field(f: &Poly<FiniteField>, a: &Matrix<FiniteField>) -> (Option<Matrix<FiniteField>>, u128) {
    let k = f.field();
    let n = a.n();
    let s = k.size();
    let target: Vec<u64> = a.rows().concat();
    let flat = Flat { k, n };
    let mut x = vec![0u64; n * n];
    let mut acc = vec![0u64; n * n];
    let mut tmp = vec![0u64; n * n];
    let mut tested = 0u128;
    loop {
        tested += 1;
        flat.eval(f.coeffs(), &x, &mut acc, &mut tmp);
        if acc == target {
            let rows = x.chunks(n).map(|r| r.to_vec()).collect();
            return (Some(Matrix::from_rows(k.clone(), rows).expect("square")), tested);
        }
        // odometer: the last entry moves fastest
        let mut i = n * n;
        loop {
            if i == 0 {
                return (None, tested);
            }
            i -= 1;
            x[i] += 1;
            if x[i] < s {
                break;
            }
            x[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FiniteField {
        FiniteField::prime(3).unwrap()
    }

    fn keys(set: OracleCriticalSet) -> Vec<(u32, u64)> {
        match set {
            OracleCriticalSet::Values(v) => v.iter().map(|x| x.key()).collect(),
            OracleCriticalSet::All => panic!("unexpected All"),
        }
    }

    #[test]
    fn critical_value_examples() {
        let sq = Poly::from_ints(f3(), &[0, 0, 1]);
        assert_eq!(keys(oracle_critical_values(&sq, 1).unwrap()), vec![(1, 0)]);
        let f2 = FiniteField::prime(2).unwrap();
        let art = Poly::from_ints(f2.clone(), &[0, 1, 1]);
        assert_eq!(keys(oracle_critical_values(&art, 2).unwrap()), vec![]);
        let cube = Poly::from_ints(f2.clone(), &[0, 0, 0, 1]);
        assert_eq!(keys(oracle_critical_values(&cube, 1).unwrap()), vec![(1, 0)]);
        let frob = Poly::from_ints(f2, &[0, 0, 1]);
        assert_eq!(oracle_critical_values(&frob, 1).unwrap(), OracleCriticalSet::All);
    }

    #[test]
    fn critical_scan_respects_cap() {
        let f2 = FiniteField::prime(2).unwrap();
        let f = Poly::from_ints(f2, &[0, 0, 0, 1]);
        assert!(matches!(oracle_critical_values(&f, 11), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn image_search_examples() {
        let sq = Poly::from_ints(f3(), &[0, 0, 1]);
        let i2 = Matrix::identity(f3(), 2);
        let r = oracle_image_search(&sq, &i2, 1).unwrap();
        match r.verdict {
            // the first square root of I in row-major order
            OracleVerdict::Found { x, extension } => {
                assert_eq!(extension, 1);
                assert_eq!(x, Matrix::from_ints(f3(), &[&[0, 1], &[1, 0]]).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let j = Matrix::jordan_block(f3(), &0, 2);
        let r = oracle_image_search(&sq, &j, 2).unwrap();
        assert_eq!(r.verdict, OracleVerdict::ExhaustedNoneFound);
        assert_eq!(r.candidates_tested, 81 + 6561);
        assert_eq!(r.searched, vec![(1, 81), (2, 6561)]);
    }

    #[test]
    fn image_search_respects_cap() {
        let sq = Poly::from_ints(f3(), &[0, 0, 1]);
        let a = Matrix::identity(f3(), 4);
        assert!(matches!(oracle_image_search(&sq, &a, 2), Err(Error::SearchSpaceTooLarge { .. })));
    }
}
