#![allow(dead_code)]

use matfun::field::{Field, FiniteField};
use matfun::matrix::Matrix;
use matfun::poly::Poly;
use rand::rngs::StdRng;
use rand::Rng;

pub const SMALL_FIELDS: [(u64, u32); 7] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2)];

pub fn fq(p: u64, m: u32) -> FiniteField {
    FiniteField::new(p, m).unwrap()
}

pub fn small_field(i: usize) -> FiniteField {
    let (p, m) = SMALL_FIELDS[i % SMALL_FIELDS.len()];
    fq(p, m)
}

pub fn rand_elem(k: &FiniteField, rng: &mut StdRng) -> u64 {
    rng.gen_range(0..k.size())
}

/// Degree exactly `deg`.
pub fn rand_poly(k: &FiniteField, deg: usize, rng: &mut StdRng) -> Poly<FiniteField> {
    let mut c: Vec<u64> = (0..deg).map(|_| rand_elem(k, rng)).collect();
    c.push(rng.gen_range(1..k.size()));
    Poly::new(k.clone(), c)
}

pub fn rand_matrix(k: &FiniteField, n: usize, rng: &mut StdRng) -> Matrix<FiniteField> {
    let rows = (0..n).map(|_| (0..n).map(|_| rand_elem(k, rng)).collect()).collect();
    Matrix::from_rows(k.clone(), rows).unwrap()
}

pub fn rand_invertible(k: &FiniteField, n: usize, rng: &mut StdRng) -> Matrix<FiniteField> {
    loop {
        let m = rand_matrix(k, n, rng);
        if m.inverse().is_ok() {
            return m;
        }
    }
}

pub fn conjugate<F: Field>(s: &Matrix<F>, a: &Matrix<F>) -> Matrix<F> {
    s.mul(a).unwrap().mul(&s.inverse().unwrap()).unwrap()
}

/// All monic polynomials of degree 1..=max_deg.
pub fn monic_polys(k: &FiniteField, max_deg: usize) -> Vec<Poly<FiniteField>> {
    let s = k.size();
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for code in 0..s.pow(d as u32) {
            let mut c: Vec<u64> = (0..d).map(|i| (code / s.pow(i as u32)) % s).collect();
            c.push(1);
            out.push(Poly::new(k.clone(), c));
        }
    }
    out
}
