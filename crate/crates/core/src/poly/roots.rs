//! Root finding: exhaustive scans over finite fields, the rational root
//! theorem over Q, and Aberth–Ehrlich iteration over C.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, FiniteField, Rationals, SCAN_LIMIT};

pub const ABERTH_MAX_ITERATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct Root<F: Field> {
    pub value: F::Elem,
    pub multiplicity: usize,
    /// Smallest field (among those searched) containing the root.
    pub field: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootMultiset<F: Field> {
    pub roots: Vec<Root<F>>,
    /// Degree of the polynomial the roots belong to.
    pub degree: usize,
}

impl<F: Field> RootMultiset<F> {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// All roots were found with their multiplicities.
    pub fn is_complete(&self) -> bool {
        self.total_multiplicity() == self.degree
    }
}

/// Multiplicity of `r` as a root of `f` by repeated synthetic division.
fn multiplicity<F: Field>(f: &Poly<F>, r: &F::Elem) -> usize {
    let field = f.field();
    let mut coeffs = f.coeffs().to_vec();
    let mut m = 0;
    while coeffs.len() > 1 {
        // synthetic division by (x - r)
        let n = coeffs.len();
        let mut quot = vec![field.zero(); n - 1];
        let mut carry = field.zero();
        for i in (0..n).rev() {
            let v = field.add(&coeffs[i], &field.mul(&carry, r));
            if i == 0 {
                carry = v;
            } else {
                quot[i - 1] = v.clone();
                carry = v;
            }
        }
        if !field.is_zero(&carry) {
            break;
        }
        m += 1;
        coeffs = quot;
    }
    m
}

fn powmod<F: Field>(base: &Poly<F>, mut e: u64, modulus: &Poly<F>) -> Result<Poly<F>> {
    let f = base.field().clone();
    let mut acc = Poly::constant(f.clone(), f.one()).rem(modulus)?;
    let mut b = base.rem(modulus)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b)?.rem(modulus)?;
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b)?.rem(modulus)?;
        }
    }
    Ok(acc)
}

/// All roots of `f` over extensions `F_{Q^e}`, `e <= bound`, of its field
/// `F_Q`.
///
/// Fields are scanned element by element. Before scanning `F_{Q^e}`, the
/// number of distinct roots it holds is read off `gcd(f, x^{Q^e} - x)`; the
/// scan is skipped when all of them are already known, and the search stops
/// once the multiplicities add up to the degree.
pub fn scan_roots(f: &Poly<FiniteField>, bound: u32) -> Result<RootMultiset<FiniteField>> {
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeZero),
        Some(d) => d,
    };
    let base = f.field().clone();
    let monic = f.monic()?;
    let x = Poly::x(base.clone());
    let mut frob = x.clone();
    let mut roots: Vec<(Root<FiniteField>, u32)> = Vec::new();
    let mut total = 0usize;
    for e in 1..=bound {
        if total == d {
            break;
        }
        frob = powmod(&frob, base.size(), &monic)?;
        let distinct = monic.gcd(&frob.sub(&x)?)?.degree().unwrap_or(0);
        let known = roots.iter().filter(|(_, re)| e % re == 0).count();
        if distinct == known {
            continue;
        }
        let ext = FiniteField::new(base.characteristic_prime(), base.degree() * e)?;
        if ext.size() > SCAN_LIMIT {
            return Err(Error::FieldTooLarge { size: ext.size() as u128 });
        }
        let fe = f.map_into(&ext, |c| base.embed_into(&ext, *c))?;
        let previous: Vec<u64> = roots
            .iter()
            .filter(|(_, re)| e % re == 0)
            .map(|(r, _)| r.field.embed_into(&ext, r.value))
            .collect::<Result<_>>()?;
        let mut new_here = 0;
        for v in ext.elements() {
            if fe.eval(&v) != 0 || previous.contains(&v) {
                continue;
            }
            let m = multiplicity(&fe, &v);
            total += m;
            new_here += 1;
            roots.push((
                Root {
                    value: v,
                    multiplicity: m,
                    field: ext.clone(),
                },
                e,
            ));
            if known + new_here == distinct {
                break;
            }
        }
    }
    Ok(RootMultiset {
        roots: roots.into_iter().map(|(r, _)| r).collect(),
        degree: d,
    })
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let small = n
        .to_u64()
        .filter(|v| *v <= 1u64 << 48)
        .ok_or_else(|| Error::invalid("coefficient too large for rational root search"))?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= small {
        if small % i == 0 {
            out.push(BigInt::from(i));
            if i * i != small {
                out.push(BigInt::from(small / i));
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Rational roots via the rational root theorem. The result is complete
/// only when `f` splits over Q.
pub fn rational_roots(f: &Poly<Rationals>) -> Result<RootMultiset<Rationals>> {
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeZero),
        Some(d) => d,
    };
    // clear denominators
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let zero_mult = ints.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        roots.push(Root {
            value: BigRational::zero(),
            multiplicity: zero_mult,
            field: Rationals,
        });
    }
    let trimmed = &ints[zero_mult..];
    if trimmed.len() > 1 {
        let ps = divisors(&trimmed[0])?;
        let qs = divisors(trimmed.last().expect("nonempty"))?;
        let mut candidates = Vec::new();
        for p in &ps {
            for q in &qs {
                let r = BigRational::new(p.clone(), q.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort_by(|a, b| Rationals.canonical_cmp(a, b));
        candidates.dedup();
        for r in candidates {
            if f.eval(&r).is_zero() {
                let m = multiplicity(f, &r);
                roots.push(Root {
                    value: r,
                    multiplicity: m,
                    field: Rationals,
                });
            }
        }
    }
    Ok(RootMultiset { roots, degree: d })
}

/// All `deg f` complex roots by Aberth–Ehrlich iteration.
///
/// Start points lie on the circle of radius `1 + max |a_i / a_n|`; the
/// iteration is capped at [`ABERTH_MAX_ITERATIONS`]. Every returned root
/// satisfies `|f(r)| <= eps * sum |a_i| |r|^i`, otherwise the call fails with
/// `NoConvergence`.
pub fn aberth_roots(f: &Poly<ComplexField>) -> Result<Vec<Complex64>> {
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(d) => d,
    };
    let eps = f.field().tolerance();
    let coeffs = f.coeffs();
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let rest: Vec<Complex64> = coeffs[zeros..].to_vec();
    let n = rest.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    let lead = rest[n];
    let monic: Vec<Complex64> = rest.iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..ABERTH_MAX_ITERATIONS {
        let mut worst = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let sum: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = dp - p * sum;
            if denom.norm() == 0.0 || !denom.is_finite() {
                continue;
            }
            let w = p / denom;
            z[k] -= w;
            worst = worst.max(w.norm() / z[k].norm().max(1.0));
        }
        if worst < 4.0 * f64::EPSILON {
            break;
        }
    }
    for r in &z {
        let (p, _) = eval(*r);
        let scale: f64 = monic
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * r.norm().powi(i as i32))
            .sum();
        if !(p.norm() <= eps * scale) {
            return Err(Error::NoConvergence {
                iterations: ABERTH_MAX_ITERATIONS,
            });
        }
    }
    roots.extend(z);
    let _ = d;
    Ok(roots)
}

/// Groups points closer than `radius * max(1, |a|, |b|)` (single linkage)
/// and returns `(centroid, count)` pairs in canonical order.
pub fn cluster_roots(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1f64.max(points[i].norm()).max(points[j].norm());
            if (points[i] - points[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += points[i];
                g.2 += 1;
            }
            None => groups.push((r, points[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, s, c)| (s / c as f64, c))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

/// Refines the centroid `z` of a cluster of `m` roots by Newton steps on
/// `f^(m-1)`, of which the multiple root is a simple root. Steps are kept
/// only while they shrink the residual and stay within `radius` of `z`.
pub fn polish_cluster(f: &Poly<ComplexField>, z: Complex64, m: usize, radius: f64) -> Complex64 {
    if m < 2 {
        return z;
    }
    let mut g = f.clone();
    for _ in 1..m {
        g = g.derivative();
    }
    let dg = g.derivative();
    let mut best = z;
    let mut best_res = g.eval(&z).norm();
    for _ in 0..8 {
        let d = dg.eval(&best);
        if d.norm() == 0.0 || best_res == 0.0 {
            break;
        }
        let next = best - g.eval(&best) / d;
        let res = g.eval(&next).norm();
        if !(res < best_res) || (next - z).norm() > radius {
            break;
        }
        best = next;
        best_res = res;
    }
    best
}

/// Aberth roots clustered at radius `eps^(1/2)`, multiple roots polished.
pub fn complex_roots(f: &Poly<ComplexField>) -> Result<RootMultiset<ComplexField>> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let raw = aberth_roots(f)?;
    let radius = f.field().tolerance().sqrt();
    let roots = cluster_roots(&raw, radius)
        .into_iter()
        .map(|(v, m)| Root {
            value: polish_cluster(f, v, m, radius * v.norm().max(1.0)),
            multiplicity: m,
            field: *f.field(),
        })
        .collect();
    Ok(RootMultiset { roots, degree: d })
}
