//! A fixed catalog of entire functions (`exp`, `sin`, `cos`) acting on
//! complex matrices.
//!
//! For an entire `f`, the image of `X -> f(X)` on `n x n` matrices is at
//! most the set of matrices whose eigenvalues lie in `f(C)`, and it is all
//! of that set exactly when no value of `f` is critical. Critical sets and
//! fibers are closed-form here rather than computed.

use std::f64::consts::PI;

use num::complex::Complex64;

use crate::critical::{Criticality, FiberPoint, CRITICAL_MARGIN};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field};
use crate::matrix::{jordan_form, toeplitz, Matrix};
use crate::solver::{chain_preimage, BlockWitness, CriticalBlockCertificate, SolveOutcome, Verification};

/// Largest number of Taylor terms used by [`taylor_eval`].
pub const TAYLOR_CAP: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntireKind {
    Exp,
    Sin,
    Cos,
}

/// `f(C)`: the whole plane, or the plane minus one omitted point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Image {
    All,
    Omits(Complex64),
}

/// A critical value with the reason its fiber lies in `Z(f')`.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogCriticalValue {
    pub t: Complex64,
    pub reason: &'static str,
}

/// Solutions of `f(z) = t`: every `principal` point plus integer multiples
/// of `period`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntireFiber {
    pub principal: Vec<Complex64>,
    pub period: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EntireFunction {
    pub kind: EntireKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainVerdict {
    pub in_domain: bool,
    pub offending: Vec<Complex64>,
}

pub const CATALOG: [&str; 3] = ["exp", "sin", "cos"];

pub fn catalog(name: &str) -> Result<EntireFunction> {
    let kind = match name {
        "exp" => EntireKind::Exp,
        "sin" => EntireKind::Sin,
        "cos" => EntireKind::Cos,
        other => return Err(Error::UnknownFunction(other.to_string())),
    };
    Ok(EntireFunction { kind })
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl EntireFunction {
    pub fn name(&self) -> &'static str {
        match self.kind {
            EntireKind::Exp => "exp",
            EntireKind::Sin => "sin",
            EntireKind::Cos => "cos",
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.derivative(0, z)
    }

    /// `f^(k)(z)`.
    pub fn derivative(&self, k: usize, z: Complex64) -> Complex64 {
        match self.kind {
            EntireKind::Exp => z.exp(),
            // sin^(k) = sin(z + k pi/2), taken from the 4-cycle to stay exact
            EntireKind::Sin => cycle(k, z),
            EntireKind::Cos => cycle(k + 1, z),
        }
    }

    pub fn image(&self) -> Image {
        match self.kind {
            EntireKind::Exp => Image::Omits(c(0.0)),
            _ => Image::All,
        }
    }

    pub fn critical_values(&self) -> Vec<CatalogCriticalValue> {
        match self.kind {
            EntireKind::Exp => Vec::new(),
            EntireKind::Sin => vec![
                CatalogCriticalValue {
                    t: c(-1.0),
                    reason: "sin z = -1 forces cos z = 0",
                },
                CatalogCriticalValue {
                    t: c(1.0),
                    reason: "sin z = 1 forces cos z = 0",
                },
            ],
            EntireKind::Cos => vec![
                CatalogCriticalValue {
                    t: c(-1.0),
                    reason: "cos z = -1 forces sin z = 0",
                },
                CatalogCriticalValue {
                    t: c(1.0),
                    reason: "cos z = 1 forces sin z = 0",
                },
            ],
        }
    }

    /// Whether `t` is in `f(C)`; the omitted point of `exp` is matched
    /// within `tol`.
    pub fn attains(&self, t: Complex64, tol: f64) -> bool {
        match self.image() {
            Image::All => true,
            Image::Omits(p) => (t - p).norm() > tol,
        }
    }

    /// Decides criticality of `t` by its distance to the catalog's
    /// critical values: within `eps * max(1,|c|)` is critical, beyond
    /// [`CRITICAL_MARGIN`] times that is not.
    pub fn criticality(&self, t: Complex64, eps: f64) -> Criticality {
        let mut verdict = Criticality::NonCritical;
        for cv in self.critical_values() {
            let tol = eps * cv.t.norm().max(1.0);
            let d = (t - cv.t).norm();
            if d <= tol {
                return Criticality::Critical;
            }
            if d <= CRITICAL_MARGIN * tol {
                verdict = Criticality::Ambiguous;
            }
        }
        verdict
    }

    /// Principal branches: `exp` uses `Log` (imaginary part in `(-pi, pi]`);
    /// `sin` uses `asin t` and `pi - asin t`; `cos` uses `acos t` and
    /// `-acos t`. Points coinciding at a critical value are listed once.
    pub fn fiber(&self, t: Complex64) -> Result<EntireFiber> {
        let (principal, period) = match self.kind {
            EntireKind::Exp => {
                if t == c(0.0) {
                    return Err(Error::invalid("0 is not a value of exp"));
                }
                (vec![t.ln()], Complex64::new(0.0, 2.0 * PI))
            }
            EntireKind::Sin => {
                let a = t.asin();
                (vec![a, c(PI) - a], c(2.0 * PI))
            }
            EntireKind::Cos => {
                let a = t.acos();
                (vec![a, -a], c(2.0 * PI))
            }
        };
        let mut out: Vec<Complex64> = Vec::new();
        for z in principal {
            if !out.iter().any(|w| (w - z).norm() <= 1e-12 * z.norm().max(1.0)) {
                out.push(z);
            }
        }
        Ok(EntireFiber { principal: out, period })
    }

    /// The first principal fiber point; admissible for blocks of size at
    /// least 2 whenever `t` is not critical.
    pub fn principal_root(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.fiber(t)?.principal[0])
    }

    /// `f(J_r(u))`: Toeplitz with `f^(d)(u)/d!` on the `d`-th superdiagonal.
    pub fn block_eval(&self, field: ComplexField, u: Complex64, r: usize) -> Matrix<ComplexField> {
        let mut fact = 1.0;
        let diag: Vec<Complex64> = (0..r)
            .map(|d| {
                if d > 0 {
                    fact *= d as f64;
                }
                self.derivative(d, u) / fact
            })
            .collect();
        toeplitz(field, &diag)
    }
}

fn cycle(k: usize, z: Complex64) -> Complex64 {
    match k % 4 {
        0 => z.sin(),
        1 => z.cos(),
        2 => -z.sin(),
        _ => -z.cos(),
    }
}

/// `f(A)` through the Jordan form, cross-checked against [`taylor_eval`]
/// when the series converges within [`TAYLOR_CAP`] terms.
pub fn eval_entire(fun: &EntireFunction, a: &Matrix<ComplexField>) -> Result<Matrix<ComplexField>> {
    let field = *a.field();
    let jd = jordan_form(a)?;
    let blocks: Vec<Matrix<ComplexField>> = jd.blocks.iter().map(|b| fun.block_eval(field, b.eigenvalue, b.size)).collect();
    let p = &jd.transform;
    let value = p.mul(&Matrix::block_diag(field, &blocks)?)?.mul(&p.inverse()?)?;
    if let Some((series, _)) = taylor_eval(fun, a)? {
        let gap = value.sub(&series)?.norm();
        let allowed = 10.0 * field.tolerance() * value.norm().max(1.0);
        if gap > allowed {
            return Err(Error::NumericallyDefective(format!(
                "{} via Jordan form differs from its Taylor series by {gap:.3e}",
                fun.name()
            )));
        }
    }
    Ok(value)
}

/// Truncated power series `sum_{k<K} f^(k)(0) A^k / k!` with the smallest
/// `K` such that `||A||^K / K! <= eps`, or `None` if that needs more than
/// [`TAYLOR_CAP`] terms. Returns the sum and `K`.
pub fn taylor_eval(fun: &EntireFunction, a: &Matrix<ComplexField>) -> Result<Option<(Matrix<ComplexField>, usize)>> {
    let field = *a.field();
    let norm = a.norm();
    let eps = field.tolerance();
    let mut bound = 1.0;
    let mut terms = None;
    for k in 1..=TAYLOR_CAP {
        bound *= norm / k as f64;
        if bound <= eps {
            terms = Some(k);
            break;
        }
    }
    let Some(k_max) = terms else { return Ok(None) };
    let mut sum = Matrix::zeros(field, a.n());
    let mut power = Matrix::identity(field, a.n());
    for k in 0..k_max {
        if k > 0 {
            power = power.mul(a)?.scale(&c(1.0 / k as f64));
        }
        let coeff = fun.derivative(k, c(0.0));
        if coeff != c(0.0) {
            sum = sum.add(&power.scale(&coeff))?;
        }
    }
    Ok(Some((sum, k_max)))
}

/// Eigenvalues of `A` outside `f(C)`; `exp` flags those within
/// `eps * max(1, ||A||_F)` of 0.
pub fn in_domain(fun: &EntireFunction, a: &Matrix<ComplexField>) -> Result<DomainVerdict> {
    let jd = jordan_form(a)?;
    let tol = a.field().tolerance() * a.norm().max(1.0);
    let offending: Vec<Complex64> = jd.eigenvalues().into_iter().filter(|&t| !fun.attains(t, tol)).collect();
    Ok(DomainVerdict {
        in_domain: offending.is_empty(),
        offending,
    })
}

fn certificate(fun: &EntireFunction, field: ComplexField, t: Complex64, size: usize) -> Result<CriticalBlockCertificate<ComplexField>> {
    let fiber = fun
        .fiber(t)?
        .principal
        .into_iter()
        .map(|u| FiberPoint {
            u,
            // zeros of f' in the fiber of a critical value are double
            multiplicity: 2,
            derivative: fun.derivative(1, u),
        })
        .collect();
    Ok(CriticalBlockCertificate {
        t,
        size,
        field,
        fiber,
        // the fiber is infinite; only one period is listed
        fiber_complete: false,
    })
}

/// Solves `f(X) = A` for a catalog function, block by block on the Jordan
/// form of `A`.
pub fn solve_entire(fun: &EntireFunction, a: &Matrix<ComplexField>) -> Result<SolveOutcome<ComplexField>> {
    let field = *a.field();
    let eps = field.tolerance();
    let jd = jordan_form(a)?;
    let tol = eps * a.norm().max(1.0);
    let offending: Vec<Complex64> = jd.eigenvalues().into_iter().filter(|&t| !fun.attains(t, tol)).collect();
    if !offending.is_empty() {
        return Ok(SolveOutcome::NotInDomain { offending });
    }
    let mut pieces = Vec::new();
    let mut witnesses = Vec::new();
    let mut certificates = Vec::new();
    let mut critical_blocks = Vec::new();
    for b in &jd.blocks {
        let t = b.eigenvalue;
        if b.size >= 2 {
            match fun.criticality(t, eps) {
                Criticality::Critical => {
                    certificates.push(certificate(fun, field, t, b.size)?);
                    critical_blocks.push(b.clone());
                    continue;
                }
                Criticality::Ambiguous => {
                    return Err(Error::NumericallyDefective(format!(
                        "cannot decide whether {} is a critical value of {}",
                        field.format_elem(&t),
                        fun.name()
                    )))
                }
                Criticality::NonCritical => {}
            }
        }
        let u = fun.principal_root(t)?;
        pieces.push(chain_preimage(&fun.block_eval(field, u, b.size), &t, &u)?);
        witnesses.push(BlockWitness {
            t,
            size: b.size,
            u,
            derivative: fun.derivative(1, u),
        });
    }
    if !certificates.is_empty() {
        if jd.blocks.len() == 1 {
            return Ok(SolveOutcome::NoPreimage(certificates.remove(0)));
        }
        return Ok(SolveOutcome::Undetermined {
            reason: format!(
                "{} has critical eigenvalues on blocks of size >= 2 and the matrix has {} Jordan blocks",
                fun.name(),
                jd.blocks.len()
            ),
            blocks: critical_blocks,
        });
    }
    let p = &jd.transform;
    let x = p.mul(&Matrix::block_diag(field, &pieces)?)?.mul(&p.inverse()?)?;
    Ok(SolveOutcome::Preimage { x, witnesses })
}

/// `||f(X) - A||_F` against `eps * n * max(1, ||A||_F)`.
pub fn verify_entire(fun: &EntireFunction, x: &Matrix<ComplexField>, a: &Matrix<ComplexField>) -> Result<Verification> {
    let fx = eval_entire(fun, x)?;
    let residual = fx.sub(a)?.norm();
    let pass = residual <= a.field().tolerance() * a.n() as f64 * a.norm().max(1.0);
    Ok(Verification { pass, residual })
}

/// Replays a certificate: `t` is a catalog critical value and every listed
/// point maps to `t` with `f'` vanishing there.
pub fn verify_entire_certificate(fun: &EntireFunction, cert: &CriticalBlockCertificate<ComplexField>) -> bool {
    let eps = cert.field.tolerance();
    let slack = eps.sqrt() * cert.t.norm().max(1.0);
    cert.size >= 2
        && fun.criticality(cert.t, eps) == Criticality::Critical
        && !cert.fiber.is_empty()
        && cert
            .fiber
            .iter()
            .all(|p| (fun.eval(p.u) - cert.t).norm() <= slack && fun.derivative(1, p.u).norm() <= slack)
}
