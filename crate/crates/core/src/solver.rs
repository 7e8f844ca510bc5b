//! Preimages `X` with `f(X) = A`, built block by block on the Jordan form
//! of `A`, and certificates when a single Jordan block sits on a critical
//! value.

use crate::critical::{is_critical_value, CriticalField, Criticality, FiberPoint};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{jordan_block_eval, jordan_form, mat_eval_poly, JordanBlock, Matrix};
use crate::poly::Poly;
use crate::split::{lift_matrix, lift_poly, SplitField};

/// The scalar chosen for one Jordan block `J_r(t)` of the target.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockWitness<F: Field> {
    pub t: F::Elem,
    pub size: usize,
    pub u: F::Elem,
    /// `f'(u)`, nonzero whenever `size >= 2`.
    pub derivative: F::Elem,
}

/// Replayable reason why `J_size(t)` has no preimage: every point of the
/// fiber of `t` is a zero of `f'`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalBlockCertificate<F: Field> {
    pub t: F::Elem,
    pub size: usize,
    /// Field containing `t` and the listed fiber points.
    pub field: F,
    pub fiber: Vec<FiberPoint<F>>,
    pub fiber_complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<F: Field> {
    Preimage {
        x: Matrix<F>,
        witnesses: Vec<BlockWitness<F>>,
    },
    NoPreimage(CriticalBlockCertificate<F>),
    /// Some eigenvalue lies outside the image of the scalar function.
    NotInDomain { offending: Vec<F::Elem> },
    /// A block of size at least 2 carries a critical eigenvalue but the
    /// target has other blocks too; membership is not decided here.
    Undetermined {
        reason: String,
        blocks: Vec<JordanBlock<F>>,
    },
}

impl<F: Field> SolveOutcome<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            SolveOutcome::Preimage { .. } => "preimage",
            SolveOutcome::NoPreimage(_) => "no_preimage",
            SolveOutcome::NotInDomain { .. } => "not_in_domain",
            SolveOutcome::Undetermined { .. } => "undetermined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification {
    pub pass: bool,
    /// Frobenius norm of `f(X) - A` (number of wrong entries, as a norm,
    /// on exact backends).
    pub residual: f64,
}

/// Admissible `u` for a block of size `r`: exact backends take the least
/// canonical fiber point (with `f'(u) != 0` when `r >= 2`), floating ones
/// the point with the largest `|f'(u)|`.
fn choose_root<'a, F: Field>(field: &F, fiber: &'a [FiberPoint<F>], r: usize) -> Option<&'a FiberPoint<F>> {
    if field.is_exact() {
        fiber
            .iter()
            .filter(|p| r == 1 || !field.is_zero(&p.derivative))
            .min_by(|a, b| field.canonical_cmp(&a.u, &b.u))
    } else {
        fiber.iter().max_by(|a, b| {
            field
                .magnitude(&a.derivative)
                .total_cmp(&field.magnitude(&b.derivative))
                .then_with(|| field.canonical_cmp(&b.u, &a.u))
        })
    }
}

/// `X` with `f(X) = J_r(t)`, given `f(u) = t` and `f'(u) != 0` (or
/// `r = 1`).
pub fn block_preimage<F: Field>(f: &Poly<F>, t: &F::Elem, u: &F::Elem, r: usize) -> Result<Matrix<F>> {
    chain_preimage(&jordan_block_eval(f, u, r), t, u)
}

/// `X` with `g(X) = J_r(t)` from `image = g(J_r(u))`, for any `g` whose
/// value at a Jordan block is the Toeplitz matrix of its Taylor
/// coefficients at `u`, provided `g'(u) != 0`.
///
/// `image - tI` is then a single nilpotent chain. With
/// `p_j = (image - tI)^(r-j) e_r` as columns of `Q`, `Q^-1 image Q` is
/// `J_r(t)`, and `X = Q^-1 J_r(u) Q` works.
pub fn chain_preimage<F: Field>(image: &Matrix<F>, t: &F::Elem, u: &F::Elem) -> Result<Matrix<F>> {
    let field = image.field().clone();
    let r = image.n();
    if r == 1 {
        return Matrix::from_rows(field, vec![vec![u.clone()]]);
    }
    let nil = image.add_scalar(&field.neg(t));
    let mut v = vec![field.zero(); r];
    v[r - 1] = field.one();
    let mut cols = vec![v];
    for _ in 1..r {
        let next = nil.mul_vec(cols.last().expect("nonempty"));
        cols.push(next);
    }
    cols.reverse();
    let q = Matrix::from_columns(field.clone(), &cols)?;
    q.inverse()?.mul(&Matrix::jordan_block(field, u, r))?.mul(&q)
}

/// Solves `f(X) = J_r(t)` for a single Jordan block.
pub fn solve_block<F: CriticalField>(f: &Poly<F>, t: &F::Elem, r: usize) -> Result<SolveOutcome<F>> {
    if r == 0 {
        return Err(Error::invalid("block size must be at least 1"));
    }
    match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeZero),
        _ => {}
    }
    let check = is_critical_value(f, t)?;
    let field = check.field.clone();
    let t_lifted = f.field().lift(&field, t)?;
    if r >= 2 {
        match check.verdict {
            Criticality::Critical => {
                return Ok(SolveOutcome::NoPreimage(CriticalBlockCertificate {
                    t: t_lifted,
                    size: r,
                    field,
                    fiber: check.fiber,
                    fiber_complete: check.fiber_complete,
                }))
            }
            Criticality::Ambiguous => {
                return Err(Error::NumericallyDefective(format!(
                    "cannot decide whether {} is a critical value",
                    field.format_elem(&t_lifted)
                )))
            }
            Criticality::NonCritical => {}
        }
    }
    let point = choose_root(&field, &check.fiber, r)
        .ok_or_else(|| Error::FiberNotSplit(field.format_elem(&t_lifted)))?;
    let fl = lift_poly(f, &field)?;
    let x = block_preimage(&fl, &t_lifted, &point.u, r)?;
    Ok(SolveOutcome::Preimage {
        x,
        witnesses: vec![BlockWitness {
            t: t_lifted,
            size: r,
            u: point.u.clone(),
            derivative: point.derivative.clone(),
        }],
    })
}

/// Solves `f(X) = A`.
///
/// Every Jordan block `J_r(t)` of `A` is solved on its own and the pieces
/// are conjugated back with the Jordan basis. A block of size `r >= 2` on a
/// critical value has no preimage; if it is the only block this is
/// reported with a certificate, otherwise the outcome is `Undetermined`.
pub fn solve<F: CriticalField>(f: &Poly<F>, a: &Matrix<F>) -> Result<SolveOutcome<F>> {
    crate::field::ensure_same(f.field(), a.field())?;
    match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeZero),
        _ => {}
    }
    let jd = jordan_form(a)?;
    let f0 = lift_poly(f, &jd.field)?;
    let mut pieces = Vec::new();
    let mut certificates = Vec::new();
    let mut critical_blocks = Vec::new();
    for b in &jd.blocks {
        match solve_block(&f0, &b.eigenvalue, b.size)? {
            SolveOutcome::Preimage { x, witnesses } => pieces.push((x, witnesses)),
            SolveOutcome::NoPreimage(c) => {
                certificates.push(c);
                critical_blocks.push(b.clone());
            }
            other => return Ok(other),
        }
    }
    if !certificates.is_empty() {
        if jd.blocks.len() == 1 {
            return Ok(SolveOutcome::NoPreimage(certificates.remove(0)));
        }
        let listed: Vec<String> = critical_blocks
            .iter()
            .map(|b| format!("J_{}({})", b.size, jd.field.format_elem(&b.eigenvalue)))
            .collect();
        return Ok(SolveOutcome::Undetermined {
            reason: format!(
                "blocks {} have critical eigenvalues and the matrix has {} Jordan blocks",
                listed.join(", "),
                jd.blocks.len()
            ),
            blocks: critical_blocks,
        });
    }
    let mut common = jd.field.clone();
    for (x, _) in &pieces {
        common = common.join(x.field())?;
    }
    let mut blocks = Vec::with_capacity(pieces.len());
    let mut witnesses = Vec::new();
    for (x, ws) in pieces {
        let from = x.field().clone();
        blocks.push(lift_matrix(&x, &common)?);
        for w in ws {
            witnesses.push(BlockWitness {
                t: from.lift(&common, &w.t)?,
                size: w.size,
                u: from.lift(&common, &w.u)?,
                derivative: from.lift(&common, &w.derivative)?,
            });
        }
    }
    let p = lift_matrix(&jd.transform, &common)?;
    let x = p.mul(&Matrix::block_diag(common.clone(), &blocks)?)?.mul(&p.inverse()?)?;
    Ok(SolveOutcome::Preimage { x, witnesses })
}

/// Checks `f(X) = A` (exactly, or within `eps * n * max(1, ||A||_F)` on
/// floating backends), after moving everything into a common field.
pub fn verify<F: SplitField>(f: &Poly<F>, x: &Matrix<F>, a: &Matrix<F>) -> Result<Verification> {
    if x.n() != a.n() {
        return Err(Error::ShapeMismatch(format!("X is {0}x{0}, A is {1}x{1}", x.n(), a.n())));
    }
    let common = x.field().join(a.field())?.join(f.field())?;
    let fl = lift_poly(f, &common)?;
    let xl = lift_matrix(x, &common)?;
    let al = lift_matrix(a, &common)?;
    let diff = mat_eval_poly(&fl, &xl)?.sub(&al)?;
    let residual = diff.norm();
    let pass = if common.is_exact() {
        (0..diff.n()).all(|i| (0..diff.n()).all(|j| common.is_zero(diff.get(i, j))))
    } else {
        residual <= common.eps() * a.n() as f64 * al.norm().max(1.0)
    };
    Ok(Verification { pass, residual })
}

/// Replays a certificate: every listed point lies in the fiber of `t` and
/// is a zero of `f'`, the multiplicities cover `deg f` when the fiber is
/// claimed complete, and the divisibility test still calls `t` critical.
pub fn verify_certificate<F: CriticalField>(f: &Poly<F>, cert: &CriticalBlockCertificate<F>) -> Result<bool> {
    let field = &cert.field;
    let common = f.field().join(field)?;
    if &common != field {
        return Ok(false);
    }
    let fl = lift_poly(f, field)?;
    let fp = fl.derivative();
    let d = fl.degree().ok_or(Error::ZeroPolynomial)?;
    let scale = field.magnitude(&cert.t).max(1.0);
    for p in &cert.fiber {
        let value = fl.eval(&p.u);
        let derivative = fp.eval(&p.u);
        let ok = if field.is_exact() {
            value == cert.t && field.is_zero(&derivative) && derivative == p.derivative
        } else {
            let slack = field.eps().sqrt() * scale;
            field.magnitude(&field.sub(&value, &cert.t)) <= slack
        };
        if !ok {
            return Ok(false);
        }
    }
    if cert.fiber_complete && cert.fiber.iter().map(|p| p.multiplicity).sum::<usize>() != d {
        return Ok(false);
    }
    Ok(cert.size >= 2 && is_critical_value(&fl, &cert.t)?.verdict == Criticality::Critical)
}
