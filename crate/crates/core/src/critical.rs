//! Critical values: scalars `t` whose fiber `f^-1(t)` lies inside the zero
//! set of `f'`. A polynomial map on matrices is onto exactly when there
//! are none.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{split_on_zero_divisors, ComplexField, Field, FiniteField, NumberField, Rationals};
use crate::poly::{aberth_roots, cluster_roots, complex_roots, critical_resultant, divides_power, scan_roots, Poly};
use crate::split::{lift_poly, SplitField};

/// Margin on floating backends: a fiber root within `eps * max(1,|z|)` of
/// a zero of `f'` counts as critical, one farther than this many times
/// that distance does not, and anything between is ambiguous.
pub const CRITICAL_MARGIN: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criticality {
    Critical,
    NonCritical,
    /// Floating point could not decide.
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint<F: Field> {
    pub u: F::Elem,
    pub multiplicity: usize,
    /// `f'(u)`
    pub derivative: F::Elem,
}

/// Outcome of testing one value, with the fiber it was decided on.
#[derive(Clone, Debug)]
pub struct CriticalCheck<F: Field> {
    pub verdict: Criticality,
    /// Field containing the listed fiber points.
    pub field: F,
    pub fiber: Vec<FiberPoint<F>>,
    /// False when some fiber points lie outside every field the backend
    /// can represent (irrational fibers over Q).
    pub fiber_complete: bool,
}

#[derive(Clone, Debug)]
pub struct CriticalValue<F: Field> {
    pub t: F::Elem,
    /// Smallest field found containing `t`.
    pub field: F,
    pub witness: CriticalCheck<F>,
}

/// Critical values over Q that are not rational: all roots of
/// `minimal_polynomial`, which need not be irreducible but whose roots
/// were shown critical together.
///
/// In characteristic 0 a critical value uses up at least `deg f / 2` of the
/// `deg f - 1` zeros of `f'`, so there is at most one and it is rational.
/// This list therefore stays empty; the exact test does not rely on that.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicCriticalValues {
    pub minimal_polynomial: Poly<Rationals>,
    pub approx: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub enum CriticalSet<F: Field> {
    Empty,
    /// Every value is critical: `f' = 0`, or `f` is constant (then only
    /// its value is attained, and `remark` says so).
    All { remark: Option<String> },
    Finite {
        values: Vec<CriticalValue<F>>,
        algebraic: Vec<AlgebraicCriticalValues>,
        /// Floating-point candidates that fell in the ambiguity band.
        ambiguous: Vec<F::Elem>,
    },
}

impl<F: Field> CriticalSet<F> {
    pub fn is_empty(&self) -> bool {
        matches!(self, CriticalSet::Empty)
    }

    pub fn values(&self) -> &[CriticalValue<F>] {
        match self {
            CriticalSet::Finite { values, .. } => values,
            _ => &[],
        }
    }
}

pub trait CriticalField: SplitField {
    /// Decides whether `t` is a critical value of `f` (same field).
    fn critical_check(f: &Poly<Self>, t: &Self::Elem) -> Result<CriticalCheck<Self>>;

    /// Nonconstant `f` with `f' != 0`: all critical values.
    fn nondegenerate_critical_values(f: &Poly<Self>) -> Result<CriticalSet<Self>>;
}

/// Whether `t` is a critical value of `f`, with the fiber as witness. For
/// a constant `f = c` only `t = c` is critical, with an empty fiber.
pub fn is_critical_value<F: CriticalField>(f: &Poly<F>, t: &F::Elem) -> Result<CriticalCheck<F>> {
    let field = f.field().clone();
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(CriticalCheck {
            verdict: if field.approx_eq(&f.coeff(0), t) {
                Criticality::Critical
            } else {
                Criticality::NonCritical
            },
            field,
            fiber: Vec::new(),
            fiber_complete: true,
        }),
        Some(_) => F::critical_check(f, t),
    }
}

pub fn critical_values<F: CriticalField>(f: &Poly<F>) -> Result<CriticalSet<F>> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(CriticalSet::All {
            remark: Some("constant polynomial: its image is a single scalar matrix".into()),
        }),
        Some(_) if f.derivative().is_zero() => Ok(CriticalSet::All { remark: None }),
        Some(_) => F::nondegenerate_critical_values(f),
    }
}

/// True iff there is no critical value; the answer holds for matrices of
/// every size `n >= 2` at once.
pub fn is_surjective<F: CriticalField>(f: &Poly<F>) -> Result<bool> {
    match critical_values(f)? {
        CriticalSet::Empty => Ok(true),
        CriticalSet::Finite { values, algebraic, ambiguous } if values.is_empty() && algebraic.is_empty() => {
            if ambiguous.is_empty() {
                Ok(true)
            } else {
                Err(Error::NumericallyDefective(format!(
                    "{} candidate critical value(s) could not be decided",
                    ambiguous.len()
                )))
            }
        }
        _ => Ok(false),
    }
}

fn fiber_points<F: Field>(f: &Poly<F>, roots: &[(F::Elem, usize)]) -> Vec<FiberPoint<F>> {
    let fp = f.derivative();
    roots
        .iter()
        .map(|(u, m)| FiberPoint {
            u: u.clone(),
            multiplicity: *m,
            derivative: fp.eval(u),
        })
        .collect()
}

/// Exact backends: `t` is critical iff `f - t` divides `f'^deg f`.
fn exact_check<F: SplitField>(f: &Poly<F>, t: &F::Elem, bound: u32) -> Result<CriticalCheck<F>> {
    let d = f.degree().expect("nonconstant");
    let g = f.sub_constant(t);
    let fp = f.derivative();
    let critical = fp.is_zero() || divides_power(&g, &fp, d as u32)?;
    let split = F::split(&g, bound)?;
    let lifted = lift_poly(f, &split.field)?;
    Ok(CriticalCheck {
        verdict: if critical { Criticality::Critical } else { Criticality::NonCritical },
        fiber: fiber_points(&lifted, &split.roots),
        fiber_complete: split.is_complete(),
        field: split.field,
    })
}

impl CriticalField for FiniteField {
    fn critical_check(f: &Poly<Self>, t: &u64) -> Result<CriticalCheck<Self>> {
        exact_check(f, t, f.degree().expect("nonconstant") as u32)
    }

    /// Candidates are the roots of `Res_x(f - T, f')`; each lies in an
    /// extension of degree at most `deg f'`.
    fn nondegenerate_critical_values(f: &Poly<Self>) -> Result<CriticalSet<Self>> {
        let r = critical_resultant(f)?;
        if r.degree() == Some(0) {
            return Ok(CriticalSet::Empty);
        }
        let bound = f.derivative().degree().expect("nonzero").max(1) as u32;
        let candidates = scan_roots(&r, bound)?;
        let mut values = Vec::new();
        for c in candidates.roots {
            let fe = lift_poly(f, &c.field)?;
            let check = exact_check(&fe, &c.value, fe.degree().expect("nonconstant") as u32)?;
            if check.verdict == Criticality::Critical {
                values.push(CriticalValue {
                    t: c.value,
                    field: c.field,
                    witness: check,
                });
            }
        }
        Ok(finite_or_empty(values, Vec::new(), Vec::new()))
    }
}

fn finite_or_empty<F: Field>(
    values: Vec<CriticalValue<F>>,
    algebraic: Vec<AlgebraicCriticalValues>,
    ambiguous: Vec<F::Elem>,
) -> CriticalSet<F> {
    if values.is_empty() && algebraic.is_empty() && ambiguous.is_empty() {
        CriticalSet::Empty
    } else {
        CriticalSet::Finite { values, algebraic, ambiguous }
    }
}

impl CriticalField for Rationals {
    fn critical_check(f: &Poly<Self>, t: &Self::Elem) -> Result<CriticalCheck<Self>> {
        exact_check(f, t, 1)
    }

    /// The squarefree part of `Res_x(f - T, f')` is taken as the modulus of
    /// a number field and the divisibility test runs at its generator. Zero
    /// divisors split the modulus, so each final factor has roots that are
    /// all critical or all not.
    fn nondegenerate_critical_values(f: &Poly<Self>) -> Result<CriticalSet<Self>> {
        let r = critical_resultant(f)?;
        if r.degree() == Some(0) {
            return Ok(CriticalSet::Empty);
        }
        let d = f.degree().expect("nonconstant") as u32;
        let sqf = r.squarefree_part()?;
        let parts = split_on_zero_divisors(&sqf, |k: &NumberField| {
            let fk = f.map_into(k, |c| k.from_rational(c))?;
            let t = k.generator();
            divides_power(&fk.sub_constant(&t), &fk.derivative(), d)
        })?;
        let mut values = Vec::new();
        let mut algebraic = Vec::new();
        for (m, critical) in parts {
            if !critical {
                continue;
            }
            if m.degree() == Some(1) {
                let t = -m.coeff(0);
                let witness = exact_check(f, &t, 1)?;
                values.push(CriticalValue { t, field: Rationals, witness });
            } else {
                let mc = m.map_into(&ComplexField::default(), |c| ComplexField::default().from_rational(c))?;
                algebraic.push(AlgebraicCriticalValues {
                    minimal_polynomial: m,
                    approx: aberth_roots(&mc)?,
                });
            }
        }
        values.sort_by(|a, b| Rationals.canonical_cmp(&a.t, &b.t));
        Ok(finite_or_empty(values, algebraic, Vec::new()))
    }
}

impl CriticalField for ComplexField {
    /// Each fiber root (clustered, multiple roots polished) is compared
    /// with the zeros of `f'`.
    fn critical_check(f: &Poly<Self>, t: &Complex64) -> Result<CriticalCheck<Self>> {
        let field = *f.field();
        let eps = field.tolerance();
        let g = f.sub_constant(t);
        let fiber = complex_roots(&g)?;
        let fp = f.derivative();
        let zeros: Vec<Complex64> = match fp.degree() {
            None => return Err(Error::DerivativeZero),
            Some(0) => Vec::new(),
            Some(_) => complex_roots(&fp)?.roots.into_iter().map(|r| r.value).collect(),
        };
        let mut all_near = true;
        let mut some_far = false;
        for r in &fiber.roots {
            let dist = zeros.iter().map(|z| (z - r.value).norm()).fold(f64::INFINITY, f64::min);
            let tol = eps * r.value.norm().max(1.0);
            if dist > tol {
                all_near = false;
            }
            if dist > CRITICAL_MARGIN * tol {
                some_far = true;
            }
        }
        let verdict = if all_near {
            Criticality::Critical
        } else if some_far {
            Criticality::NonCritical
        } else {
            Criticality::Ambiguous
        };
        let roots: Vec<(Complex64, usize)> = fiber.roots.iter().map(|r| (r.value, r.multiplicity)).collect();
        Ok(CriticalCheck {
            verdict,
            field,
            fiber: fiber_points(f, &roots),
            fiber_complete: true,
        })
    }

    /// Candidates `f(z)` for the zeros `z` of `f'`, merged when within
    /// `eps^(1/2)` of each other.
    fn nondegenerate_critical_values(f: &Poly<Self>) -> Result<CriticalSet<Self>> {
        let field = *f.field();
        let fp = f.derivative();
        if fp.degree() == Some(0) {
            return Ok(CriticalSet::Empty);
        }
        let zeros = complex_roots(&fp)?;
        let images: Vec<Complex64> = zeros.roots.iter().map(|z| f.eval(&z.value)).collect();
        let candidates = cluster_roots(&images, field.tolerance().sqrt());
        let mut values = Vec::new();
        let mut ambiguous = Vec::new();
        for (t, _) in candidates {
            let check = Self::critical_check(f, &t)?;
            match check.verdict {
                Criticality::Critical => values.push(CriticalValue { t, field, witness: check }),
                Criticality::Ambiguous => ambiguous.push(t),
                Criticality::NonCritical => {}
            }
        }
        Ok(finite_or_empty(values, Vec::new(), ambiguous))
    }
}
