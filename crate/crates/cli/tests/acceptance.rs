//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use matfun::critical::{critical_values, is_critical_value, is_surjective, CriticalSet, Criticality};
use matfun::entire::{catalog, eval_entire, solve_entire};
use matfun::field::{ComplexField, Field, FiniteField, Rationals};
use matfun::matrix::{block_count, jordan_block_eval, mat_eval_poly, Matrix};
use matfun::oracle::{minimal_representative, oracle_critical_values, oracle_image_search, OracleCriticalSet, OracleVerdict};
use matfun::poly::Poly;
use matfun::solver::{solve, verify, verify_certificate, SolveOutcome};
use matfun::split::lift_poly;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn fq(p: u64, m: u32) -> FiniteField {
    FiniteField::new(p, m).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rand_elem(k: &FiniteField, rng: &mut StdRng) -> u64 {
    rng.gen_range(0..k.size())
}

fn rand_poly(k: &FiniteField, deg: usize, rng: &mut StdRng) -> Poly<FiniteField> {
    let mut c: Vec<u64> = (0..deg).map(|_| rand_elem(k, rng)).collect();
    c.push(rng.gen_range(1..k.size()));
    Poly::new(k.clone(), c)
}

fn rand_rational(rng: &mut StdRng) -> BigRational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn rand_invertible<F: Field>(k: &F, n: usize, mut entry: impl FnMut() -> F::Elem) -> Matrix<F> {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| entry()).collect()).collect();
        let m = Matrix::from_rows(k.clone(), rows).unwrap();
        if m.inverse().is_ok() {
            return m;
        }
    }
}

fn conjugate<F: Field>(s: &Matrix<F>, a: &Matrix<F>) -> Matrix<F> {
    s.mul(a).unwrap().mul(&s.inverse().unwrap()).unwrap()
}

fn monic_polys(k: &FiniteField, max_deg: usize) -> Vec<Poly<FiniteField>> {
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

fn c1() -> Check {
    let start = Instant::now();
    let f = Poly::from_ints(Rationals, &[0, 0, 1]);
    let set = critical_values(&f).map_err(|e| e.to_string())?;
    let ts: Vec<BigRational> = set.values().iter().map(|v| v.t.clone()).collect();
    ensure(ts == vec![q(0, 1)], || format!("critical set {ts:?}"))?;
    ensure(!is_surjective(&f).unwrap(), || "reported surjective".into())?;
    let j = Matrix::from_ints(Rationals, &[&[0, 1], &[0, 0]]).unwrap();
    match solve(&f, &j).unwrap() {
        SolveOutcome::NoPreimage(cert) => {
            ensure(verify_certificate(&f, &cert).unwrap(), || "certificate does not replay".into())?
        }
        other => return Err(format!("expected NoPreimage, got {}", other.kind())),
    }
    within(start, Duration::from_secs(1))?;
    Ok("critical set {0}, not surjective, J2(0) certified".into())
}

fn c2() -> Check {
    let start = Instant::now();
    let k = fq(2, 1);
    let f = Poly::from_ints(k.clone(), &[0, 1, 1]);
    ensure(critical_values(&f).unwrap().is_empty(), || "critical set not empty".into())?;
    ensure(is_surjective(&f).unwrap(), || "not surjective".into())?;
    let mut max_degree = 1;
    for code in 0u64..16 {
        let e: Vec<u64> = (0..4).map(|i| (code >> (3 - i)) & 1).collect();
        let a = Matrix::from_rows(k.clone(), vec![vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap();
        match solve(&f, &a).map_err(|err| format!("{a}: {err}"))? {
            SolveOutcome::Preimage { x, .. } => {
                ensure(verify(&f, &x, &a).unwrap().pass, || format!("{a}: preimage does not verify"))?;
                max_degree = max_degree.max(x.field().degree());
            }
            other => return Err(format!("{a}: {}", other.kind())),
        }
    }
    ensure(max_degree <= 4, || format!("needed F_2^{max_degree}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("16/16 matrices solved, largest field F_2^{max_degree}"))
}

fn c3() -> Check {
    let start = Instant::now();
    let cases = [
        (fq(2, 1), vec![0, 1, 0, 0, 1], 3),
        (fq(3, 1), vec![0, 0, 0, 1, 1], 2),
        (fq(5, 1), vec![0, -3, 0, 1], 2),
    ];
    for (k, c, m) in cases {
        let f = Poly::from_ints(k.clone(), &c);
        ensure(is_surjective(&f).unwrap(), || format!("{f} over {} not surjective", k.describe()))?;
        for e in 1..=m {
            let o = oracle_critical_values(&f, e).map_err(|err| err.to_string())?;
            ensure(o == OracleCriticalSet::Values(vec![]), || format!("oracle found {o:?} for {f}"))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("x^4+x/F2, x^4+x^3/F3, x^3-3x/F5 surjective; oracle agrees".into())
}

fn c4() -> Check {
    let mut rng = StdRng::seed_from_u64(4);
    let fields = [fq(2, 1), fq(3, 1), fq(5, 1), fq(7, 1), fq(2, 2), fq(2, 3), fq(3, 2), fq(5, 2)];
    for i in 0..500 {
        let deg = rng.gen_range(0..=8);
        let r = rng.gen_range(1..=6);
        if i % 5 == 4 {
            let coeffs: Vec<BigRational> = (0..=deg).map(|_| rand_rational(&mut rng)).collect();
            let f = Poly::new(Rationals, coeffs);
            let lambda = rand_rational(&mut rng);
            let lhs = jordan_block_eval(&f, &lambda, r);
            let rhs = mat_eval_poly(&f, &Matrix::jordan_block(Rationals, &lambda, r)).unwrap();
            ensure(lhs == rhs, || format!("Q: f={f}, lambda={lambda}, r={r}"))?;
        } else {
            let k = &fields[rng.gen_range(0..fields.len())];
            let f = rand_poly(k, deg, &mut rng);
            let lambda = rand_elem(k, &mut rng);
            let lhs = jordan_block_eval(&f, &lambda, r);
            let rhs = mat_eval_poly(&f, &Matrix::jordan_block(k.clone(), &lambda, r)).unwrap();
            ensure(lhs == rhs, || format!("{}: f={f}, lambda={lambda}, r={r}", k.describe()))?;
        }
    }
    Ok("500 triples agree exactly".into())
}

fn c5() -> Check {
    let mut rng = StdRng::seed_from_u64(5);
    let fields = [fq(2, 1), fq(3, 1), fq(5, 1), fq(2, 2), fq(3, 2)];
    let mut critical = 0;
    for _ in 0..200 {
        let k = &fields[rng.gen_range(0..fields.len())];
        let f = rand_poly(k, rng.gen_range(1..=6), &mut rng);
        let u = rand_elem(k, &mut rng);
        let r = rng.gen_range(2..=5);
        let image = mat_eval_poly(&f, &Matrix::jordan_block(k.clone(), &u, r)).unwrap();
        let blocks = block_count(&image, &f.eval(&u)).unwrap();
        let vanishes = k.is_zero(&f.derivative().eval(&u));
        critical += vanishes as usize;
        ensure((blocks >= 2) == vanishes, || format!("{}: f={f}, u={u}, r={r}: {blocks} blocks", k.describe()))?;
    }
    Ok(format!("200 triples, {critical} with f'(u)=0"))
}

fn c6() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    let fields = [fq(2, 1), fq(3, 1), fq(5, 1), fq(7, 1), fq(2, 2), fq(3, 2)];
    let mut done = 0;
    while done < 100 {
        let k = &fields[rng.gen_range(0..fields.len())];
        let f = rand_poly(k, rng.gen_range(1..=4), &mut rng);
        if f.derivative().is_zero() {
            continue;
        }
        let good: Vec<u64> = k
            .elements()
            .filter(|t| is_critical_value(&f, t).unwrap().verdict == Criticality::NonCritical)
            .collect();
        if good.is_empty() {
            continue;
        }
        let n = rng.gen_range(1..=4);
        let mut blocks = Vec::new();
        let mut left = n;
        while left > 0 {
            let size = rng.gen_range(1..=left);
            let t = good[rng.gen_range(0..good.len())];
            blocks.push(Matrix::jordan_block(k.clone(), &t, size));
            left -= size;
        }
        let j = Matrix::block_diag(k.clone(), &blocks).unwrap();
        let s = rand_invertible(k, n, || rng.gen_range(0..k.size()));
        let a = conjugate(&s, &j);
        match solve(&f, &a).map_err(|e| format!("f={f}, A={a}: {e}"))? {
            SolveOutcome::Preimage { x, .. } => {
                ensure(verify(&f, &x, &a).unwrap().pass, || format!("f={f}, A={a}: does not verify"))?
            }
            other => return Err(format!("f={f}, A={a}: {}", other.kind())),
        }
        done += 1;
    }
    let c = ComplexField::default();
    let f = Poly::from_ints(c, &[0, -3, 0, 1]);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rows = (0..3)
            .map(|_| (0..3).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let a = Matrix::from_rows(c, rows).unwrap();
        match solve(&f, &a).map_err(|e| e.to_string())? {
            SolveOutcome::Preimage { x, .. } => {
                let v = verify(&f, &x, &a).unwrap();
                worst = worst.max(v.residual);
                ensure(v.residual <= 1e-6, || format!("residual {:.3e}", v.residual))?;
            }
            other => return Err(format!("numeric: {}", other.kind())),
        }
    }
    Ok(format!("100 exact round trips; numeric worst residual {worst:.2e}"))
}

fn c7() -> Check {
    let start = Instant::now();
    let mut polys = 0;
    let mut searches = 0;
    for k in [fq(2, 1), fq(3, 1)] {
        for f in monic_polys(&k, 4) {
            polys += 1;
            let criterion = critical_values(&f).map_err(|e| format!("{f}: {e}"))?;
            let mut oracle: Vec<(u32, u64)> = Vec::new();
            let mut oracle_all = false;
            for m in 1..=3 {
                match oracle_critical_values(&f, m).map_err(|e| format!("{f}: {e}"))? {
                    OracleCriticalSet::All => oracle_all = true,
                    OracleCriticalSet::Values(vs) => oracle.extend(vs.iter().map(|v| v.key())),
                }
            }
            oracle.sort();
            oracle.dedup();
            // (field of t, t) pairs to probe with J_2(t)
            let probes: Vec<(FiniteField, u64)> = match &criterion {
                CriticalSet::All { .. } => {
                    ensure(oracle_all, || format!("{f}: criterion All, oracle finite"))?;
                    k.elements().map(|t| (k.clone(), t)).collect()
                }
                set => {
                    ensure(!oracle_all, || format!("{f}: oracle All, criterion finite"))?;
                    let mut keys = Vec::new();
                    let mut probes = Vec::new();
                    for v in set.values() {
                        let rep = minimal_representative(&v.field, v.t).unwrap();
                        keys.push(rep.key());
                        probes.push((v.field.clone(), v.t));
                    }
                    keys.sort();
                    ensure(keys == oracle, || format!("{f}: criterion {keys:?}, oracle {oracle:?}"))?;
                    probes
                }
            };
            for (field, t) in probes {
                let fl = lift_poly(&f, &field).unwrap();
                let j = Matrix::jordan_block(field.clone(), &t, 2);
                match solve(&fl, &j).map_err(|e| e.to_string())? {
                    SolveOutcome::NoPreimage(_) => {}
                    other => return Err(format!("{f}, t={t}: solve gave {}", other.kind())),
                }
                // largest extension whose 2x2 search stays below 2^17 candidates
                let bound = (1..=8u32)
                    .take_while(|e| (field.size() as f64).powi(4 * *e as i32) <= (1u64 << 17) as f64)
                    .last()
                    .unwrap_or(1);
                let r = oracle_image_search(&fl, &j, bound).map_err(|e| e.to_string())?;
                searches += 1;
                ensure(r.verdict == OracleVerdict::ExhaustedNoneFound, || {
                    format!("{f}, t={t}: oracle found a preimage")
                })?;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{polys} polynomials agree; {searches} J2(t) searches exhausted"))
}

fn c8() -> Check {
    let k = fq(3, 1);
    let f = Poly::from_ints(k.clone(), &[0, 0, 1]);
    let j = Matrix::jordan_block(k.clone(), &0, 2);
    let a = Matrix::block_diag(k.clone(), &[j.clone(), j]).unwrap();
    let o = solve(&f, &a).map_err(|e| e.to_string())?;
    ensure(matches!(o, SolveOutcome::Undetermined { .. }), || format!("solve gave {}", o.kind()))?;
    let status = Command::new(env!("CARGO_BIN_EXE_matfun"))
        .args(["solve", "--poly", "x^2", "--backend", "F3", "--matrix", "[[0,1,0,0],[0,0,0,0],[0,0,0,1],[0,0,0,0]]"])
        .output()
        .map_err(|e| e.to_string())?
        .status;
    ensure(status.code() == Some(2), || format!("CLI exit {status}"))?;
    let r = oracle_image_search(&f, &a, 1).map_err(|e| e.to_string())?;
    match r.verdict {
        OracleVerdict::Found { x, .. } => {
            ensure(verify(&f, &x, &a).unwrap().pass, || "oracle witness does not verify".into())?;
            Ok(format!("Undetermined (exit 2); oracle found X after {} candidates", r.candidates_tested))
        }
        OracleVerdict::ExhaustedNoneFound => Err("oracle found nothing".into()),
    }
}

fn c9() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    let c = ComplexField::default();
    let exp = catalog("exp").unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let a = rand_invertible(&c, n, || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        match solve_entire(&exp, &a).map_err(|e| e.to_string())? {
            SolveOutcome::Preimage { x, .. } => {
                let back = eval_entire(&exp, &x).map_err(|e| e.to_string())?;
                let res = back.sub(&a).unwrap().norm();
                worst = worst.max(res);
                ensure(res <= 1e-6, || format!("exp round trip residual {res:.3e}"))?;
            }
            other => return Err(format!("exp: {}", other.kind())),
        }
    }
    let singular = Matrix::from_ints(c, &[&[1, 2], &[2, 4]]).unwrap();
    let o = solve_entire(&exp, &singular).map_err(|e| e.to_string())?;
    ensure(matches!(o, SolveOutcome::NotInDomain { .. }), || format!("singular: {}", o.kind()))?;
    let sin = catalog("sin").unwrap();
    for t in [1, -1] {
        let j = Matrix::from_ints(c, &[&[t, 1], &[0, t]]).unwrap();
        let o = solve_entire(&sin, &j).map_err(|e| e.to_string())?;
        ensure(matches!(o, SolveOutcome::NoPreimage(_)), || format!("sin on J2({t}): {}", o.kind()))?;
    }
    let cos = catalog("cos").unwrap();
    let mut pyth: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|_| (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let raw = Matrix::from_rows(c, rows).unwrap();
        let a = raw.scale(&Complex64::new(rng.gen_range(0.1..2.0) / raw.norm(), 0.0));
        let s = eval_entire(&sin, &a).map_err(|e| e.to_string())?;
        let co = eval_entire(&cos, &a).map_err(|e| e.to_string())?;
        let sum = s.mul(&s).unwrap().add(&co.mul(&co).unwrap()).unwrap();
        let res = sum.sub(&Matrix::identity(c, n)).unwrap().norm();
        pyth = pyth.max(res);
        ensure(res <= 1e-8, || format!("sin^2+cos^2 residual {res:.3e}"))?;
    }
    Ok(format!("exp worst residual {worst:.2e}; sin^2+cos^2 worst {pyth:.2e}"))
}

fn c10() -> Check {
    let f = Poly::from_ints(Rationals, &[0, 0, 1]);
    let a = Matrix::from_ints(Rationals, &[&[1, 1], &[0, 1]]).unwrap();
    let expected = Matrix::from_rows(Rationals, vec![vec![q(1, 1), q(1, 2)], vec![q(0, 1), q(1, 1)]]).unwrap();
    match solve(&f, &a).map_err(|e| e.to_string())? {
        SolveOutcome::Preimage { x, witnesses } => {
            ensure(x == expected, || format!("got {x}"))?;
            ensure(witnesses[0].u == q(1, 1), || "root choice is not u=1".into())?;
            ensure(x.mul(&x).unwrap() == a, || "X^2 != A".into())?;
            Ok("X = [[1,1/2],[0,1]], X^2 = A exactly".into())
        }
        other => Err(other.kind().into()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("quadratic obstruction over Q", c1),
        ("char-2 quadratic over F_2", c2),
        ("char-p surjective families", c3),
        ("Jordan block evaluation formula", c4),
        ("block count vs f'(u)", c5),
        ("round-trip solve", c6),
        ("oracle concordance", c7),
        ("gray-zone demonstration", c8),
        ("entire catalog", c9),
        ("worked example", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({took:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
