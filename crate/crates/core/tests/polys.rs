mod common;

use common::{fq, monic_polys, rand_elem, rand_poly, small_field};
use matfun::field::{Field, Rationals};
use matfun::poly::{critical_resultant, divides_power, scan_roots, Poly};
use matfun::split::lift_poly;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn divides_power_matches_explicit_power() {
    for k in [fq(2, 1), fq(3, 1)] {
        let polys = monic_polys(&k, 4);
        for g in &polys {
            for h in polys.iter().step_by(3) {
                for n in 1..=4u32 {
                    let explicit = h.pow(n).unwrap().rem(g).unwrap().is_zero();
                    assert_eq!(divides_power(g, h, n).unwrap(), explicit, "g={g} h={h} n={n}");
                }
            }
        }
    }
}

#[test]
fn critical_resultant_over_q_vanishes_at_images_of_critical_points() {
    let f = Poly::from_ints(Rationals, &[0, -3, 0, 1]);
    let r = critical_resultant(&f).unwrap();
    assert_eq!(r.degree(), Some(2));
    for t in [2, -2] {
        assert!(r.eval(&Rationals.from_int(t)) == Rationals.zero());
    }
}

fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn derivative_is_linear_and_leibniz(i in 0usize..7, seed in any::<u64>(), da in 0usize..7, db in 0usize..7) {
        let k = small_field(i);
        let mut rng = seeded(seed);
        let a = rand_poly(&k, da, &mut rng);
        let b = rand_poly(&k, db, &mut rng);
        let c = rand_elem(&k, &mut rng);
        let lhs = a.scale(&c).add(&b).unwrap().derivative();
        prop_assert_eq!(lhs, a.derivative().scale(&c).add(&b.derivative()).unwrap());
        let prod = a.mul(&b).unwrap().derivative();
        let leibniz = a.derivative().mul(&b).unwrap().add(&a.mul(&b.derivative()).unwrap()).unwrap();
        prop_assert_eq!(prod, leibniz);
    }

    #[test]
    fn gcd_divides_and_bezout_holds(i in 0usize..7, seed in any::<u64>(), da in 1usize..6, db in 1usize..6, dc in 0usize..3) {
        let k = small_field(i);
        let mut rng = seeded(seed);
        let common = rand_poly(&k, dc, &mut rng);
        let a = rand_poly(&k, da, &mut rng).mul(&common).unwrap();
        let b = rand_poly(&k, db, &mut rng).mul(&common).unwrap();
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        prop_assert_eq!(&g, &a.gcd(&b).unwrap());
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        prop_assert!(g.rem(&common.monic().unwrap()).unwrap().is_zero());
        prop_assert_eq!(s.mul(&a).unwrap().add(&t.mul(&b).unwrap()).unwrap(), g);
    }

    #[test]
    fn divrem_reconstructs(i in 0usize..7, seed in any::<u64>(), da in 0usize..8, db in 0usize..5) {
        let k = small_field(i);
        let mut rng = seeded(seed);
        let a = rand_poly(&k, da, &mut rng);
        let b = rand_poly(&k, db, &mut rng);
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn scanned_roots_are_complete(i in 0usize..4, seed in any::<u64>(), d in 1usize..5) {
        let k = small_field(i);
        let f = rand_poly(&k, d, &mut seeded(seed));
        let roots = scan_roots(&f, d as u32).unwrap();
        prop_assert!(roots.is_complete());
        for r in &roots.roots {
            let lifted = lift_poly(&f, &r.field).unwrap();
            prop_assert!(r.field.is_zero(&lifted.eval(&r.value)));
            prop_assert_eq!(r.field.is_zero(&lifted.derivative().eval(&r.value)), r.multiplicity > 1);
        }
    }

    #[test]
    fn critical_resultant_vanishes_at_critical_images(i in 0usize..4, seed in any::<u64>(), d in 2usize..6) {
        let k = small_field(i);
        let f = rand_poly(&k, d, &mut seeded(seed));
        let fp = f.derivative();
        prop_assume!(fp.degree().is_some_and(|e| e > 0));
        let r = critical_resultant(&f).unwrap();
        prop_assert_eq!(r.degree(), fp.degree());
        let zeros = scan_roots(&fp, fp.degree().unwrap() as u32).unwrap();
        for z in &zeros.roots {
            let fl = lift_poly(&f, &z.field).unwrap();
            let rl = lift_poly(&r, &z.field).unwrap();
            prop_assert!(z.field.is_zero(&rl.eval(&fl.eval(&z.value))));
        }
    }
}
