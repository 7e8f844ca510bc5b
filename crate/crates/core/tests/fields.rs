mod common;

use common::{fq, small_field, SMALL_FIELDS};
use matfun::field::{Embedding, Field};
use proptest::prelude::*;

#[test]
fn every_nonzero_element_has_an_inverse() {
    for (p, m) in SMALL_FIELDS {
        let k = fq(p, m);
        for x in k.elements().skip(1) {
            let y = k.inv(&x).unwrap();
            assert_eq!(k.mul(&x, &y), k.one(), "{} {x}", k.describe());
        }
        assert!(k.inv(&0).is_err());
    }
}

#[test]
fn frobenius_fixes_exactly_the_prime_field() {
    for (p, m) in SMALL_FIELDS {
        let k = fq(p, m);
        let fixed = k.elements().filter(|x| k.pow(x, p) == *x).count() as u64;
        assert_eq!(fixed, p);
        assert!(k.elements().all(|x| k.pow(&x, k.size()) == x));
    }
}

#[test]
fn extension_towers_commute() {
    for (p, a, b) in [(2, 1, 2), (2, 2, 2), (2, 2, 3), (3, 1, 2), (3, 2, 2), (2, 3, 2)] {
        let base = fq(p, a);
        let (mid, e1) = base.extend(b).unwrap();
        let (top, e2) = mid.extend(2).unwrap();
        let (direct, e3) = base.extend(2 * b).unwrap();
        assert_eq!(top, direct);
        for x in base.elements() {
            assert_eq!(e2.apply(e1.apply(x)), e3.apply(x), "F_{p}^{a} x={x}");
        }
    }
}

#[test]
fn embeddings_are_ring_maps() {
    for (p, a, m) in [(2, 2, 4), (2, 3, 6), (3, 1, 4), (5, 1, 2), (2, 1, 5)] {
        let src = fq(p, a);
        let dst = fq(p, m);
        let e = Embedding::new(&src, &dst).unwrap();
        for x in src.elements() {
            for y in src.elements() {
                assert_eq!(e.apply(src.add(&x, &y)), dst.add(&e.apply(x), &e.apply(y)));
                assert_eq!(e.apply(src.mul(&x, &y)), dst.mul(&e.apply(x), &e.apply(y)));
            }
        }
    }
}

#[test]
fn embedding_into_non_superfield_fails() {
    assert!(Embedding::new(&fq(2, 2), &fq(2, 3)).is_err());
    assert!(Embedding::new(&fq(3, 1), &fq(2, 2)).is_err());
}

proptest! {
    #[test]
    fn field_axioms(i in 0usize..7, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let k = small_field(i);
        let (a, b, c) = (a % k.size(), b % k.size(), c % k.size());
        prop_assert_eq!(k.add(&a, &b), k.add(&b, &a));
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert_eq!(k.add(&k.add(&a, &b), &c), k.add(&a, &k.add(&b, &c)));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.add(&a, &k.neg(&a)), k.zero());
        prop_assert_eq!(k.sub(&a, &b), k.add(&a, &k.neg(&b)));
        prop_assert_eq!(k.mul(&a, &k.one()), a);
    }

    #[test]
    fn restrict_inverts_embedding(i in 0usize..7, x in any::<u64>(), m in 2u32..4) {
        let k = small_field(i);
        let x = x % k.size();
        let (big, e) = k.extend(m).unwrap();
        prop_assert_eq!(big.restrict(&k, e.apply(x)).unwrap(), Some(x));
        prop_assert!(k.element_degree(x) <= k.degree());
    }
}
