mod common;

use common::{rand_matrix, rand_poly};
use matfun::field::FiniteField;
use matfun::report::{envelope, matrix_from_json, matrix_json, poly_from_json, poly_json, replay, solve_report};
use matfun::solver::solve;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn field(i: usize) -> FiniteField {
    [(2, 1), (3, 1), (2, 2), (3, 2)].map(|(p, m)| FiniteField::new(p, m).unwrap())[i].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polys_and_matrices_survive_json(i in 0usize..4, seed in any::<u64>(), d in 0usize..6, n in 1usize..4) {
        let k = field(i);
        let mut rng = StdRng::seed_from_u64(seed);
        let f = rand_poly(&k, d, &mut rng);
        let a = rand_matrix(&k, n, &mut rng);
        prop_assert_eq!(poly_from_json::<FiniteField>(&poly_json(&f)).unwrap(), f);
        prop_assert_eq!(matrix_from_json::<FiniteField>(&matrix_json(&a)).unwrap(), a);
    }

    #[test]
    fn solve_reports_replay(i in 0usize..4, seed in any::<u64>(), d in 1usize..4, n in 1usize..4) {
        let k = field(i);
        let mut rng = StdRng::seed_from_u64(seed);
        let f = rand_poly(&k, d, &mut rng);
        let a = rand_matrix(&k, n, &mut rng);
        let outcome = solve(&f, &a).unwrap();
        let report = envelope("solve", solve_report(&f, &a, &outcome));
        let text = serde_json::to_string(&report).unwrap();
        let r = replay(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.outcome, outcome.kind());
    }
}
