use etale_core::classify::{is_etale, is_smooth_of_dim, is_unramified};
use etale_core::corering::{Field, Monomial, Polynomial, Ring};
use etale_core::scheme::{jacobian_at, rational_points, FpAlgebra};
use proptest::prelude::*;

fn scheme(field: Field, coeffs: &[Vec<i64>]) -> FpAlgebra {
    let ring = Ring::new(field, ["x", "y"]);
    let mons = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
    let rels = coeffs
        .iter()
        .map(|cs| {
            Polynomial::from_terms(
                &ring,
                cs.iter().zip(&mons).map(|(&c, e)| (Monomial::new(e.to_vec()), field.from_i64(c))),
            )
        })
        .collect();
    FpAlgebra::new(&ring, rels).unwrap()
}

fn relations() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn verdicts_are_consistent_and_recheck(rels in relations(), prime in prop::bool::ANY) {
        let field = if prime { Field::Prime(5) } else { Field::Rationals };
        let a = scheme(field, &rels);
        let u = is_unramified(&a).unwrap();
        let e = is_etale(&a).unwrap();
        let s0 = is_smooth_of_dim(&a, 0).unwrap();
        prop_assert_eq!(e.value, u.value && s0.value);
        for v in [&u, &e, &s0] {
            if v.value {
                prop_assert!(v.recheck(&a).unwrap());
            }
        }
    }

    #[test]
    fn smooth_points_have_full_rank_jacobians(rels in relations()) {
        let a = scheme(Field::Prime(5), &rels);
        for k in 0..=2 {
            if !is_smooth_of_dim(&a, k).unwrap().value {
                continue;
            }
            for x in rational_points(&a, 1_000).unwrap() {
                prop_assert_eq!(jacobian_at(&a, &x).unwrap().rank(), 2 - k);
            }
        }
    }
}
