//! Exact scalars and sparse multivariate polynomials.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{is_prime, Field, Scalar, MAX_PRIME};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use parse::{parse_poly, parse_scalar};
pub use poly::{cmp_polys, Polynomial, Ring};

#[cfg(test)]
mod laws {
    use super::*;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ring(field: Field) -> Arc<Ring> {
        Ring::new(field, ["x", "y"])
    }

    fn poly_strategy(field: Field) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((-6i64..6, 0u32..3, 0u32..3), 0..5).prop_map(move |terms| {
            let r = ring(field);
            Polynomial::from_terms(
                &r,
                terms
                    .into_iter()
                    .map(|(c, a, b)| (Monomial::new(vec![a, b]), field.from_i64(c))),
            )
        })
    }

    fn point(field: Field) -> impl Strategy<Value = Vec<Scalar>> {
        proptest::collection::vec(-7i64..7, 2)
            .prop_map(move |v| v.into_iter().map(|c| field.from_i64(c)).collect())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_strategy(Field::Rationals), b in poly_strategy(Field::Rationals), c in poly_strategy(Field::Rationals)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn leibniz_rule(a in poly_strategy(Field::Rationals), b in poly_strategy(Field::Rationals), j in 0usize..2) {
            let lhs = (&a * &b).partial_derivative(j).unwrap();
            let rhs = &(&a * &b.partial_derivative(j).unwrap()) + &(&b * &a.partial_derivative(j).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivative_is_linear(a in poly_strategy(Field::Prime(5)), b in poly_strategy(Field::Prime(5)), j in 0usize..2) {
            prop_assert_eq!(
                (&a + &b).partial_derivative(j).unwrap(),
                &a.partial_derivative(j).unwrap() + &b.partial_derivative(j).unwrap()
            );
        }

        #[test]
        fn eval_is_a_homomorphism(a in poly_strategy(Field::Rationals), b in poly_strategy(Field::Rationals), x in point(Field::Rationals)) {
            let (ea, eb) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
            prop_assert_eq!((&a + &b).eval(&x).unwrap(), &ea + &eb);
            prop_assert_eq!((&a * &b).eval(&x).unwrap(), &ea * &eb);
        }

        #[test]
        fn frobenius(a in poly_strategy(Field::Prime(3)), x in point(Field::Prime(3))) {
            prop_assert_eq!(a.pow(3).eval(&x).unwrap(), a.eval(&x).unwrap().pow(3));
        }
    }
}
