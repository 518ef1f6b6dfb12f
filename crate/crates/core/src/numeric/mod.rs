//! Exact rational scalars and dense linear algebra.

mod matrix;
mod rational;

pub use matrix::{
    add_vec, dot, gauss_solve, neg_vec, scale_vec, sub_vec, unit_vector, Matrix, Vector,
};
pub use rational::{rat_parse, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: String, expected: usize, found: usize },
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Shorthand for `num/den`; panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}

/// Parses a slice of rational strings.
pub fn parse_vector<S: AsRef<str>>(items: &[S]) -> Result<Vector, NumericError> {
    items.iter().map(|s| rat_parse(s.as_ref())).collect()
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| frac(n, d))
    }

    fn wide_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn field_laws(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a);
            }
        }

        #[test]
        fn wide_values_stay_exact(a in wide_rational(), b in wide_rational(), c in wide_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(rat_parse(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn gauss_solution_is_exact(entries in proptest::collection::vec(-5i64..6, 9),
                                   rhs in proptest::collection::vec(-5i64..6, 3)) {
            let m = Matrix::from_rows(entries.chunks(3).map(|r| r.iter().map(|&x| int(x)).collect()).collect(), 3).unwrap();
            let r: Vector = rhs.iter().map(|&x| int(x)).collect();
            match gauss_solve(&m, &r).unwrap() {
                Some(v) => prop_assert_eq!(m.mul_vec(&v).unwrap(), r),
                None => prop_assert!(m.rank() < 3),
            }
        }
    }
}
