mod support;

use dgha_core::{Fp, Rational};
use proptest::prelude::*;
use support::linalg::*;

macro_rules! field_suite {
    ($name:ident, $s:ty) => {
        mod $name {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(CASES))]

                #[test]
                fn rank_plus_nullity(m in rank_nullity_case::<$s>()) {
                    rank_nullity(&m)?;
                }

                #[test]
                fn solve_decides_membership((m, x, b) in solve_case::<$s>()) {
                    solve_membership(&m, &x, &b)?;
                }

                #[test]
                fn quotient_dimension((m, mix, probe) in quotient_case::<$s>()) {
                    quotient_dimensions(&m, &mix, &probe)?;
                }
            }
        }
    };
}

field_suite!(rationals, Rational);
field_suite!(gf2, Fp<2>);
field_suite!(gf3, Fp<3>);
field_suite!(gf65521, Fp<65521>);
field_suite!(gf_mersenne31, Fp<2147483647>);
