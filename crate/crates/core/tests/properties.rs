mod common;

use common::gauss;
use common::props::{self, input};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fractional_norm(i in input()) { props::fractional_norm(&i)?; }

    #[test]
    fn action_zero(i in input()) { props::action_zero(&i)?; }

    #[test]
    fn unit_discriminant(i in input()) { props::unit_discriminant(&i)?; }

    #[test]
    fn equivalence_ray_class(i in input()) { props::equivalence_ray_class(&i)?; }

    #[test]
    fn lift_congruence(i in input()) { props::lift_congruence(&i)?; }

    #[test]
    fn decompose_congruence(i in input()) { props::decompose_congruence(&i)?; }

    #[test]
    fn setup_determinant(i in input()) { props::setup_determinant(&i)?; }

    #[test]
    fn reflex_norm_congruence(i in input()) { props::reflex_norm_congruence(&i)?; }

    #[test]
    fn regular_rep_multiplicative(i in input()) { props::regular_rep_multiplicative(&i)?; }

    #[test]
    fn action_composition(i in input()) { props::action_composition(&i)?; }

    #[test]
    fn point_round_trip(i in input()) { props::point_round_trip(&i)?; }

    #[test]
    fn basis_independence(i in input()) { props::basis_independence(&i)?; }
}

#[test]
fn gauss_oracle_agrees_with_reduced_form_count() {
    for (d, h) in [(-3, 1), (-4, 1), (-23, 3), (-47, 5), (-71, 7)] {
        let forms = gauss::reduced_forms(d);
        assert_eq!(forms.len(), h);
        for &f in &forms {
            for &g in &forms {
                assert!(forms.contains(&gauss::compose(f, g)));
            }
        }
    }
}
