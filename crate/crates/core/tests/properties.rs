mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, ..ProptestConfig::default() })]

    #[test]
    fn groebner_basis_is_idempotent(raw in ideal(3), order in orders()) {
        gb_idempotent(&raw, &order)?;
    }

    #[test]
    fn membership_is_sound(raw in ideal(3), mult in prop::collection::vec(poly_terms(3, 1, 2), 3), rest in poly_terms(3, 3, 4)) {
        membership(&raw, &mult, &rest)?;
    }

    #[test]
    fn syzygies_contract_to_zero(raw in several()) {
        syzygies_contract(&raw)?;
    }

    #[test]
    fn elimination_drops_the_variable(raw in ideal(3), var in 0usize..3) {
        elimination_sound(&raw, var)?;
    }

    #[test]
    fn generic_hyperplane_drops_dimension(raw in homogeneous_ideal(), line in generic_line()) {
        dimension_drops(&raw, &line)?;
    }

    #[test]
    fn weyl_product_is_associative(a in weyl_terms(), b in weyl_terms(), c in weyl_terms()) {
        weyl_associative(&a, &b, &c)?;
    }

    #[test]
    fn total_symbols_multiply(a in weyl_terms(), b in weyl_terms(), c in weyl_terms()) {
        pbw_symbols(&a, &b, &c)?;
    }
}
