mod common;

use std::collections::BTreeMap;

use backforth::algebra::{moments, AlgebraElement, GaussScalar, DEFAULT_SUPPORT_CAP};
use backforth::games::bf_sym;
use backforth::groups::{parse_group, Group};
use backforth::structures::{all_binary_relation_structures, Elem, SortedTuple};
use common::{laurent_moments, NaiveGame};
use proptest::prelude::*;

fn laurent(z: &Group, coeffs: &BTreeMap<i64, i64>) -> AlgebraElement {
    let text: Vec<String> = coeffs.iter().map(|(i, c)| format!("{c}*u[{i}]")).collect();
    AlgebraElement::parse(z, &text.join(" + ")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moments_match_laurent_convolution(coeffs in prop::collection::btree_map(-3i64..=3, -2i64..=2, 1..4)) {
        let z = parse_group("Z").unwrap();
        let coeffs: BTreeMap<i64, i64> = coeffs.into_iter().filter(|(_, c)| *c != 0).collect();
        prop_assume!(!coeffs.is_empty());
        let got = moments(&laurent(&z, &coeffs), 5, DEFAULT_SUPPORT_CAP).unwrap();
        let want: Vec<GaussScalar> = laurent_moments(&coeffs, 5).into_iter().map(|m| GaussScalar::from_ints(m, 0)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn bf_sym_matches_naive_game_on_tuples(
        si in 0usize..16, ti in 0usize..16,
        a in prop::collection::vec(0usize..2, 0..3),
        b in prop::collection::vec(0usize..2, 0..3),
        alpha in 0u32..3,
    ) {
        let corpus = all_binary_relation_structures(2);
        let (s, t) = (&corpus[si], &corpus[ti]);
        let b: Vec<usize> = b.into_iter().chain(std::iter::repeat(0)).take(a.len()).collect();
        let a: Vec<Elem> = a.into_iter().map(|i| Elem::new(0, i)).collect();
        let b: Vec<Elem> = b.into_iter().map(|i| Elem::new(0, i)).collect();
        let fast = bf_sym(s, &SortedTuple(a.clone()), t, &SortedTuple(b.clone()), alpha).unwrap().0;
        prop_assert_eq!(fast, NaiveGame::new(s, t, 2).sym(&a, &b, alpha));
    }
}

#[test]
fn naive_game_separates_small_relations() {
    let corpus = all_binary_relation_structures(2);
    let e = SortedTuple::empty();
    // The empty relation and the full relation on two points.
    let (empty, full) = (&corpus[0], &corpus[15]);
    assert!(!NaiveGame::new(empty, full, 1).sym(&[], &[], 1));
    assert!(NaiveGame::new(empty, empty, 1).sym(&[], &[], 2));
    assert!(!bf_sym(empty, &e, full, &e, 1).unwrap().0);
}
