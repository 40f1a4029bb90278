mod common;

use std::collections::BTreeSet;

use common::{l, lambda, profile, two_profiles};
use proptest::prelude::*;
use rankfair::axioms::*;
use rankfair::sampling::{random_maximal_sequence, random_ranking, random_single_crossing_profile, random_two_ranking_profile, seeded_rng};
use rankfair::solver::solve_brute_force;
use rankfair::{CostSpec, Profile};

fn optima(p: &Profile, spec: CostSpec) -> BTreeSet<rankfair::Ranking> {
    solve_brute_force(p, spec).unwrap().optima.into_iter().collect()
}

#[test]
fn random_sequences_are_maximal() {
    let mut rng = seeded_rng(1);
    for m in 2..=6 {
        let seq = random_maximal_sequence(&random_ranking(m, &mut rng).unwrap(), &mut rng);
        assert!(SingleCrossingSequence::new(seq).unwrap().maximal);
    }
}

#[test]
fn kemeny_breaks_two_ranking_proportionality() {
    let p = Profile::from_counts([(l("abcd"), 3), (l("dcba"), 2)]).unwrap();
    assert!(sqk_satisfies_2rp(&p).unwrap());
    assert!(!satisfies_2rp(&p, CostSpec::KEMENY).unwrap());
    assert_eq!(optima(&p, CostSpec::KEMENY), BTreeSet::from([l("abcd")]));
}

#[test]
fn manipulation_fixture_is_profitable() {
    let before = rankfair::solver::squared_kemeny(&rankfair::fixtures::manipulation_before()).unwrap();
    let after = rankfair::solver::squared_kemeny(&rankfair::fixtures::manipulation_after()).unwrap();
    assert!(is_profitable_manipulation(&before, &after, &l("bac")).unwrap());
    assert!(!is_profitable_manipulation(&after, &before, &l("bac")).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn two_rankings_are_averaged(seed in any::<u64>(), m in 2usize..=5) {
        let p = random_two_ranking_profile(m, 9, &mut seeded_rng(seed)).unwrap();
        prop_assert!(sqk_satisfies_2rp(&p).unwrap());
    }

    #[test]
    fn scp_expected_set_is_exactly_the_optimum(seed in any::<u64>(), m in 2usize..=5, k in 1usize..=5) {
        let p = random_single_crossing_profile(m, k, 9, &mut seeded_rng(seed)).unwrap();
        let got = optima(&p, CostSpec::SQUARED);
        prop_assert_eq!(&sc_proportional_expected_exhaustive(&p).unwrap(), &got);
        let seq = find_single_crossing_order(&p).unwrap().expect("profile is single-crossing");
        prop_assert!(seq.maximal);
        let fast = sc_proportional_expected(&p, &seq).unwrap();
        prop_assert!(!fast.is_empty() && fast.is_subset(&got));
    }

    #[test]
    fn single_crossing_detection_agrees_with_exhaustive_search(p in profile(5, 6)) {
        prop_assert_eq!(find_single_crossing_order(&p).unwrap().is_some(), single_crossing_order_exhaustive(&p).unwrap());
    }

    #[test]
    fn found_orders_contain_the_support(p in profile(5, 5)) {
        if let Some(seq) = find_single_crossing_order(&p).unwrap() {
            prop_assert!(is_single_crossing(&seq.rankings));
            prop_assert!(p.support().all(|r| seq.location(r).is_some()));
        }
    }

    #[test]
    fn sqk_outputs_are_undominated(p in profile(5, 6)) {
        for r in optima(&p, CostSpec::SQUARED) {
            prop_assert!(is_undominated(&r, &p).unwrap());
        }
    }

    #[test]
    fn sqk_reinforcement((a, b) in two_profiles(4, 4), lam in lambda()) {
        let verdict = check_reinforcement_instance(&a, &b, &lam, CostSpec::SQUARED).unwrap();
        prop_assert_ne!(verdict, Some(false));
    }

    #[test]
    fn sqk_participation((a, b) in two_profiles(4, 4), lam in lambda()) {
        prop_assert!(check_participation_instance(&a, &b, &lam).unwrap());
    }

    #[test]
    fn domination_is_irreflexive_and_asymmetric(p in profile(5, 4), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let x = random_ranking(p.m(), &mut rng).unwrap();
        let y = random_ranking(p.m(), &mut rng).unwrap();
        prop_assert!(!dominates(&x, &x, &p).unwrap());
        prop_assert!(!(dominates(&x, &y, &p).unwrap() && dominates(&y, &x, &p).unwrap()));
    }
}
