//! Property-based tests for the deferred-acceptance core.

mod common;

use itertools::Itertools;
use proptest::prelude::*;

use thz_irs_core::matching::{
    build_priorities, deferred_acceptance, is_stable, proposal_bound_check, Matching, ScoreMatrix,
};

fn score_matrix_strategy(
    max_p: usize,
    max_r: usize,
) -> impl Strategy<Value = (ScoreMatrix, ScoreMatrix)> {
    (1..=max_p, 1..=max_r).prop_flat_map(|(p, r)| {
        (
            prop::collection::vec(-100.0f64..100.0, p * r),
            prop::collection::vec(-100.0f64..100.0, p * r),
        )
            .prop_map(move |(sp, sr)| {
                (
                    ScoreMatrix::new(p, r, sp).unwrap(),
                    ScoreMatrix::new(r, p, sr).unwrap(),
                )
            })
    })
}

fn run_da(scores_p: &ScoreMatrix, scores_r: &ScoreMatrix) -> Matching {
    deferred_acceptance(&build_priorities(scores_p), &build_priorities(scores_r)).unwrap()
}

/// All stable full matchings of a square/rectangular instance by exhaustive
/// enumeration against the independent audit in `common`.
fn enumerate_stable(scores_p: &ScoreMatrix, scores_r: &ScoreMatrix) -> Vec<Vec<usize>> {
    let p = scores_p.rows();
    let r = scores_r.rows();
    assert!(p <= r);
    let rows_p: Vec<Vec<f64>> = (0..p).map(|i| scores_p.row(i).to_vec()).collect();
    let rows_r: Vec<Vec<f64>> = (0..r).map(|i| scores_r.row(i).to_vec()).collect();
    (0..r)
        .permutations(p)
        .filter(|assignment| {
            let opt: Vec<Option<usize>> = assignment.iter().map(|&x| Some(x)).collect();
            common::oracle_is_stable(&opt, &rows_p, &rows_r)
        })
        .collect()
}

proptest! {
    #[test]
    fn da_output_has_no_blocking_pairs(
        (scores_p, scores_r) in score_matrix_strategy(6, 8)
    ) {
        let m = run_da(&scores_p, &scores_r);
        let (stable, blocking) = is_stable(&m, &scores_p, &scores_r);
        prop_assert!(stable, "blocking pairs {blocking:?}");

        // Cross-check with the independent audit.
        let assignment: Vec<Option<usize>> =
            (0..scores_p.rows()).map(|p| m.responder_of(p)).collect();
        let rows_p: Vec<Vec<f64>> =
            (0..scores_p.rows()).map(|i| scores_p.row(i).to_vec()).collect();
        let rows_r: Vec<Vec<f64>> =
            (0..scores_r.rows()).map(|i| scores_r.row(i).to_vec()).collect();
        prop_assert!(common::oracle_is_stable(&assignment, &rows_p, &rows_r));
    }

    #[test]
    fn da_respects_proposal_bound(
        (scores_p, scores_r) in score_matrix_strategy(6, 8)
    ) {
        let m = run_da(&scores_p, &scores_r);
        prop_assert!(proposal_bound_check(&m, scores_p.rows(), scores_r.rows()));
    }

    #[test]
    fn priority_rows_invariant_under_increasing_transform(
        (scores_p, _) in score_matrix_strategy(5, 5)
    ) {
        // exp is strictly increasing; orderings must not move.
        let transformed = ScoreMatrix::new(
            scores_p.rows(),
            scores_p.cols(),
            (0..scores_p.rows())
                .flat_map(|r| scores_p.row(r).iter().map(|v| (v * 0.05).exp()).collect::<Vec<_>>())
                .collect(),
        ).unwrap();
        let a = build_priorities(&scores_p);
        let b = build_priorities(&transformed);
        for r in 0..scores_p.rows() {
            prop_assert_eq!(a.row(r), b.row(r));
        }
    }

    #[test]
    fn role_swap_still_yields_stable_matching(
        (scores_p, scores_r) in score_matrix_strategy(5, 5)
    ) {
        // Invert the proposing order: responders propose. The result may
        // differ but must still be stable under the same audit.
        let m = run_da(&scores_r, &scores_p);
        let (stable, _) = is_stable(&m, &scores_r, &scores_p);
        prop_assert!(stable);
    }
}

#[test]
fn da_is_proposer_optimal_on_enumerable_instances() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8080);
    let mut checked = 0;
    while checked < 300 {
        let p = rng.gen_range(1..=5);
        let r = rng.gen_range(p..=5);
        let scores_p = ScoreMatrix::new(
            p,
            r,
            (0..p * r).map(|_| rng.gen_range(-10.0..10.0)).collect(),
        )
        .unwrap();
        let scores_r = ScoreMatrix::new(
            r,
            p,
            (0..p * r).map(|_| rng.gen_range(-10.0..10.0)).collect(),
        )
        .unwrap();
        let stable_set = enumerate_stable(&scores_p, &scores_r);
        assert!(
            !stable_set.is_empty(),
            "every instance has a stable matching"
        );

        let m = run_da(&scores_p, &scores_r);
        let rank_of = |proposer: usize, responder: usize| {
            common::oracle_rank(scores_p.row(proposer), responder)
        };
        for proposer in 0..p {
            let da_partner = m.responder_of(proposer).expect("P <= R: everyone matched");
            for alt in &stable_set {
                assert!(
                    rank_of(proposer, da_partner) <= rank_of(proposer, alt[proposer]),
                    "proposer {proposer} prefers {} from another stable matching",
                    alt[proposer]
                );
            }
        }
        checked += 1;
    }
}

#[test]
fn da_total_matches_some_enumerated_stable_matching() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
    for _ in 0..100 {
        let scores_p =
            ScoreMatrix::new(3, 4, (0..12).map(|_| rng.gen_range(0.0..10.0)).collect()).unwrap();
        let scores_r =
            ScoreMatrix::new(4, 3, (0..12).map(|_| rng.gen_range(0.0..10.0)).collect()).unwrap();
        let m = run_da(&scores_p, &scores_r);
        let da_assignment: Vec<usize> = (0..3).map(|p| m.responder_of(p).unwrap()).collect();
        let stable_set = enumerate_stable(&scores_p, &scores_r);
        assert!(
            stable_set.contains(&da_assignment),
            "DA output {da_assignment:?} missing from stable set {stable_set:?}"
        );
    }
}
