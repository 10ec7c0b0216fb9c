//! Property tests for the ranking cascade and the likelihood arithmetic.

use disambig::ranker::{
    compare_backoff, rank, Candidate, Comparison, LexCascade, RankerConfig, Scores, Stage, Strategy,
};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;

/// Scores drawn from a coarse grid so exact ties are common.
fn grid_score() -> impl proptest::strategy::Strategy<Value = f64> {
    (0u32..=5).prop_map(|v| v as f64 / 5.0)
}

fn grid_scores() -> impl proptest::strategy::Strategy<Value = Scores> {
    (grid_score(), grid_score(), grid_score())
        .prop_map(|(lex3, lex2, syn)| Scores { lex3, lex2, syn })
}

/// Literal transcription of the strict-inequality cascade used with both
/// thresholds at zero.
fn cascade_literal(a: &Scores, b: &Scores) -> Comparison {
    if a.lex3 > b.lex3 {
        Comparison::First(Stage::Lex3)
    } else if b.lex3 > a.lex3 {
        Comparison::Second(Stage::Lex3)
    } else if a.lex2 > b.lex2 {
        Comparison::First(Stage::Lex2)
    } else if b.lex2 > a.lex2 {
        Comparison::Second(Stage::Lex2)
    } else if a.syn > b.syn {
        Comparison::First(Stage::Syn)
    } else if b.syn > a.syn {
        Comparison::Second(Stage::Syn)
    } else {
        Comparison::Tie
    }
}

fn flip(c: Comparison) -> Comparison {
    match c {
        Comparison::First(s) => Comparison::Second(s),
        Comparison::Second(s) => Comparison::First(s),
        Comparison::Tie => Comparison::Tie,
    }
}

proptest! {
    #[test]
    fn zero_threshold_backoff_matches_the_literal_cascade(a in grid_scores(), b in grid_scores()) {
        let cfg = RankerConfig::default();
        prop_assert_eq!(compare_backoff(&a, &b, &cfg), cascade_literal(&a, &b));
    }

    #[test]
    fn backoff_is_antisymmetric(a in grid_scores(), b in grid_scores(), eta in 0.0..0.3f64, tau in 0.0..0.3f64) {
        let cfg = RankerConfig { eta, tau, ..Default::default() };
        prop_assert_eq!(compare_backoff(&a, &b, &cfg), flip(compare_backoff(&b, &a, &cfg)));
    }

    #[test]
    fn lex3_decisions_ignore_the_later_stages(
        a in grid_scores(),
        b in grid_scores(),
        a2 in grid_scores(),
        b2 in grid_scores(),
        eta in 0.0..0.3f64,
    ) {
        let cfg = RankerConfig { eta, tau: 0.1, ..Default::default() };
        if (a.lex3 - b.lex3).abs() > eta {
            // Replace every lex2/syn score; the outcome must not move.
            let a_perturbed = Scores { lex3: a.lex3, lex2: a2.lex2, syn: a2.syn };
            let b_perturbed = Scores { lex3: b.lex3, lex2: b2.lex2, syn: b2.syn };
            prop_assert_eq!(
                compare_backoff(&a, &b, &cfg),
                compare_backoff(&a_perturbed, &b_perturbed, &cfg)
            );
        }
    }

    #[test]
    fn two_stage_cascade_never_reports_lex2(a in grid_scores(), b in grid_scores()) {
        let cfg = RankerConfig { lex_cascade: LexCascade::TwoStage, ..Default::default() };
        let got = compare_backoff(&a, &b, &cfg);
        prop_assert!(!matches!(got, Comparison::First(Stage::Lex2) | Comparison::Second(Stage::Lex2)));
    }

    #[test]
    fn ranking_is_pairwise_consistent_at_zero_thresholds(
        scores in proptest::collection::vec(grid_scores(), 1..6),
        seed in 0u64..1000,
    ) {
        let cfg = RankerConfig { seed, ..Default::default() };
        let candidates: Vec<Candidate> = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| Candidate { key: format!("c{i}"), scores: s, rap_key: Vec::new() })
            .collect();
        let outcome = rank(&candidates, Strategy::BackoffSyn, &cfg);
        prop_assert_eq!(outcome.order.len(), candidates.len());
        for w in outcome.order.windows(2) {
            let (hi, lo) = (&candidates[w[0]].scores, &candidates[w[1]].scores);
            // The higher-ranked candidate never loses the pairwise cascade.
            prop_assert!(!matches!(compare_backoff(hi, lo, &cfg), Comparison::Second(_)));
        }
    }

    #[test]
    fn ranking_ignores_input_order(
        scores in proptest::collection::vec(grid_scores(), 1..6),
        seed in 0u64..1000,
        rotation in 0usize..6,
    ) {
        let cfg = RankerConfig { seed, ..Default::default() };
        let candidates: Vec<Candidate> = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| Candidate { key: format!("c{i}"), scores: s, rap_key: Vec::new() })
            .collect();
        let mut rotated = candidates.clone();
        rotated.rotate_left(rotation % candidates.len().max(1));
        let keys = |cands: &[Candidate], order: &[usize]| -> Vec<String> {
            order.iter().map(|&i| cands[i].key.clone()).collect()
        };
        let a = rank(&candidates, Strategy::BackoffSyn, &cfg);
        let b = rank(&rotated, Strategy::BackoffSyn, &cfg);
        prop_assert_eq!(keys(&candidates, &a.order), keys(&rotated, &b.order));
        let c = rank(&candidates, Strategy::Product, &cfg);
        let d = rank(&rotated, Strategy::Product, &cfg);
        prop_assert_eq!(keys(&candidates, &c.order), keys(&rotated, &d.order));
    }

    #[test]
    fn deciders_are_consistent_with_the_recorded_scores(
        scores in proptest::collection::vec(grid_scores(), 2..6),
        seed in 0u64..1000,
    ) {
        let cfg = RankerConfig { seed, ..Default::default() };
        let candidates: Vec<Candidate> = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| Candidate { key: format!("c{i}"), scores: s, rap_key: Vec::new() })
            .collect();
        let outcome = rank(&candidates, Strategy::BackoffSyn, &cfg);
        for (pos, w) in outcome.order.windows(2).enumerate() {
            let (hi, lo) = (&candidates[w[0]].scores, &candidates[w[1]].scores);
            let expected = match compare_backoff(hi, lo, &cfg) {
                Comparison::First(stage) => stage,
                Comparison::Tie => Stage::Random,
                Comparison::Second(_) => unreachable!("checked by pairwise consistency"),
            };
            prop_assert_eq!(outcome.deciders[pos], expected);
        }
    }

    #[test]
    fn geometric_mean_is_scale_consistent(
        base in proptest::collection::vec(0.01..1.0f64, 1..8),
        boost in 1.01..2.0f64,
    ) {
        // If every factor of A strictly exceeds the matching factor of B,
        // the likelihood of A is strictly higher.
        use disambig::lexmodel::LexModel;
        use disambig::frames::{DependencyTriple, HeadKind};
        // Drive the comparison through triple scoring on two models built
        // so that p3 ratios are base[i] and min(base[i] * boost, 1).
        let mut weak = LexModel::new();
        let mut strong = LexModel::new();
        for (i, &p) in base.iter().enumerate() {
            let denom = 1_000_000u64;
            let weak_count = (p * denom as f64) as u64;
            let strong_count = ((p * boost).min(1.0) * denom as f64) as u64;
            let head = format!("h{i}");
            weak.add(&DependencyTriple::new(&head, HeadKind::Verb, "s", "x"), weak_count.max(1));
            weak.add(&DependencyTriple::new(&head, HeadKind::Verb, "s", "y"), denom - weak_count.max(1));
            strong.add(&DependencyTriple::new(&head, HeadKind::Verb, "s", "x"), strong_count.max(2));
            strong.add(&DependencyTriple::new(&head, HeadKind::Verb, "s", "y"), denom - strong_count.max(2));
        }
        let triples: Vec<DependencyTriple> = (0..base.len())
            .map(|i| DependencyTriple::new(format!("h{i}"), HeadKind::Verb, "s", "x"))
            .collect();
        let weak_score = weak.lex3_likelihood(&triples);
        let strong_score = strong.lex3_likelihood(&triples);
        prop_assert!(strong_score > weak_score,
            "strong {strong_score} should beat weak {weak_score}");
    }
}
