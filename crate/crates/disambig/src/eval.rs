//! Number-n accuracy, decision-stage breakdowns, and method comparison over
//! a ranked test set.
//!
//! Gold matching is exact tree equality. Sentences whose gold tree is not
//! among the enumerated interpretations (in practice: the ambiguity cap was
//! exceeded) are excluded and reported, never counted as wrong, so the
//! numbers measure ranking quality rather than grammar coverage.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::treebank::Treebank;
use crate::frames::Lemmas;
use crate::grammar::Grammar;
use crate::lenmodel::LenModel;
use crate::lexmodel::LexModel;
use crate::parser::{self, Interpretation, ParseError, Token, Tree, TreeKind};
use crate::pcfg::PcfgModel;
use crate::ranker::{self, Candidate, RankOutcome, RankerConfig, Scores, Stage, Strategy};

/// The trained models a ranking run needs. `pcfg` is only consulted by the
/// `backoff-pcfg` strategy.
pub struct Models<'a> {
    pub lex: &'a LexModel,
    pub len: &'a LenModel,
    pub pcfg: Option<&'a PcfgModel>,
    pub lemmas: &'a Lemmas,
}

/// One interpretation with every likelihood the strategies may consult.
#[derive(Debug, Clone)]
pub struct ScoredInterpretation {
    pub interp: Interpretation,
    pub lex3: f64,
    pub lex2: f64,
    pub syn: f64,
    pub pcfg: f64,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("empty test set")]
    EmptyTestSet,
    #[error("strategy {0} requires a {1} model")]
    ModelMissing(Strategy, &'static str),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Parses, enumerates, and scores every interpretation of a tagged
/// sentence.
pub fn analyze_sentence(
    g: &Grammar,
    tokens: &[Token],
    models: &Models<'_>,
    cap: Option<u64>,
) -> Result<Vec<ScoredInterpretation>, EvalError> {
    let forest = parser::parse(g, tokens)?;
    let mut interps = forest.enumerate(cap)?;
    Ok(interps
        .drain(..)
        .map(|mut interp| {
            interp.annotate_triples(g, models.lemmas);
            score_interpretation(interp, models)
        })
        .collect())
}

fn score_interpretation(interp: Interpretation, models: &Models<'_>) -> ScoredInterpretation {
    let lex3 = models.lex.lex3_likelihood(&interp.triples);
    let lex2 = models.lex.lex2_likelihood(&interp.triples);
    let syn = models.len.syn_likelihood(&interp.attachments);
    let pcfg = models
        .pcfg
        .map(|m| m.tree_likelihood(&interp.tree))
        .unwrap_or(0.0);
    ScoredInterpretation { interp, lex3, lex2, syn, pcfg }
}

/// Right-to-left attachment heights for the deterministic baseline: one
/// entry per post-head modifier, carrying the length of the head sibling it
/// attached next to.
pub fn rap_key(tree: &Tree, g: &Grammar) -> Vec<(usize, u32)> {
    let mut key = Vec::new();
    tree.walk_nodes(&mut |node| {
        let TreeKind::Node { rule, children } = &node.kind else {
            return;
        };
        let rule = g.rule(*rule);
        if rule.coord {
            return;
        }
        for (pos, child) in children.iter().enumerate() {
            if pos > rule.head_index {
                let head_len = children[rule.head_index].len() as u32;
                key.push((child.span.start, head_len));
            }
        }
    });
    key
}

/// Builds the ranker's view of scored interpretations. `strategy` selects
/// which model fills the syntactic score.
pub fn candidates(
    scored: &[ScoredInterpretation],
    strategy: Strategy,
    g: &Grammar,
) -> Vec<Candidate> {
    scored
        .iter()
        .map(|s| Candidate {
            key: s.interp.tree.bracketed(g),
            scores: Scores {
                lex3: s.lex3,
                lex2: s.lex2,
                syn: if strategy == Strategy::BackoffPcfg { s.pcfg } else { s.syn },
            },
            rap_key: rap_key(&s.interp.tree, g),
        })
        .collect()
}

/// Ranks one analyzed sentence under a strategy.
pub fn rank_sentence(
    scored: &[ScoredInterpretation],
    strategy: Strategy,
    g: &Grammar,
    cfg: &RankerConfig,
) -> RankOutcome {
    ranker::rank(&candidates(scored, strategy, g), strategy, cfg)
}

/// Outcome of one test sentence under one method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceResult {
    pub index: usize,
    /// Number of interpretations the parser produced.
    pub ambiguity: usize,
    /// 1-based rank of the gold interpretation.
    pub gold_rank: usize,
    /// Stage that separated rank 1 from rank 2; `None` when unambiguous.
    pub decider: Option<Stage>,
}

impl SentenceResult {
    pub fn correct(&self) -> bool {
        self.gold_rank == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedSentence {
    pub index: usize,
    pub reason: String,
}

/// Fraction of sentences whose gold interpretation is ranked within the
/// first `n` candidates.
pub fn number_n_accuracy(results: &[SentenceResult], n: usize) -> Result<f64, EvalError> {
    if results.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    let hits = results.iter().filter(|r| r.gold_rank <= n).count();
    Ok(hits as f64 / results.len() as f64)
}

/// One row of the decision-stage breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakdownRow {
    /// `None` groups the sentences with a single interpretation.
    pub stage: Option<Stage>,
    pub correct: usize,
    pub incorrect: usize,
}

impl BreakdownRow {
    pub fn total(&self) -> usize {
        self.correct + self.incorrect
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        self.correct as f64 / self.total() as f64
    }
}

/// Groups sentences by the stage that decided rank 1 and counts correct and
/// incorrect top choices per group.
pub fn breakdown(results: &[SentenceResult]) -> Vec<BreakdownRow> {
    let stages = [
        Some(Stage::Lex3),
        Some(Stage::Lex2),
        Some(Stage::Syn),
        Some(Stage::Product),
        Some(Stage::Rap),
        Some(Stage::Random),
        None,
    ];
    let mut rows = Vec::new();
    for stage in stages {
        let group: Vec<&SentenceResult> = results.iter().filter(|r| r.decider == stage).collect();
        if group.is_empty() {
            continue;
        }
        rows.push(BreakdownRow {
            stage,
            correct: group.iter().filter(|r| r.correct()).count(),
            incorrect: group.iter().filter(|r| !r.correct()).count(),
        });
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub strategy: Strategy,
    /// `accuracy[i]` is the number-(i+1) accuracy.
    pub accuracy: Vec<f64>,
    pub breakdown: Vec<BreakdownRow>,
    pub sentences: Vec<SentenceResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub methods: Vec<MethodReport>,
    pub excluded: Vec<ExcludedSentence>,
    /// Sentences actually evaluated (gold enumerated).
    pub sentence_count: usize,
    pub avg_ambiguity: f64,
    /// Accuracies are reported for n = 1..=max_n.
    pub max_n: usize,
}

/// Per-sentence ranking seed: decorrelates tie shuffles across sentences
/// while keeping them independent of evaluation order and job count.
pub fn sentence_seed(base: u64, index: usize) -> u64 {
    let mut x = base ^ (index as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Ranks every test sentence under every method and assembles the
/// comparison report. Sentences are scored in parallel; results are
/// order-stable regardless of the thread count.
pub fn compare_methods(
    test: &Treebank,
    methods: &[Strategy],
    models: &Models<'_>,
    g: &Grammar,
    cfg: &RankerConfig,
    cap: Option<u64>,
    max_n: usize,
) -> Result<EvalReport, EvalError> {
    if test.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    if methods.contains(&Strategy::BackoffPcfg) && models.pcfg.is_none() {
        return Err(EvalError::ModelMissing(Strategy::BackoffPcfg, "pcfg"));
    }

    enum SentenceOutcome {
        Ranked { index: usize, ambiguity: usize, per_method: Vec<(usize, Option<Stage>)> },
        Excluded(ExcludedSentence),
    }

    let outcomes: Vec<SentenceOutcome> = test
        .entries
        .par_iter()
        .enumerate()
        .map(|(index, entry)| {
            let scored = match analyze_sentence(g, &entry.tokens, models, cap) {
                Ok(scored) => scored,
                Err(e) => {
                    return SentenceOutcome::Excluded(ExcludedSentence {
                        index,
                        reason: e.to_string(),
                    })
                }
            };
            let gold_at = scored.iter().position(|s| s.interp.tree == entry.tree);
            let Some(gold_at) = gold_at else {
                return SentenceOutcome::Excluded(ExcludedSentence {
                    index,
                    reason: "gold tree is not among the enumerated interpretations".into(),
                });
            };
            let sent_cfg = RankerConfig { seed: sentence_seed(cfg.seed, index), ..*cfg };
            let per_method = methods
                .iter()
                .map(|&strategy| {
                    let outcome = rank_sentence(&scored, strategy, g, &sent_cfg);
                    let gold_rank = outcome
                        .order
                        .iter()
                        .position(|&i| i == gold_at)
                        .expect("gold index is in the ranking")
                        + 1;
                    (gold_rank, outcome.top_decider())
                })
                .collect();
            SentenceOutcome::Ranked { index, ambiguity: scored.len(), per_method }
        })
        .collect();

    let mut excluded = Vec::new();
    let mut per_method_results: Vec<Vec<SentenceResult>> = vec![Vec::new(); methods.len()];
    let mut ambiguity_sum = 0usize;
    let mut included = 0usize;
    for outcome in outcomes {
        match outcome {
            SentenceOutcome::Excluded(e) => excluded.push(e),
            SentenceOutcome::Ranked { index, ambiguity, per_method } => {
                included += 1;
                ambiguity_sum += ambiguity;
                for (m, (gold_rank, decider)) in per_method.into_iter().enumerate() {
                    per_method_results[m].push(SentenceResult { index, ambiguity, gold_rank, decider });
                }
            }
        }
    }
    if included == 0 {
        return Err(EvalError::EmptyTestSet);
    }

    let methods: Vec<MethodReport> = methods
        .iter()
        .zip(per_method_results)
        .map(|(&strategy, sentences)| {
            let accuracy = (1..=max_n)
                .map(|n| number_n_accuracy(&sentences, n).expect("nonempty results"))
                .collect();
            MethodReport { strategy, accuracy, breakdown: breakdown(&sentences), sentences }
        })
        .collect();

    Ok(EvalReport {
        methods,
        excluded,
        sentence_count: included,
        avg_ambiguity: ambiguity_sum as f64 / included as f64,
        max_n,
    })
}

impl EvalReport {
    /// Plot-ready rows: `n<TAB>accuracy<TAB>method`.
    pub fn accuracy_tsv(&self) -> String {
        let mut out = String::from("n\taccuracy\tmethod\n");
        for method in &self.methods {
            for (i, acc) in method.accuracy.iter().enumerate() {
                out.push_str(&format!("{}\t{:.6}\t{}\n", i + 1, acc, method.strategy));
            }
        }
        out
    }

    /// Human-readable accuracy table and per-method breakdowns.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "evaluated {} sentences ({} excluded), average ambiguity {:.2}\n\n",
            self.sentence_count,
            self.excluded.len(),
            self.avg_ambiguity
        ));
        out.push_str("method");
        for n in 1..=self.max_n {
            out.push_str(&format!("\tn={n}"));
        }
        out.push('\n');
        for method in &self.methods {
            out.push_str(&format!("{}", method.strategy));
            for acc in &method.accuracy {
                out.push_str(&format!("\t{:.3}", acc));
            }
            out.push('\n');
        }
        for method in &self.methods {
            out.push_str(&format!("\nbreakdown of {}:\n", method.strategy));
            out.push_str("stage\tcorrect\tincorrect\ttotal\taccuracy\n");
            for row in &method.breakdown {
                let stage = match row.stage {
                    Some(s) => s.to_string(),
                    None => "unambiguous".to_string(),
                };
                out.push_str(&format!(
                    "{stage}\t{}\t{}\t{}\t{:.3}\n",
                    row.correct,
                    row.incorrect,
                    row.total(),
                    row.accuracy()
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(gold_rank: usize, decider: Option<Stage>) -> SentenceResult {
        SentenceResult { index: 0, ambiguity: 2, gold_rank, decider }
    }

    #[test]
    fn accuracy_fraction_matches_hand_count() {
        // 222 of 249 at rank 1.
        let mut results = Vec::new();
        for _ in 0..222 {
            results.push(result(1, Some(Stage::Lex3)));
        }
        for _ in 0..27 {
            results.push(result(2, Some(Stage::Lex3)));
        }
        let acc = number_n_accuracy(&results, 1).unwrap();
        assert!((acc - 0.892).abs() < 5e-4, "{acc}");
        assert_eq!(number_n_accuracy(&results, 2).unwrap(), 1.0);
    }

    #[test]
    fn empty_test_set_is_an_error() {
        assert!(matches!(number_n_accuracy(&[], 1), Err(EvalError::EmptyTestSet)));
    }

    #[test]
    fn accuracy_is_monotone_in_n() {
        let results = vec![
            result(1, Some(Stage::Lex3)),
            result(3, Some(Stage::Syn)),
            result(2, Some(Stage::Lex2)),
            result(5, Some(Stage::Random)),
        ];
        let mut prev = 0.0;
        for n in 1..=5 {
            let acc = number_n_accuracy(&results, n).unwrap();
            assert!(acc >= prev);
            prev = acc;
        }
        assert_eq!(prev, 1.0);
    }

    #[test]
    fn breakdown_partitions_the_test_set() {
        // The reported shape: Lex3 112/5, Lex2 94/14, Syn 16/8.
        let mut results = Vec::new();
        for (stage, correct, incorrect) in [
            (Stage::Lex3, 112, 5),
            (Stage::Lex2, 94, 14),
            (Stage::Syn, 16, 8),
        ] {
            for _ in 0..correct {
                results.push(result(1, Some(stage)));
            }
            for _ in 0..incorrect {
                results.push(result(2, Some(stage)));
            }
        }
        let rows = breakdown(&results);
        assert_eq!(rows.len(), 3);
        let total: usize = rows.iter().map(|r| r.total()).sum();
        assert_eq!(total, results.len());
        let accs: Vec<f64> = rows.iter().map(|r| r.accuracy()).collect();
        assert!((accs[0] - 0.957).abs() < 5e-3, "{accs:?}");
        assert!((accs[1] - 0.870).abs() < 5e-3, "{accs:?}");
        assert!((accs[2] - 0.667).abs() < 5e-3, "{accs:?}");
    }

    #[test]
    fn single_stage_breakdown_has_one_row() {
        let results = vec![result(1, Some(Stage::Lex3)), result(1, Some(Stage::Lex3))];
        let rows = breakdown(&results);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].stage, Some(Stage::Lex3));
        assert_eq!(rows[0].correct, 2);
    }
}
