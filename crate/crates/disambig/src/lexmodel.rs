//! Three-word and two-word conditional probabilities, estimated by maximum
//! likelihood, and the lexical likelihood of an interpretation.
//!
//! A triple `(head, kind, slot, dependent)` contributes to two tables: the
//! three-word table conditions the dependent on `(head, kind, slot)`, and
//! the two-word table conditions the slot on `(head, kind)`. No smoothing is
//! applied; the two-word table is the only fallback for unseen conditions.

use std::collections::BTreeMap;

use crate::frames::{DependencyTriple, HeadKind};

/// Geometric mean of probability factors. Empty products are 1, any zero
/// factor makes the whole likelihood 0, and the log-space mean is summed in
/// sorted order so the result does not depend on factor order.
pub(crate) fn geometric_mean(mut probs: Vec<f64>) -> f64 {
    if probs.is_empty() {
        return 1.0;
    }
    if probs.iter().any(|&p| p <= 0.0) {
        return 0.0;
    }
    probs.sort_by(f64::total_cmp);
    let mean_log = probs.iter().map(|p| p.ln()).sum::<f64>() / probs.len() as f64;
    mean_log.exp()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct CondCounts {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl CondCounts {
    fn add(&mut self, outcome: &str, count: u64) {
        *self.counts.entry(outcome.to_string()).or_default() += count;
        self.total += count;
    }

    fn prob(&self, outcome: &str) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(outcome).map(|&c| c as f64 / self.total as f64).unwrap_or(0.0)
    }
}

/// Count tables for `P(dependent | head, kind, slot)` and
/// `P(slot | head, kind)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexModel {
    tri: BTreeMap<(String, HeadKind, String), CondCounts>,
    bi: BTreeMap<(String, HeadKind), CondCounts>,
}

impl LexModel {
    pub fn new() -> Self {
        LexModel::default()
    }

    /// Accumulates one triple observed `count` times. The two-word table is
    /// derived from the same stream.
    pub fn add(&mut self, t: &DependencyTriple, count: u64) {
        self.tri
            .entry((t.head.clone(), t.head_kind, t.slot.clone()))
            .or_default()
            .add(&t.dependent, count);
        self.bi.entry((t.head.clone(), t.head_kind)).or_default().add(&t.slot, count);
    }

    pub fn fit(triples: impl IntoIterator<Item = (DependencyTriple, u64)>) -> Self {
        let mut model = LexModel::new();
        for (t, count) in triples {
            model.add(&t, count);
        }
        model
    }

    /// Three-word probability `P(dependent | head, kind, slot)`; 0 when the
    /// condition or the outcome is unseen.
    pub fn p3(&self, head: &str, kind: HeadKind, slot: &str, dependent: &str) -> f64 {
        self.tri
            .get(&(head.to_string(), kind, slot.to_string()))
            .map(|c| c.prob(dependent))
            .unwrap_or(0.0)
    }

    /// Two-word probability `P(slot | head, kind)`; 0 when unseen.
    pub fn p2(&self, head: &str, kind: HeadKind, slot: &str) -> f64 {
        self.bi
            .get(&(head.to_string(), kind))
            .map(|c| c.prob(slot))
            .unwrap_or(0.0)
    }

    /// Lexical likelihood from three-word probabilities: the geometric mean
    /// over the interpretation's triples. 1 on an empty triple list, 0 as
    /// soon as any factor is 0.
    pub fn lex3_likelihood(&self, triples: &[DependencyTriple]) -> f64 {
        geometric_mean(
            triples
                .iter()
                .map(|t| self.p3(&t.head, t.head_kind, &t.slot, &t.dependent))
                .collect(),
        )
    }

    /// Lexical likelihood from two-word probabilities.
    pub fn lex2_likelihood(&self, triples: &[DependencyTriple]) -> f64 {
        geometric_mean(
            triples
                .iter()
                .map(|t| self.p2(&t.head, t.head_kind, &t.slot))
                .collect(),
        )
    }

    /// Raw count rows `(head, kind, slot, dependent, count)`, sorted; the
    /// serialization body and the dump format.
    pub fn tri_rows(&self) -> impl Iterator<Item = (&str, HeadKind, &str, &str, u64)> {
        self.tri.iter().flat_map(|((head, kind, slot), cond)| {
            cond.counts
                .iter()
                .map(move |(dep, &count)| (head.as_str(), *kind, slot.as_str(), dep.as_str(), count))
        })
    }

    /// Per-condition totals of the three-word table, for the sum-to-one
    /// checks.
    pub fn tri_conditions(&self) -> impl Iterator<Item = (&(String, HeadKind, String), u64)> {
        self.tri.iter().map(|(k, c)| (k, c.total))
    }

    pub fn bi_conditions(&self) -> impl Iterator<Item = (&(String, HeadKind), u64)> {
        self.bi.iter().map(|(k, c)| (k, c.total))
    }

    /// Distinct dependents seen under a condition.
    pub fn tri_outcomes(&self, head: &str, kind: HeadKind, slot: &str) -> Vec<String> {
        self.tri
            .get(&(head.to_string(), kind, slot.to_string()))
            .map(|c| c.counts.keys().cloned().collect())
            .unwrap_or_default()
    }

    pub fn bi_outcomes(&self, head: &str, kind: HeadKind) -> Vec<String> {
        self.bi
            .get(&(head.to_string(), kind))
            .map(|c| c.counts.keys().cloned().collect())
            .unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.tri.is_empty()
    }
}
