//! Per-rule length probabilities and the syntactic likelihood of an
//! interpretation.
//!
//! For every rule application in a gold tree, the tuple of child lengths
//! (in words) is counted; `P(l_1,...,l_k | rule)` is the maximum-likelihood
//! ratio of those counts. The syntactic likelihood of an interpretation is
//! the geometric mean of the length probabilities of its attachments.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grammar::{Grammar, RuleId};
use crate::lexmodel::geometric_mean;
use crate::parser::{AttachmentRecord, Tree, TreeKind};

#[derive(Debug, Error)]
pub enum LenModelError {
    #[error("rule {rule} expects a length tuple of arity {expected}, got {got}")]
    ArityMismatch { rule: String, expected: usize, got: usize },
    #[error("tree applies rule {0:?} which the model's grammar does not define")]
    UnknownRule(RuleId),
    #[error("param_count requires 1 <= k <= N, got k={k}, N={max_len}")]
    BadParamQuery { k: usize, max_len: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct RuleDist {
    counts: BTreeMap<Vec<u32>, u64>,
    total: u64,
}

/// Conditional distributions over child-length tuples, one per rule.
#[derive(Debug, Clone, PartialEq)]
pub struct LenModel {
    /// Indexed by `RuleId`; arity copied from the grammar so stray tuples
    /// can be rejected even for rules never observed in training.
    arities: Vec<usize>,
    rules: Vec<RuleDist>,
    /// Optional add-alpha smoothing over tuples of positive lengths summing
    /// to at most `smooth_max_len`. Off (0.0) reproduces plain MLE.
    alpha: f64,
    smooth_max_len: usize,
}

impl LenModel {
    pub fn new(g: &Grammar) -> Self {
        LenModel {
            arities: g.rules.iter().map(|r| r.arity()).collect(),
            rules: vec![RuleDist::default(); g.rules.len()],
            alpha: 0.0,
            smooth_max_len: 0,
        }
    }

    /// Enables add-alpha smoothing for synthetic experiments. With it off
    /// (the default), unseen tuples score exactly 0.
    pub fn with_smoothing(mut self, alpha: f64, max_len: usize) -> Self {
        self.alpha = alpha;
        self.smooth_max_len = max_len;
        self
    }

    pub fn add(&mut self, rule: RuleId, lengths: &[u32], count: u64) -> Result<(), LenModelError> {
        let expected = *self.arities.get(rule.0).ok_or(LenModelError::UnknownRule(rule))?;
        if lengths.len() != expected {
            return Err(LenModelError::ArityMismatch {
                rule: format!("#{}", rule.0),
                expected,
                got: lengths.len(),
            });
        }
        let dist = &mut self.rules[rule.0];
        *dist.counts.entry(lengths.to_vec()).or_default() += count;
        dist.total += count;
        Ok(())
    }

    fn observe_tree(&mut self, tree: &Tree) -> Result<(), LenModelError> {
        let mut result = Ok(());
        tree.walk_nodes(&mut |node| {
            if result.is_err() {
                return;
            }
            if let TreeKind::Node { rule, children } = &node.kind {
                let lengths: Vec<u32> = children.iter().map(|c| c.len() as u32).collect();
                result = self.add(*rule, &lengths, 1);
            }
        });
        result
    }

    /// Fits length distributions from gold trees. Every internal node
    /// increments the count of its rule's child-length tuple.
    pub fn fit<'a>(
        trees: impl IntoIterator<Item = &'a Tree>,
        g: &Grammar,
    ) -> Result<Self, LenModelError> {
        let mut model = LenModel::new(g);
        for tree in trees {
            model.observe_tree(tree)?;
        }
        Ok(model)
    }

    /// `P(l_1,...,l_k | rule)`: relative frequency among the rule's
    /// applications, 0 when unseen. Errors on an arity mismatch.
    pub fn length_prob(&self, rule: RuleId, lengths: &[u32]) -> Result<f64, LenModelError> {
        let expected = *self.arities.get(rule.0).ok_or(LenModelError::UnknownRule(rule))?;
        if lengths.len() != expected {
            return Err(LenModelError::ArityMismatch {
                rule: format!("#{}", rule.0),
                expected,
                got: lengths.len(),
            });
        }
        Ok(self.prob_unchecked(rule, lengths))
    }

    fn prob_unchecked(&self, rule: RuleId, lengths: &[u32]) -> f64 {
        let dist = &self.rules[rule.0];
        let count = dist.counts.get(lengths).copied().unwrap_or(0);
        if self.alpha > 0.0 {
            let k = self.arities[rule.0];
            let support = tuple_space_size(k, self.smooth_max_len) as f64;
            let parent_len: u32 = lengths.iter().sum();
            if parent_len as usize > self.smooth_max_len {
                // Outside the smoothed tuple space; fall back to plain MLE.
                if dist.total == 0 {
                    return 0.0;
                }
                return count as f64 / dist.total as f64;
            }
            return (count as f64 + self.alpha) / (dist.total as f64 + self.alpha * support);
        }
        if dist.total == 0 {
            return 0.0;
        }
        count as f64 / dist.total as f64
    }

    /// Syntactic likelihood: geometric mean of the length probabilities of
    /// the interpretation's attachments. 1 on an empty attachment list, 0
    /// when any factor is 0.
    pub fn syn_likelihood(&self, attachments: &[AttachmentRecord]) -> f64 {
        geometric_mean(
            attachments
                .iter()
                .map(|a| self.prob_unchecked(a.rule, &a.child_lengths))
                .collect(),
        )
    }

    /// Rows `(rule, lengths, count)` of the fitted distributions, sorted.
    pub fn rows(&self) -> impl Iterator<Item = (RuleId, &[u32], u64)> {
        self.rules.iter().enumerate().flat_map(|(idx, dist)| {
            dist.counts
                .iter()
                .map(move |(lengths, &count)| (RuleId(idx), lengths.as_slice(), count))
        })
    }

    pub fn rule_total(&self, rule: RuleId) -> u64 {
        self.rules.get(rule.0).map(|d| d.total).unwrap_or(0)
    }

    /// Marginal probability of one child's length, summing the rule's
    /// distribution over the other children.
    pub fn marginal(&self, rule: RuleId, component: usize) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        let dist = &self.rules[rule.0];
        if dist.total == 0 {
            return out;
        }
        for (lengths, &count) in &dist.counts {
            if let Some(&l) = lengths.get(component) {
                *out.entry(l).or_insert(0.0) += count as f64 / dist.total as f64;
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.rules.iter().all(|d| d.total == 0)
    }
}

/// Number of positive-integer `k`-tuples with sum at most `max_len`:
/// binomial(max_len, k).
fn tuple_space_size(k: usize, max_len: usize) -> u64 {
    binomial(max_len as u64, k as u64)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u64 = 1;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// Free parameters of a length-probability model for a rule of arity `k`
/// whose parent never exceeds `max_len` words: binomial(max_len, k) - 1.
pub fn param_count(k: usize, max_len: usize) -> Result<u64, LenModelError> {
    if k == 0 || k > max_len {
        return Err(LenModelError::BadParamQuery { k, max_len });
    }
    Ok(binomial(max_len as u64, k as u64) - 1)
}
