//! PCFG baseline: per-rule expansion probabilities by maximum likelihood,
//! tree likelihood as the product of applied-rule probabilities.
//!
//! The product is taken over factors sorted into a canonical order, so two
//! parses applying the same multiset of rules get bit-identical likelihoods
//! regardless of enumeration order. That tie on attachment ambiguities is
//! the baseline's known weakness and is kept on purpose.

use std::collections::BTreeMap;

use crate::grammar::{Grammar, RuleId};
use crate::parser::Tree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcfgModel {
    /// Rule application counts, indexed by `RuleId`.
    rule_counts: Vec<u64>,
    /// Total applications per left-hand-side category, keyed by the rule's
    /// lhs index in the grammar's category table.
    lhs_totals: BTreeMap<usize, u64>,
    /// Lhs category index per rule, copied from the grammar.
    rule_lhs: Vec<usize>,
}

impl PcfgModel {
    pub fn new(g: &Grammar) -> Self {
        PcfgModel {
            rule_counts: vec![0; g.rules.len()],
            lhs_totals: BTreeMap::new(),
            rule_lhs: g.rules.iter().map(|r| r.lhs.0).collect(),
        }
    }

    pub fn add(&mut self, rule: RuleId, count: u64) {
        self.rule_counts[rule.0] += count;
        *self.lhs_totals.entry(self.rule_lhs[rule.0]).or_default() += count;
    }

    /// Counts rule applications over gold trees.
    pub fn fit<'a>(trees: impl IntoIterator<Item = &'a Tree>, g: &Grammar) -> Self {
        let mut model = PcfgModel::new(g);
        for tree in trees {
            for rule in tree.applied_rules() {
                model.add(rule, 1);
            }
        }
        model
    }

    /// `P(rhs | lhs)` for one rule; 0 when its lhs was never expanded or the
    /// rule itself was never applied.
    pub fn rule_prob(&self, rule: RuleId) -> f64 {
        let count = self.rule_counts[rule.0];
        let total = self.lhs_totals.get(&self.rule_lhs[rule.0]).copied().unwrap_or(0);
        if total == 0 {
            return 0.0;
        }
        count as f64 / total as f64
    }

    /// Product of the probabilities of the applied rules, computed over
    /// canonically sorted factors. 1 on an empty application list, 0 on any
    /// unseen rule.
    pub fn likelihood(&self, applied: &[RuleId]) -> f64 {
        let mut factors: Vec<f64> = applied.iter().map(|&r| self.rule_prob(r)).collect();
        if factors.iter().any(|&p| p <= 0.0) {
            return 0.0;
        }
        factors.sort_by(f64::total_cmp);
        factors.iter().product()
    }

    pub fn tree_likelihood(&self, tree: &Tree) -> f64 {
        self.likelihood(&tree.applied_rules())
    }

    /// Rows `(rule, count)`, for serialization and dumps.
    pub fn rows(&self) -> impl Iterator<Item = (RuleId, u64)> + '_ {
        self.rule_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(idx, &c)| (RuleId(idx), c))
    }

    pub fn lhs_total(&self, rule: RuleId) -> u64 {
        self.lhs_totals.get(&self.rule_lhs[rule.0]).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.rule_counts.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn relative_frequency_per_lhs() {
        let g = fixtures::grammar();
        let np_n = g.parse_rule_key("NP -> N").unwrap();
        let np_pp = g.parse_rule_key("NP -> NP PP").unwrap();
        let mut m = PcfgModel::new(&g);
        m.add(np_n, 3);
        m.add(np_pp, 1);
        assert_eq!(m.rule_prob(np_n), 0.75);
        assert_eq!(m.rule_prob(np_pp), 0.25);
    }

    #[test]
    fn empty_model_scores_zero() {
        let g = fixtures::grammar();
        let m = PcfgModel::new(&g);
        assert_eq!(m.rule_prob(g.parse_rule_key("NP -> N").unwrap()), 0.0);
    }

    #[test]
    fn product_of_rule_probabilities() {
        let g = fixtures::grammar();
        let np_n = g.parse_rule_key("NP -> N").unwrap();
        let np_det = g.parse_rule_key("NP -> DET N").unwrap();
        let vp_v = g.parse_rule_key("VP -> V").unwrap();
        let mut m = PcfgModel::new(&g);
        m.add(np_n, 1);
        m.add(np_det, 1); // P(NP -> N) = 0.5
        m.add(vp_v, 2);
        m.add(g.parse_rule_key("VP -> V NP").unwrap(), 3); // P(VP -> V) = 0.4
        let got = m.likelihood(&[np_n, vp_v]);
        assert!((got - 0.2).abs() < 1e-15, "{got}");
        assert_eq!(m.likelihood(&[np_n, g.parse_rule_key("PP -> P NP").unwrap()]), 0.0);
        assert_eq!(m.likelihood(&[]), 1.0);
    }

    #[test]
    fn equal_rule_multisets_tie_exactly() {
        let g = fixtures::grammar();
        let a = g.parse_rule_key("NP -> NP PP").unwrap();
        let b = g.parse_rule_key("PP -> P NP").unwrap();
        let c = g.parse_rule_key("NP -> DET N").unwrap();
        let mut m = PcfgModel::new(&g);
        m.add(a, 3);
        m.add(b, 7);
        m.add(c, 2);
        m.add(g.parse_rule_key("NP -> N").unwrap(), 5);
        let one = m.likelihood(&[a, b, a, b, c, c, c]);
        let two = m.likelihood(&[c, a, b, c, b, a, c]);
        assert_eq!(one.to_bits(), two.to_bits());
    }
}
