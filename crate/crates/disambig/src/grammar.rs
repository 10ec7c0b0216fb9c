//! Categories, annotated CFG rules, and the grammar file format.
//!
//! A grammar file is line oriented:
//!
//! ```text
//! # comment
//! %start S
//! %lex N N          # POS tag N maps to preterminal category N
//! %verb V           # head words under these preterminals are verb-kind
//! S  -> NP[arg1] VP[h]
//! NP -> NP[h] PP
//! VP -> VP[h] C[-] VP[-] :coord
//! ```
//!
//! Exactly one right-hand symbol carries the head marker `[h]`. Every other
//! position carries a slot annotation: `[name]` for a fixed case slot such as
//! `arg1`, `[-]` for a position that fills no case slot (determiners, the
//! complement of a preposition, conjuncts), and no annotation for `LEXICAL`,
//! where the slot name is taken from the modifier's own head word (the usual
//! marking for PP modifiers). `:coord` flags coordinate-structure rules,
//! which must have the shape `L -> R C R`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Index of a category in its [`Grammar`]'s category table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cat(pub usize);

/// Index of a rule in its [`Grammar`]'s rule list. Rule order is the order of
/// appearance in the grammar file and is used for deterministic tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    /// Preterminals are the targets of `%lex` lines; they dominate exactly
    /// one word and never appear on a left-hand side.
    pub is_preterminal: bool,
    /// Set by `%verb`; decides whether a head word opens a verb or a noun
    /// case frame.
    pub is_verbal: bool,
}

/// Per-position annotation on a rule's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotLabel {
    /// The head child; its head word projects upward.
    Head,
    /// A fixed case slot (`arg1`, `arg2`, ...).
    Named(String),
    /// Slot name is the modifier's own head word (PP modifiers).
    Lexical,
    /// No case slot: the position never yields a dependency triple.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Cat,
    pub rhs: Vec<Cat>,
    pub head_index: usize,
    /// Parallel to `rhs`; `slots[head_index]` is `SlotLabel::Head`.
    pub slots: Vec<SlotLabel>,
    pub coord: bool,
    /// 1-based grammar-file line, when the rule came from a file.
    pub line: Option<usize>,
}

impl Rule {
    pub fn arity(&self) -> usize {
        self.rhs.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grammar {
    pub categories: Vec<Category>,
    pub rules: Vec<Rule>,
    pub start: Option<Cat>,
    /// POS tag -> preterminal category.
    pub lexicon: BTreeMap<String, Cat>,
}

/// One invariant violation found by [`Grammar::validate`]. Violations are
/// data, not failures: `validate` always succeeds and returns all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {}: {}", n, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid grammar:\n{}", .0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
}

impl Grammar {
    pub fn category(&self, cat: Cat) -> &Category {
        &self.categories[cat.0]
    }

    pub fn name(&self, cat: Cat) -> &str {
        &self.categories[cat.0].name
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id.0]
    }

    pub fn find_category(&self, name: &str) -> Option<Cat> {
        self.categories.iter().position(|c| c.name == name).map(Cat)
    }

    /// Looks a rule up by its left-hand side and right-hand category
    /// sequence. Valid grammars have at most one match.
    pub fn find_rule(&self, lhs: Cat, rhs: &[Cat]) -> Option<RuleId> {
        self.rules
            .iter()
            .position(|r| r.lhs == lhs && r.rhs == rhs)
            .map(RuleId)
    }

    /// Human-readable rule form without annotations, e.g. `NP -> NP PP`.
    /// Used as the stable rule key in model files and dumps.
    pub fn rule_key(&self, id: RuleId) -> String {
        let r = self.rule(id);
        format!(
            "{} -> {}",
            self.name(r.lhs),
            r.rhs.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(" ")
        )
    }

    /// Resolves a `rule_key`-formatted string against this grammar.
    pub fn parse_rule_key(&self, key: &str) -> Option<RuleId> {
        let (lhs, rhs) = key.split_once("->")?;
        let lhs = self.find_category(lhs.trim())?;
        let rhs: Option<Vec<Cat>> = rhs
            .split_whitespace()
            .map(|name| self.find_category(name))
            .collect();
        self.find_rule(lhs, &rhs?)
    }

    fn intern(categories: &mut Vec<Category>, index: &mut HashMap<String, Cat>, name: &str) -> Cat {
        if let Some(&cat) = index.get(name) {
            return cat;
        }
        let cat = Cat(categories.len());
        categories.push(Category {
            name: name.to_string(),
            is_preterminal: false,
            is_verbal: false,
        });
        index.insert(name.to_string(), cat);
        cat
    }

    /// Returns every invariant violation in this grammar; an empty report
    /// means the grammar is valid. Parse operations refuse grammars whose
    /// report is nonempty.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |line: Option<usize>, message: String| out.push(Violation { line, message });

        let mut seen: HashMap<(Cat, Vec<Cat>), usize> = HashMap::new();
        for (i, rule) in self.rules.iter().enumerate() {
            let k = rule.arity();
            if k == 0 {
                push(rule.line, format!("rule {}: empty right-hand side", i));
                continue;
            }
            if k > 3 {
                push(rule.line, format!("rule {}: arity {} exceeds 3", self.describe_rule(rule), k));
            }
            if rule.head_index >= k {
                push(
                    rule.line,
                    format!("rule {}: head index {} out of range", self.describe_rule(rule), rule.head_index),
                );
            } else {
                if rule.slots.len() != k {
                    push(rule.line, format!("rule {}: slot list does not match arity", self.describe_rule(rule)));
                } else {
                    for (pos, slot) in rule.slots.iter().enumerate() {
                        let is_head = matches!(slot, SlotLabel::Head);
                        if is_head != (pos == rule.head_index) {
                            push(
                                rule.line,
                                format!("rule {}: head marker inconsistent at position {}", self.describe_rule(rule), pos),
                            );
                        }
                    }
                }
            }
            if rule.coord && !(k == 3 && rule.rhs[0] == rule.rhs[2] && rule.rhs[1] != rule.rhs[0]) {
                push(
                    rule.line,
                    format!("rule {}: coord rule must have the shape R C R", self.describe_rule(rule)),
                );
            }
            if self.category(rule.lhs).is_preterminal {
                push(
                    rule.line,
                    format!("rule {}: preterminal {} on a left-hand side", self.describe_rule(rule), self.name(rule.lhs)),
                );
            }
            if let Some(first) = seen.insert((rule.lhs, rule.rhs.clone()), i) {
                push(rule.line, format!("rule {}: duplicates rule {}", self.describe_rule(rule), first));
            }
        }

        // Every rhs category must be derivable: either a preterminal or the
        // lhs of some rule.
        let lhs_cats: HashSet<Cat> = self.rules.iter().map(|r| r.lhs).collect();
        let mut undefined: Vec<Cat> = Vec::new();
        for rule in &self.rules {
            for &cat in &rule.rhs {
                if !self.category(cat).is_preterminal && !lhs_cats.contains(&cat) && !undefined.contains(&cat) {
                    undefined.push(cat);
                }
            }
        }
        for cat in undefined {
            push(None, format!("category {} is used but has no rules and no %lex entry", self.name(cat)));
        }

        match self.start {
            None => push(None, "no %start directive".to_string()),
            Some(start) => {
                if !lhs_cats.contains(&start) {
                    push(None, format!("unreachable start: {} never appears on a left-hand side", self.name(start)));
                }
            }
        }

        // Productivity: every non-terminal used anywhere must derive some
        // terminal string, otherwise parsing could never complete below it.
        let mut productive: HashSet<Cat> = self
            .categories
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_preterminal)
            .map(|(i, _)| Cat(i))
            .collect();
        loop {
            let mut changed = false;
            for rule in &self.rules {
                if !productive.contains(&rule.lhs) && rule.rhs.iter().all(|c| productive.contains(c)) {
                    productive.insert(rule.lhs);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut used: HashSet<Cat> = lhs_cats.clone();
        used.extend(self.rules.iter().flat_map(|r| r.rhs.iter().copied()));
        if let Some(start) = self.start {
            used.insert(start);
        }
        for cat in 0..self.categories.len() {
            let cat = Cat(cat);
            if used.contains(&cat) && !productive.contains(&cat) {
                push(None, format!("category {} cannot derive any terminal string", self.name(cat)));
            }
        }

        // Unary cycles would make the parse chart loop; reject them here so
        // the parser can assume a DAG.
        if let Some(cycle) = self.unary_cycle() {
            let names: Vec<&str> = cycle.iter().map(|&c| self.name(c)).collect();
            push(None, format!("unary rule cycle: {}", names.join(" -> ")));
        }

        out
    }

    fn describe_rule(&self, rule: &Rule) -> String {
        format!(
            "{} -> {}",
            self.name(rule.lhs),
            rule.rhs.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(" ")
        )
    }

    fn unary_cycle(&self) -> Option<Vec<Cat>> {
        let mut edges: HashMap<Cat, Vec<Cat>> = HashMap::new();
        for rule in self.rules.iter().filter(|r| r.arity() == 1) {
            edges.entry(rule.lhs).or_default().push(rule.rhs[0]);
        }
        // DFS with a path stack; first cycle found is reported.
        fn visit(
            cat: Cat,
            edges: &HashMap<Cat, Vec<Cat>>,
            done: &mut HashSet<Cat>,
            path: &mut Vec<Cat>,
        ) -> Option<Vec<Cat>> {
            if let Some(pos) = path.iter().position(|&c| c == cat) {
                let mut cycle = path[pos..].to_vec();
                cycle.push(cat);
                return Some(cycle);
            }
            if done.contains(&cat) {
                return None;
            }
            path.push(cat);
            if let Some(next) = edges.get(&cat) {
                for &n in next {
                    if let Some(cycle) = visit(n, edges, done, path) {
                        return Some(cycle);
                    }
                }
            }
            path.pop();
            done.insert(cat);
            None
        }
        let mut done = HashSet::new();
        for &cat in edges.keys() {
            if let Some(cycle) = visit(cat, &edges, &mut done, &mut Vec::new()) {
                return Some(cycle);
            }
        }
        None
    }

    /// Writes the grammar back in its file format. `parse_grammar` of the
    /// result reproduces the grammar exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(start) = self.start {
            out.push_str(&format!("%start {}\n", self.name(start)));
        }
        for (tag, cat) in &self.lexicon {
            out.push_str(&format!("%lex {} {}\n", tag, self.name(*cat)));
        }
        let verbal: Vec<&str> = self
            .categories
            .iter()
            .filter(|c| c.is_verbal)
            .map(|c| c.name.as_str())
            .collect();
        if !verbal.is_empty() {
            out.push_str(&format!("%verb {}\n", verbal.join(" ")));
        }
        for rule in &self.rules {
            let mut parts = Vec::new();
            for (pos, &cat) in rule.rhs.iter().enumerate() {
                let ann = match &rule.slots[pos] {
                    SlotLabel::Head => "[h]".to_string(),
                    SlotLabel::Named(s) => format!("[{s}]"),
                    SlotLabel::Skip => "[-]".to_string(),
                    SlotLabel::Lexical => String::new(),
                };
                parts.push(format!("{}{}", self.name(cat), ann));
            }
            out.push_str(&format!(
                "{} -> {}{}\n",
                self.name(rule.lhs),
                parts.join(" "),
                if rule.coord { " :coord" } else { "" }
            ));
        }
        out
    }
}

/// Parses and validates a grammar file. Rule order is preserved.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut g = Grammar::default();
    let mut index: HashMap<String, Cat> = HashMap::new();
    let syntax = |line: usize, message: String| GrammarError::Syntax { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("%start") {
            let name = rest.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(lineno, "%start expects a single category".into()));
            }
            if g.start.is_some() {
                return Err(syntax(lineno, "duplicate %start directive".into()));
            }
            g.start = Some(Grammar::intern(&mut g.categories, &mut index, name));
        } else if let Some(rest) = line.strip_prefix("%lex") {
            let mut parts = rest.split_whitespace();
            let (tag, cat) = match (parts.next(), parts.next(), parts.next()) {
                (Some(tag), Some(cat), None) => (tag, cat),
                _ => return Err(syntax(lineno, "%lex expects: %lex TAG CATEGORY".into())),
            };
            if g.lexicon.contains_key(tag) {
                return Err(syntax(lineno, format!("tag {tag} already mapped")));
            }
            let cat = Grammar::intern(&mut g.categories, &mut index, cat);
            g.categories[cat.0].is_preterminal = true;
            g.lexicon.insert(tag.to_string(), cat);
        } else if let Some(rest) = line.strip_prefix("%verb") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.is_empty() {
                return Err(syntax(lineno, "%verb expects at least one category".into()));
            }
            for name in names {
                let cat = Grammar::intern(&mut g.categories, &mut index, name);
                g.categories[cat.0].is_verbal = true;
            }
        } else if line.starts_with('%') {
            return Err(syntax(lineno, format!("unknown directive: {line}")));
        } else {
            let (lhs, rest) = line
                .split_once("->")
                .ok_or_else(|| syntax(lineno, "expected `LHS -> RHS`".into()))?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(syntax(lineno, "left-hand side must be a single category".into()));
            }
            let mut coord = false;
            let mut rhs = Vec::new();
            let mut slots = Vec::new();
            let mut head_index = None;
            for sym in rest.split_whitespace() {
                if sym == ":coord" {
                    coord = true;
                    continue;
                }
                if coord {
                    return Err(syntax(lineno, ":coord must be the final token".into()));
                }
                let (name, slot) = match sym.find('[') {
                    Some(pos) => {
                        if !sym.ends_with(']') {
                            return Err(syntax(lineno, format!("malformed annotation in {sym}")));
                        }
                        let ann = &sym[pos + 1..sym.len() - 1];
                        let slot = match ann {
                            "h" => SlotLabel::Head,
                            "-" => SlotLabel::Skip,
                            "" => return Err(syntax(lineno, format!("empty annotation in {sym}"))),
                            name => SlotLabel::Named(name.to_string()),
                        };
                        (&sym[..pos], slot)
                    }
                    None => (sym, SlotLabel::Lexical),
                };
                if name.is_empty() {
                    return Err(syntax(lineno, format!("missing category name in {sym}")));
                }
                if matches!(slot, SlotLabel::Head) {
                    if head_index.is_some() {
                        return Err(syntax(lineno, "more than one [h] marker".into()));
                    }
                    head_index = Some(rhs.len());
                }
                rhs.push(Grammar::intern(&mut g.categories, &mut index, name));
                slots.push(slot);
            }
            if rhs.is_empty() {
                return Err(syntax(lineno, "empty right-hand side".into()));
            }
            let head_index =
                head_index.ok_or_else(|| syntax(lineno, "missing head marker [h]".into()))?;
            let lhs = Grammar::intern(&mut g.categories, &mut index, lhs);
            g.rules.push(Rule {
                lhs,
                rhs,
                head_index,
                slots,
                coord,
                line: Some(lineno),
            });
        }
    }

    let report = g.validate();
    if !report.is_empty() {
        return Err(GrammarError::Invalid(report));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_rule_with_lexical_slot() {
        let g = parse_grammar("%start NP\n%lex N N\n%lex P P\nNP -> NP[h] PP\nNP -> N[h]\nPP -> P[h] NP[-]\n").unwrap();
        let rule = &g.rules[0];
        assert_eq!(g.name(rule.lhs), "NP");
        assert_eq!(rule.head_index, 0);
        assert_eq!(rule.slots[1], SlotLabel::Lexical);
        assert!(!rule.coord);
    }

    #[test]
    fn coord_rule_has_arity_three() {
        let g = parse_grammar(
            "%start VP\n%lex V V\n%lex C C\nVP -> VP[h] C VP :coord\nVP -> V[h]\n",
        )
        .unwrap();
        let rule = &g.rules[0];
        assert!(rule.coord);
        assert_eq!(rule.arity(), 3);
    }

    #[test]
    fn missing_head_is_an_error() {
        let err = parse_grammar("%start PP\n%lex P P\n%lex N N\nPP -> P N\n").unwrap_err();
        match err {
            GrammarError::Syntax { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("head"), "{message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn fixture_grammar_is_valid() {
        let g = fixtures::grammar();
        assert!(g.validate().is_empty());
        assert_eq!(g.rules.len(), 12);
    }

    #[test]
    fn arity_four_reported() {
        let mut g = fixtures::grammar();
        let np = g.find_category("NP").unwrap();
        let n = g.find_category("N").unwrap();
        g.rules.push(Rule {
            lhs: np,
            rhs: vec![n, n, n, n],
            head_index: 0,
            slots: vec![SlotLabel::Head, SlotLabel::Skip, SlotLabel::Skip, SlotLabel::Skip],
            coord: false,
            line: None,
        });
        let report = g.validate();
        assert_eq!(report.len(), 1, "{report:?}");
        assert!(report[0].message.contains("exceeds 3"));
    }

    #[test]
    fn unreachable_start_reported() {
        let mut g = fixtures::grammar();
        g.start = Some(g.find_category("P").unwrap());
        let report = g.validate();
        assert!(report.iter().any(|v| v.message.contains("unreachable start")), "{report:?}");
    }

    #[test]
    fn unary_cycle_reported() {
        let err = parse_grammar("%start A\n%lex X X\nA -> B[h]\nB -> A[h]\nA -> X[h]\n").unwrap_err();
        match err {
            GrammarError::Invalid(report) => {
                assert!(report.iter().any(|v| v.message.contains("unary rule cycle")), "{report:?}");
            }
            other => panic!("expected invalid grammar, got {other:?}"),
        }
    }

    #[test]
    fn serialize_round_trip() {
        let g = fixtures::grammar();
        let text = g.serialize();
        let back = parse_grammar(&text).unwrap();
        // Category interning order can differ; compare by observable shape.
        assert_eq!(g.rules.len(), back.rules.len());
        for (a, b) in g.rules.iter().zip(&back.rules) {
            assert_eq!(g.describe_rule(a), back.describe_rule(b));
            assert_eq!(a.head_index, b.head_index);
            assert_eq!(a.coord, b.coord);
        }
        assert_eq!(back.serialize(), text);
    }
}
