//! Exhaustive bottom-up chart parsing into a packed forest, plus
//! enumeration of complete interpretations with their attachment records.
//!
//! Rules of arity up to 3 are applied directly, without binarization, so
//! ternary coordinate rules keep their own length tuples. Spans are
//! half-open over token indices.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::grammar::{Cat, Grammar, RuleId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub tag: String,
}

impl Token {
    pub fn new(surface: impl Into<String>, tag: impl Into<String>) -> Self {
        Token { surface: surface.into(), tag: tag.into() }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.surface, self.tag)
    }
}

/// Half-open token span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// One way of deriving a chart item: either a leaf token under a
/// preterminal, or a rule application with its split points.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Deriv {
    Leaf,
    /// `splits` holds the `arity - 1` interior boundaries, in order.
    Node { rule: RuleId, splits: Vec<usize> },
}

/// Packed parse forest: chart items keyed by (span, category), each holding
/// every derivation of that item. Shared subderivations are stored once.
#[derive(Debug)]
pub struct ParseForest {
    tokens: Vec<Token>,
    start: Cat,
    cells: HashMap<(Span, Cat), Vec<Deriv>>,
    /// Right-hand sides of the grammar's rules, copied so the forest can be
    /// walked without the grammar.
    rule_rhs: Vec<Vec<Cat>>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty sentence")]
    EmptySentence,
    #[error("unknown tag {tag} on token {index} ({surface})")]
    UnknownTag { index: usize, surface: String, tag: String },
    #[error("grammar is invalid; run validation for details")]
    InvalidGrammar,
    #[error("sentence has {count} interpretations, more than the cap of {cap}")]
    TooManyInterpretations { count: u64, cap: u64 },
}

/// Ordered tree of one complete parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub cat: Cat,
    pub span: Span,
    pub kind: TreeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeKind {
    Leaf { token: Token },
    Node { rule: RuleId, children: Vec<Tree> },
}

impl Tree {
    pub fn len(&self) -> usize {
        self.span.len()
    }

    pub fn is_empty(&self) -> bool {
        self.span.is_empty()
    }

    pub fn children(&self) -> &[Tree] {
        match &self.kind {
            TreeKind::Leaf { .. } => &[],
            TreeKind::Node { children, .. } => children,
        }
    }

    pub fn leaves(&self) -> Vec<&Token> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Token>) {
        match &self.kind {
            TreeKind::Leaf { token } => out.push(token),
            TreeKind::Node { children, .. } => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    /// Pre-order walk over internal nodes.
    pub fn walk_nodes<'a>(&'a self, f: &mut impl FnMut(&'a Tree)) {
        if let TreeKind::Node { children, .. } = &self.kind {
            f(self);
            for child in children {
                child.walk_nodes(f);
            }
        }
    }

    /// Rule applications in pre-order.
    pub fn applied_rules(&self) -> Vec<RuleId> {
        let mut out = Vec::new();
        self.walk_nodes(&mut |node| {
            if let TreeKind::Node { rule, .. } = &node.kind {
                out.push(*rule);
            }
        });
        out
    }

    /// Bracketed rendering, `(CAT child ...)` with `(TAG word)` leaves.
    pub fn bracketed(&self, g: &Grammar) -> String {
        match &self.kind {
            TreeKind::Leaf { token } => format!("({} {})", token.tag, token.surface),
            TreeKind::Node { children, .. } => {
                let inner: Vec<String> = children.iter().map(|c| c.bracketed(g)).collect();
                format!("({} {})", g.name(self.cat), inner.join(" "))
            }
        }
    }
}

/// One rule application with the lengths of its children, the unit scored
/// by the length-probability model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentRecord {
    pub rule: RuleId,
    pub child_lengths: Vec<u32>,
}

/// One complete parse: its tree, the attachment records of every rule
/// application, and (once the frames module has run) its dependency triples.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub tree: Tree,
    pub attachments: Vec<AttachmentRecord>,
    pub triples: Vec<crate::frames::DependencyTriple>,
}

impl Interpretation {
    /// Builds the interpretation for a tree: attachment records are filled
    /// in here, dependency triples by [`crate::frames::extract_triples`].
    pub fn from_tree(tree: Tree) -> Self {
        let mut attachments = Vec::new();
        tree.walk_nodes(&mut |node| {
            if let TreeKind::Node { rule, children } = &node.kind {
                attachments.push(AttachmentRecord {
                    rule: *rule,
                    child_lengths: children.iter().map(|c| c.len() as u32).collect(),
                });
            }
        });
        Interpretation { tree, attachments, triples: Vec::new() }
    }

    pub fn annotate_triples(&mut self, g: &Grammar, lemmas: &crate::frames::Lemmas) {
        self.triples = crate::frames::extract_triples(&self.tree, g, lemmas);
    }
}

/// Parses a tagged sentence exhaustively. The forest contains a derivation
/// of the start category over the full span iff the sentence is grammatical.
pub fn parse(g: &Grammar, tokens: &[Token]) -> Result<ParseForest, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptySentence);
    }
    if !g.validate().is_empty() {
        return Err(ParseError::InvalidGrammar);
    }
    let start = g.start.expect("validated grammar has a start");
    let n = tokens.len();
    let mut cells: HashMap<(Span, Cat), Vec<Deriv>> = HashMap::new();

    // Length-1 spans: preterminal leaves, then unary closure.
    for (i, token) in tokens.iter().enumerate() {
        let cat = *g.lexicon.get(&token.tag).ok_or_else(|| ParseError::UnknownTag {
            index: i,
            surface: token.surface.clone(),
            tag: token.tag.clone(),
        })?;
        cells.insert((Span::new(i, i + 1), cat), vec![Deriv::Leaf]);
    }
    for i in 0..n {
        close_unary(g, &mut cells, Span::new(i, i + 1));
    }

    for width in 2..=n {
        for start_pos in 0..=(n - width) {
            let span = Span::new(start_pos, start_pos + width);
            for (idx, rule) in g.rules.iter().enumerate() {
                let id = RuleId(idx);
                match rule.arity() {
                    2 => {
                        for mid in span.start + 1..span.end {
                            let left = Span::new(span.start, mid);
                            let right = Span::new(mid, span.end);
                            if cells.contains_key(&(left, rule.rhs[0]))
                                && cells.contains_key(&(right, rule.rhs[1]))
                            {
                                cells
                                    .entry((span, rule.lhs))
                                    .or_default()
                                    .push(Deriv::Node { rule: id, splits: vec![mid] });
                            }
                        }
                    }
                    3 => {
                        for m1 in span.start + 1..span.end - 1 {
                            for m2 in m1 + 1..span.end {
                                let (a, b, c) = (
                                    Span::new(span.start, m1),
                                    Span::new(m1, m2),
                                    Span::new(m2, span.end),
                                );
                                if cells.contains_key(&(a, rule.rhs[0]))
                                    && cells.contains_key(&(b, rule.rhs[1]))
                                    && cells.contains_key(&(c, rule.rhs[2]))
                                {
                                    cells
                                        .entry((span, rule.lhs))
                                        .or_default()
                                        .push(Deriv::Node { rule: id, splits: vec![m1, m2] });
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
            close_unary(g, &mut cells, span);
        }
    }

    // Deterministic derivation order within each item.
    for derivs in cells.values_mut() {
        derivs.sort_by(|a, b| deriv_key(a).cmp(&deriv_key(b)));
    }

    Ok(ParseForest {
        tokens: tokens.to_vec(),
        start,
        cells,
        rule_rhs: g.rules.iter().map(|r| r.rhs.clone()).collect(),
    })
}

fn deriv_key(d: &Deriv) -> (usize, Vec<usize>) {
    match d {
        Deriv::Leaf => (0, Vec::new()),
        Deriv::Node { rule, splits } => (rule.0 + 1, splits.clone()),
    }
}

/// Closes a span's items under unary rules. Grammar validation rejected
/// unary cycles, so the iteration terminates.
fn close_unary(g: &Grammar, cells: &mut HashMap<(Span, Cat), Vec<Deriv>>, span: Span) {
    loop {
        let mut added = false;
        for (idx, rule) in g.rules.iter().enumerate() {
            if rule.arity() != 1 {
                continue;
            }
            if !cells.contains_key(&(span, rule.rhs[0])) {
                continue;
            }
            let deriv = Deriv::Node { rule: RuleId(idx), splits: Vec::new() };
            let entry = cells.entry((span, rule.lhs)).or_default();
            if !entry.contains(&deriv) {
                entry.push(deriv);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
}

impl ParseForest {
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn sentence_len(&self) -> usize {
        self.tokens.len()
    }

    fn full_span(&self) -> Span {
        Span::new(0, self.tokens.len())
    }

    pub fn is_grammatical(&self) -> bool {
        self.cells.contains_key(&(self.full_span(), self.start))
    }

    /// Number of complete parses, computed by dynamic programming over the
    /// packed forest without enumerating trees.
    pub fn count_parses(&self) -> u64 {
        let mut memo: HashMap<(Span, Cat), u64> = HashMap::new();
        self.count_item(self.full_span(), self.start, &mut memo)
    }

    fn count_item(&self, span: Span, cat: Cat, memo: &mut HashMap<(Span, Cat), u64>) -> u64 {
        if let Some(&c) = memo.get(&(span, cat)) {
            return c;
        }
        let total = match self.cells.get(&(span, cat)) {
            None => 0,
            Some(derivs) => derivs
                .iter()
                .map(|d| match d {
                    Deriv::Leaf => 1,
                    Deriv::Node { rule, splits } => {
                        let child_spans = split_spans(span, splits);
                        child_spans
                            .iter()
                            .zip(&self.rule_rhs[rule.0])
                            .map(|(&s, &c)| self.count_item(s, c, memo))
                            .product()
                    }
                })
                .sum(),
        };
        memo.insert((span, cat), total);
        total
    }

    /// Enumerates every complete interpretation in a deterministic order
    /// (lexicographic by rule index and split points). Exceeding `cap` is an
    /// error, never a silent truncation.
    pub fn enumerate(&self, cap: Option<u64>) -> Result<Vec<Interpretation>, ParseError> {
        let count = self.count_parses();
        if let Some(cap) = cap {
            if count > cap {
                return Err(ParseError::TooManyInterpretations { count, cap });
            }
        }
        let trees = self.trees_for(self.full_span(), self.start);
        Ok(trees.into_iter().map(Interpretation::from_tree).collect())
    }

    fn trees_for(&self, span: Span, cat: Cat) -> Vec<Tree> {
        let mut out = Vec::new();
        let Some(derivs) = self.cells.get(&(span, cat)) else {
            return out;
        };
        for deriv in derivs {
            match deriv {
                Deriv::Leaf => out.push(Tree {
                    cat,
                    span,
                    kind: TreeKind::Leaf { token: self.tokens[span.start].clone() },
                }),
                Deriv::Node { rule, splits } => {
                    let child_spans = split_spans(span, splits);
                    let child_cats = &self.rule_rhs[rule.0];
                    let per_child: Vec<Vec<Tree>> = child_spans
                        .iter()
                        .zip(child_cats)
                        .map(|(&s, &c)| self.trees_for(s, c))
                        .collect();
                    cartesian(&per_child, &mut |children| {
                        out.push(Tree {
                            cat,
                            span,
                            kind: TreeKind::Node { rule: *rule, children },
                        });
                    });
                }
            }
        }
        out
    }
}

fn split_spans(span: Span, splits: &[usize]) -> Vec<Span> {
    let mut bounds = Vec::with_capacity(splits.len() + 2);
    bounds.push(span.start);
    bounds.extend_from_slice(splits);
    bounds.push(span.end);
    bounds.windows(2).map(|w| Span::new(w[0], w[1])).collect()
}

/// Calls `f` with every combination of one tree per child slot, leftmost
/// slot most significant.
fn cartesian(per_child: &[Vec<Tree>], f: &mut impl FnMut(Vec<Tree>)) {
    fn rec(per_child: &[Vec<Tree>], acc: &mut Vec<Tree>, f: &mut impl FnMut(Vec<Tree>)) {
        if acc.len() == per_child.len() {
            f(acc.clone());
            return;
        }
        for tree in &per_child[acc.len()] {
            acc.push(tree.clone());
            rec(per_child, acc, f);
            acc.pop();
        }
    }
    rec(per_child, &mut Vec::new(), f);
}

/// Parses one `surface/TAG` line into tokens.
pub fn parse_tagged_line(line: &str) -> Result<Vec<Token>, String> {
    line.split_whitespace()
        .map(|item| {
            let (surface, tag) = item
                .rsplit_once('/')
                .ok_or_else(|| format!("token {item} is not of the form surface/TAG"))?;
            if surface.is_empty() || tag.is_empty() {
                return Err(format!("token {item} is not of the form surface/TAG"));
            }
            Ok(Token::new(surface, tag))
        })
        .collect()
}
