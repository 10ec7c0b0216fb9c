//! Head-word propagation and case-frame extraction.
//!
//! Each rule names a head child; the head word of a constituent is found by
//! following head children down to a leaf. Every non-head, non-conjunct
//! child with a slot label yields one dependency triple
//! `(head, head_kind, slot, dependent)`. For `LEXICAL` slots the slot name
//! is the modifier's own head word (the preposition, for PP modifiers) and
//! the dependent is the head word of the modifier's complement, so
//! `VP -> VP[h] PP` over "ate ... with a spoon" yields `(eat, verb, with,
//! spoon)`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::grammar::{Grammar, SlotLabel};
use crate::parser::{Tree, TreeKind};

/// Whether a head word opens a verb or a noun case frame. Verb frames and
/// noun frames are distinct conditional distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum HeadKind {
    Verb,
    Noun,
}

impl fmt::Display for HeadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeadKind::Verb => write!(f, "verb"),
            HeadKind::Noun => write!(f, "noun"),
        }
    }
}

impl std::str::FromStr for HeadKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verb" => Ok(HeadKind::Verb),
            "noun" => Ok(HeadKind::Noun),
            other => Err(format!("unknown head kind {other}")),
        }
    }
}

/// One case-frame slot filler.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DependencyTriple {
    pub head: String,
    pub head_kind: HeadKind,
    pub slot: String,
    pub dependent: String,
}

impl DependencyTriple {
    pub fn new(
        head: impl Into<String>,
        head_kind: HeadKind,
        slot: impl Into<String>,
        dependent: impl Into<String>,
    ) -> Self {
        DependencyTriple {
            head: head.into(),
            head_kind,
            slot: slot.into(),
            dependent: dependent.into(),
        }
    }
}

impl fmt::Display for DependencyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{} {} {})", self.head, self.head_kind, self.slot, self.dependent)
    }
}

/// Optional surface -> lemma table; identity for unknown words.
#[derive(Debug, Clone, Default)]
pub struct Lemmas(BTreeMap<String, String>);

impl Lemmas {
    pub fn identity() -> Self {
        Lemmas::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Lemmas(pairs.into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
    }

    /// Reads a table of `surface<TAB or space>lemma` lines; `#` comments.
    pub fn read(reader: impl BufRead) -> Result<Self, TripleIoError> {
        let mut map = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(surface), Some(lemma), None) => {
                    map.insert(surface.to_string(), lemma.to_string());
                }
                _ => {
                    return Err(TripleIoError::Malformed {
                        line: idx + 1,
                        message: "expected `surface lemma`".into(),
                    })
                }
            }
        }
        Ok(Lemmas(map))
    }

    pub fn apply<'a>(&'a self, word: &'a str) -> &'a str {
        self.0.get(word).map(String::as_str).unwrap_or(word)
    }
}

/// The leaf reached by following head children from `node`.
pub fn head_leaf<'a>(node: &'a Tree, g: &Grammar) -> &'a Tree {
    match &node.kind {
        TreeKind::Leaf { .. } => node,
        TreeKind::Node { rule, children } => head_leaf(&children[g.rule(*rule).head_index], g),
    }
}

/// Head word of a constituent, lemma-normalized.
pub fn head_word<'a>(node: &'a Tree, g: &Grammar, lemmas: &'a Lemmas) -> &'a str {
    match &head_leaf(node, g).kind {
        TreeKind::Leaf { token } => lemmas.apply(&token.surface),
        TreeKind::Node { .. } => unreachable!("head_leaf returns a leaf"),
    }
}

fn head_kind(node: &Tree, g: &Grammar) -> HeadKind {
    let leaf = head_leaf(node, g);
    if g.category(leaf.cat).is_verbal {
        HeadKind::Verb
    } else {
        HeadKind::Noun
    }
}

/// Extracts the case-frame dependency triples of a tree. Coordinate rules
/// contribute no triples; coordination preference is handled syntactically.
pub fn extract_triples(tree: &Tree, g: &Grammar, lemmas: &Lemmas) -> Vec<DependencyTriple> {
    let mut out = Vec::new();
    tree.walk_nodes(&mut |node| {
        let TreeKind::Node { rule, children } = &node.kind else {
            return;
        };
        let rule = g.rule(*rule);
        if rule.coord {
            return;
        }
        let head_child = &children[rule.head_index];
        let head = head_word(head_child, g, lemmas).to_string();
        let kind = head_kind(head_child, g);
        for (pos, child) in children.iter().enumerate() {
            match &rule.slots[pos] {
                SlotLabel::Head | SlotLabel::Skip => {}
                SlotLabel::Named(slot) => {
                    out.push(DependencyTriple::new(
                        head.clone(),
                        kind,
                        slot.clone(),
                        head_word(child, g, lemmas),
                    ));
                }
                SlotLabel::Lexical => {
                    let slot = head_word(child, g, lemmas).to_lowercase();
                    out.push(DependencyTriple::new(
                        head.clone(),
                        kind,
                        slot,
                        lexical_dependent(child, g, lemmas),
                    ));
                }
            }
        }
    });
    out
}

/// The dependent behind a LEXICAL modifier: the head word of the modifier's
/// first non-head child (the complement of the preposition). Falls back to
/// the modifier's own head word when there is no such child.
fn lexical_dependent<'a>(modifier: &'a Tree, g: &Grammar, lemmas: &'a Lemmas) -> &'a str {
    if let TreeKind::Node { rule, children } = &modifier.kind {
        let rule = g.rule(*rule);
        for (pos, child) in children.iter().enumerate() {
            if pos != rule.head_index {
                return head_word(child, g, lemmas);
            }
        }
    }
    head_word(modifier, g, lemmas)
}

#[derive(Debug, Error)]
pub enum TripleIoError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes triples with counts as TSV: `head, head_kind, slot, dependent,
/// count`, aggregated and sorted.
pub fn write_triples(
    mut w: impl Write,
    triples: impl IntoIterator<Item = DependencyTriple>,
) -> std::io::Result<()> {
    let mut counts: BTreeMap<DependencyTriple, u64> = BTreeMap::new();
    for t in triples {
        *counts.entry(t).or_default() += 1;
    }
    for (t, count) in counts {
        writeln!(w, "{}\t{}\t{}\t{}\t{}", t.head, t.head_kind, t.slot, t.dependent, count)?;
    }
    Ok(())
}

/// Reads a triples TSV. Malformed records are rejected with their line
/// number.
pub fn read_triples(reader: impl BufRead) -> Result<Vec<(DependencyTriple, u64)>, TripleIoError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let malformed = |message: String| TripleIoError::Malformed { line: idx + 1, message };
        if fields.len() != 5 {
            return Err(malformed(format!("expected 5 tab-separated fields, got {}", fields.len())));
        }
        let kind: HeadKind = fields[1].parse().map_err(malformed)?;
        let count: u64 = fields[4]
            .parse()
            .map_err(|e| malformed(format!("bad count {}: {e}", fields[4])))?;
        out.push((
            DependencyTriple::new(fields[0], kind, fields[2], fields[3]),
            count,
        ));
    }
    Ok(out)
}
