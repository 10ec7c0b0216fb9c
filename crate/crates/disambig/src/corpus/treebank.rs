//! Bracketed treebank files: one tree per line, `(CAT child ...)` with
//! `(TAG word)` leaves. Loading is strict: every tree must be derivable
//! under the active grammar, and any malformed line aborts with its
//! location.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::grammar::Grammar;
use crate::parser::{Span, Token, Tree, TreeKind};

pub const TREEBANK_MAGIC: &str = "#disambig-treebank";
pub const TREEBANK_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq)]
pub struct TreebankEntry {
    pub tokens: Vec<Token>,
    pub tree: Tree,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Treebank {
    pub entries: Vec<TreebankEntry>,
}

impl Treebank {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.entries.iter().map(|e| &e.tree)
    }
}

#[derive(Debug, Error)]
pub enum TreebankError {
    #[error("line {line}: unbalanced brackets")]
    Unbalanced { line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown tag {tag}")]
    UnknownTag { line: usize, tag: String },
    #[error("line {line}: unknown category {name}")]
    UnknownCategory { line: usize, name: String },
    #[error("line {line}: tree is not derivable: no rule {rule}")]
    Underivable { line: usize, rule: String },
    #[error("line {line}: root {found} is not the start category {start}")]
    WrongRoot { line: usize, found: String, start: String },
    #[error("unsupported treebank version {found}, expected {TREEBANK_VERSION}")]
    VersionMismatch { found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexp(line: &str, lineno: usize) -> Result<Sexp, TreebankError> {
    let mut stack: Vec<Vec<Sexp>> = Vec::new();
    let mut atom = String::new();
    let mut top: Option<Sexp> = None;

    let flush = |atom: &mut String, stack: &mut Vec<Vec<Sexp>>| -> Result<(), TreebankError> {
        if atom.is_empty() {
            return Ok(());
        }
        let s = Sexp::Atom(std::mem::take(atom));
        match stack.last_mut() {
            Some(frame) => frame.push(s),
            None => {
                return Err(TreebankError::Malformed {
                    line: lineno,
                    message: "token outside brackets".into(),
                })
            }
        }
        Ok(())
    };

    for ch in line.chars() {
        match ch {
            '(' => {
                flush(&mut atom, &mut stack)?;
                stack.push(Vec::new());
            }
            ')' => {
                flush(&mut atom, &mut stack)?;
                let frame = stack.pop().ok_or(TreebankError::Unbalanced { line: lineno })?;
                let node = Sexp::List(frame);
                match stack.last_mut() {
                    Some(parent) => parent.push(node),
                    None => {
                        if top.is_some() {
                            return Err(TreebankError::Malformed {
                                line: lineno,
                                message: "more than one tree on the line".into(),
                            });
                        }
                        top = Some(node);
                    }
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack)?,
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut stack)?;
    if !stack.is_empty() {
        return Err(TreebankError::Unbalanced { line: lineno });
    }
    top.ok_or(TreebankError::Malformed { line: lineno, message: "empty tree".into() })
}

fn sexp_to_tree(
    sexp: &Sexp,
    g: &Grammar,
    lineno: usize,
    next_pos: &mut usize,
) -> Result<Tree, TreebankError> {
    let Sexp::List(items) = sexp else {
        return Err(TreebankError::Malformed { line: lineno, message: "bare word outside a node".into() });
    };
    let mut it = items.iter();
    let label = match it.next() {
        Some(Sexp::Atom(label)) => label.clone(),
        _ => {
            return Err(TreebankError::Malformed {
                line: lineno,
                message: "node must start with a label".into(),
            })
        }
    };
    let rest: Vec<&Sexp> = it.collect();
    if rest.is_empty() {
        return Err(TreebankError::Malformed { line: lineno, message: format!("node {label} has no children") });
    }
    let all_atoms = rest.iter().all(|s| matches!(s, Sexp::Atom(_)));
    if all_atoms {
        if rest.len() != 1 {
            return Err(TreebankError::Malformed {
                line: lineno,
                message: format!("leaf {label} must be (TAG word)"),
            });
        }
        let Sexp::Atom(word) = rest[0] else { unreachable!() };
        let cat = *g
            .lexicon
            .get(&label)
            .ok_or_else(|| TreebankError::UnknownTag { line: lineno, tag: label.clone() })?;
        let pos = *next_pos;
        *next_pos += 1;
        return Ok(Tree {
            cat,
            span: Span::new(pos, pos + 1),
            kind: TreeKind::Leaf { token: Token::new(word.clone(), label) },
        });
    }
    let lhs = g
        .find_category(&label)
        .ok_or_else(|| TreebankError::UnknownCategory { line: lineno, name: label.clone() })?;
    let start = *next_pos;
    let mut children = Vec::with_capacity(rest.len());
    for child in rest {
        children.push(sexp_to_tree(child, g, lineno, next_pos)?);
    }
    let rhs: Vec<_> = children.iter().map(|c| c.cat).collect();
    let rule = g.find_rule(lhs, &rhs).ok_or_else(|| TreebankError::Underivable {
        line: lineno,
        rule: format!(
            "{} -> {}",
            label,
            rhs.iter().map(|&c| g.name(c)).collect::<Vec<_>>().join(" ")
        ),
    })?;
    Ok(Tree {
        cat: lhs,
        span: Span::new(start, *next_pos),
        kind: TreeKind::Node { rule, children },
    })
}

/// Reads a treebank, verifying each tree against the grammar. Lines
/// starting with `#` are comments; a `#disambig-treebank` header, when
/// present, must carry the supported version.
pub fn read_treebank(reader: impl BufRead, g: &Grammar) -> Result<Treebank, TreebankError> {
    let mut entries = Vec::new();
    let start = g.start.expect("grammar has a start category");
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix(TREEBANK_MAGIC) {
            let found = rest.trim().split_whitespace().next().unwrap_or("").to_string();
            if found != TREEBANK_VERSION {
                return Err(TreebankError::VersionMismatch { found });
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let sexp = parse_sexp(trimmed, lineno)?;
        let mut next_pos = 0;
        let tree = sexp_to_tree(&sexp, g, lineno, &mut next_pos)?;
        if tree.cat != start {
            return Err(TreebankError::WrongRoot {
                line: lineno,
                found: g.name(tree.cat).to_string(),
                start: g.name(start).to_string(),
            });
        }
        let tokens = tree.leaves().into_iter().cloned().collect();
        entries.push(TreebankEntry { tokens, tree });
    }
    Ok(Treebank { entries })
}

/// Writes a treebank with its version header, one bracketed tree per line.
pub fn write_treebank(mut w: impl Write, tb: &Treebank, g: &Grammar) -> std::io::Result<()> {
    writeln!(w, "{TREEBANK_MAGIC} {TREEBANK_VERSION}")?;
    for entry in &tb.entries {
        writeln!(w, "{}", entry.tree.bracketed(g))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_tree_round_trip() {
        let g = fixtures::grammar();
        let text = "(S (NP (N I)) (VP (V ate)))";
        let tb = read_treebank(text.as_bytes(), &g).unwrap();
        assert_eq!(tb.len(), 1);
        assert_eq!(tb.entries[0].tokens.len(), 2);
        let mut out = Vec::new();
        write_treebank(&mut out, &tb, &g).unwrap();
        let back = read_treebank(out.as_slice(), &g).unwrap();
        assert_eq!(back, tb);
    }

    #[test]
    fn unbalanced_brackets_cite_the_line() {
        let g = fixtures::grammar();
        let text = "(S (NP (N I)) (VP (V ate)))\n\n(S (NP (N I)) (VP (V ate))";
        match read_treebank(text.as_bytes(), &g) {
            Err(TreebankError::Unbalanced { line }) => assert_eq!(line, 3),
            other => panic!("expected unbalanced error, got {other:?}"),
        }
    }

    #[test]
    fn underivable_tree_is_rejected() {
        let g = fixtures::grammar();
        // PP -> NP P is not a rule.
        let text = "(S (NP (N I)) (VP (V ate) (NP (N it)) (NP (N now))))";
        match read_treebank(text.as_bytes(), &g) {
            Err(TreebankError::Underivable { line, rule }) => {
                assert_eq!(line, 1);
                assert!(rule.contains("VP ->"), "{rule}");
            }
            other => panic!("expected underivable error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_tag_is_rejected() {
        let g = fixtures::grammar();
        let text = "(S (NP (XX I)) (VP (V ate)))";
        match read_treebank(text.as_bytes(), &g) {
            Err(TreebankError::UnknownTag { tag, .. }) => assert_eq!(tag, "XX"),
            other => panic!("expected unknown tag error, got {other:?}"),
        }
    }

    #[test]
    fn version_header_is_checked() {
        let g = fixtures::grammar();
        let text = "#disambig-treebank v9\n(S (NP (N I)) (VP (V ate)))";
        assert!(matches!(
            read_treebank(text.as_bytes(), &g),
            Err(TreebankError::VersionMismatch { .. })
        ));
    }
}
