//! Shared test helpers: a brute-force parse enumerator independent of the
//! chart parser, and small combinatorial oracles.

use std::collections::HashMap;

use disambig::grammar::{Cat, Grammar, RuleId};
use disambig::parser::{Span, Token, Tree, TreeKind};

/// Enumerates every parse tree by top-down recursive descent over rules and
/// split points. No chart, no packing; the reference the parser is checked
/// against.
pub fn brute_force_trees(g: &Grammar, tokens: &[Token]) -> Vec<Tree> {
    let start = g.start.expect("grammar has a start");
    let mut memo = HashMap::new();
    all_trees(g, tokens, start, 0, tokens.len(), &mut memo)
}

#[allow(clippy::type_complexity)]
fn all_trees(
    g: &Grammar,
    tokens: &[Token],
    cat: Cat,
    i: usize,
    j: usize,
    memo: &mut HashMap<(Cat, usize, usize), Vec<Tree>>,
) -> Vec<Tree> {
    if let Some(cached) = memo.get(&(cat, i, j)) {
        return cached.clone();
    }
    let mut out = Vec::new();
    if j - i == 1 {
        if let Some(&leaf_cat) = g.lexicon.get(&tokens[i].tag) {
            if leaf_cat == cat {
                out.push(Tree {
                    cat,
                    span: Span::new(i, j),
                    kind: TreeKind::Leaf { token: tokens[i].clone() },
                });
            }
        }
    }
    for (idx, rule) in g.rules.iter().enumerate() {
        if rule.lhs != cat {
            continue;
        }
        let id = RuleId(idx);
        match rule.arity() {
            1 => {
                for child in all_trees(g, tokens, rule.rhs[0], i, j, memo) {
                    out.push(node(cat, i, j, id, vec![child]));
                }
            }
            2 => {
                for m in i + 1..j {
                    for left in all_trees(g, tokens, rule.rhs[0], i, m, memo) {
                        for right in all_trees(g, tokens, rule.rhs[1], m, j, memo) {
                            out.push(node(cat, i, j, id, vec![left.clone(), right]));
                        }
                    }
                }
            }
            3 => {
                for m1 in i + 1..j {
                    for m2 in m1 + 1..j {
                        for a in all_trees(g, tokens, rule.rhs[0], i, m1, memo) {
                            for b in all_trees(g, tokens, rule.rhs[1], m1, m2, memo) {
                                for c in all_trees(g, tokens, rule.rhs[2], m2, j, memo) {
                                    out.push(node(
                                        cat,
                                        i,
                                        j,
                                        id,
                                        vec![a.clone(), b.clone(), c],
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
    memo.insert((cat, i, j), out.clone());
    out
}

fn node(cat: Cat, i: usize, j: usize, rule: RuleId, children: Vec<Tree>) -> Tree {
    Tree { cat, span: Span::new(i, j), kind: TreeKind::Node { rule, children } }
}

pub fn catalan(n: usize) -> u64 {
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for i in 1..=n {
        for j in 0..i {
            c[i] += c[j] * c[i - 1 - j];
        }
    }
    c[n]
}

/// Canonical form for set comparison of parse lists.
pub fn sorted_brackets(g: &Grammar, trees: &[Tree]) -> Vec<String> {
    let mut out: Vec<String> = trees.iter().map(|t| t.bracketed(g)).collect();
    out.sort();
    out
}
