//! Grammars and sentences shipped with the crate, used by the examples and
//! the test suite.

use crate::grammar::{parse_grammar, Grammar};

/// The bundled English grammar (12 rules): sentences with optional subjects,
/// PP attachment to noun and verb phrases, and NP/VP coordination.
pub const GRAMMAR_TEXT: &str = include_str!("../fixtures/english.gr");

/// Parses [`GRAMMAR_TEXT`].
pub fn grammar() -> Grammar {
    parse_grammar(GRAMMAR_TEXT).expect("bundled grammar is valid")
}

/// Same rule set with `NP` as the start category, for parsing bare noun
/// phrases such as the classic two-PP attachment chain.
pub fn np_grammar() -> Grammar {
    let text = GRAMMAR_TEXT.replace("%start S", "%start NP");
    parse_grammar(&text).expect("bundled grammar is valid")
}

/// Small lemma table covering the irregular verbs in the bundled sentences.
pub fn lemmas() -> crate::frames::Lemmas {
    crate::frames::Lemmas::from_pairs([("ate", "eat"), ("washes", "wash"), ("reclaimed", "reclaim")])
}
