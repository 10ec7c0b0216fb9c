//! Structural disambiguation for small context-free grammars.
//!
//! The pipeline: a tagged sentence is parsed exhaustively into a packed
//! forest ([`parser`]), every interpretation is enumerated together with its
//! attachment records, case-frame dependency triples are extracted
//! ([`frames`]), and the interpretations are ranked by combining a lexical
//! likelihood (three-word / two-word conditional probabilities,
//! [`lexmodel`]) with a syntactic likelihood (per-rule length
//! probabilities, [`lenmodel`]) through a back-off cascade ([`ranker`]).
//! A plain PCFG baseline ([`pcfg`]), treebank I/O and a synthetic-corpus
//! generator ([`corpus`]), and an evaluation harness ([`eval`]) round out
//! the toolkit.
//!
//! Every capability has a runnable example under `examples/`; the `disambig`
//! binary exposes the same operations as batch subcommands.

pub mod cli;
pub mod corpus;
pub mod eval;
pub mod fixtures;
pub mod frames;
pub mod grammar;
pub mod lenmodel;
pub mod lexmodel;
pub mod parser;
pub mod pcfg;
pub mod ranker;

pub use frames::{DependencyTriple, HeadKind, Lemmas};
pub use grammar::{Category, Grammar, Rule, RuleId, SlotLabel};
pub use lenmodel::LenModel;
pub use lexmodel::LexModel;
pub use parser::{AttachmentRecord, Interpretation, ParseForest, Span, Token, Tree, TreeKind};
pub use pcfg::PcfgModel;
pub use ranker::{RankOutcome, RankerConfig, Scores, Stage, Strategy};
