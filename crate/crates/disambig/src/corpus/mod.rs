//! Treebank and test-set I/O, model serialization, and the synthetic-corpus
//! generator.

pub mod io;
pub mod synth;
pub mod treebank;

pub use io::{load_len, load_lex, load_pcfg, save_len, save_lex, save_pcfg, ModelIoError};
pub use synth::{generate, generate_with_stats, FamilyWeights, LexPref, SynthConfig, SynthError, SynthStats};
pub use treebank::{read_treebank, write_treebank, Treebank, TreebankEntry, TreebankError};
