//! Versioned model files. Counts are stored, not probabilities, so
//! re-estimation after a round trip is exact.
//!
//! ```text
//! #disambig-model v1 lex
//! #sha256 <hex digest of the body>
//! <tab-separated count rows>
//! ```

use std::fmt;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::frames;
use crate::grammar::Grammar;
use crate::lenmodel::LenModel;
use crate::lexmodel::LexModel;
use crate::pcfg::PcfgModel;

pub const MODEL_MAGIC: &str = "#disambig-model";
pub const MODEL_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lex,
    Len,
    Pcfg,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Lex => write!(f, "lex"),
            ModelKind::Len => write!(f, "len"),
            ModelKind::Pcfg => write!(f, "pcfg"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("not a model file: missing {MODEL_MAGIC} header")]
    BadMagic,
    #[error("unsupported model version {found}, expected {MODEL_VERSION}")]
    VersionMismatch { found: String },
    #[error("model file holds a {found} model, expected {expected}")]
    KindMismatch { expected: ModelKind, found: String },
    #[error("checksum failure: file is corrupt or truncated")]
    ChecksumMismatch,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("model references rule `{key}` missing from the grammar")]
    UnknownRule { key: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn digest(body: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    format!("{:x}", hasher.finalize())
}

fn write_model(path: &Path, kind: ModelKind, body: &str) -> Result<(), ModelIoError> {
    let text = format!("{MODEL_MAGIC} {MODEL_VERSION} {kind}\n#sha256 {}\n{body}", digest(body));
    fs::write(path, text)?;
    Ok(())
}

fn read_model(path: &Path, expected: ModelKind) -> Result<String, ModelIoError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.splitn(3, '\n');
    let header = lines.next().unwrap_or("");
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MODEL_MAGIC) {
        return Err(ModelIoError::BadMagic);
    }
    let version = parts.next().unwrap_or("").to_string();
    if version != MODEL_VERSION {
        return Err(ModelIoError::VersionMismatch { found: version });
    }
    let kind = parts.next().unwrap_or("").to_string();
    if kind != expected.to_string() {
        return Err(ModelIoError::KindMismatch { expected, found: kind });
    }
    let checksum_line = lines.next().ok_or(ModelIoError::ChecksumMismatch)?;
    let stored = checksum_line.strip_prefix("#sha256 ").ok_or(ModelIoError::ChecksumMismatch)?;
    let body = lines.next().unwrap_or("").to_string();
    if digest(&body) != stored {
        return Err(ModelIoError::ChecksumMismatch);
    }
    Ok(body)
}

pub fn save_lex(path: impl AsRef<Path>, model: &LexModel) -> Result<(), ModelIoError> {
    let mut body = String::new();
    for (head, kind, slot, dep, count) in model.tri_rows() {
        body.push_str(&format!("{head}\t{kind}\t{slot}\t{dep}\t{count}\n"));
    }
    write_model(path.as_ref(), ModelKind::Lex, &body)
}

/// Loads a lexical model. The two-word table is rebuilt from the same
/// counts, exactly as fitting does.
pub fn load_lex(path: impl AsRef<Path>) -> Result<LexModel, ModelIoError> {
    let body = read_model(path.as_ref(), ModelKind::Lex)?;
    let rows = frames::read_triples(body.as_bytes()).map_err(|e| match e {
        frames::TripleIoError::Malformed { line, message } => {
            // Account for the two header lines in reported positions.
            ModelIoError::Malformed { line: line + 2, message }
        }
        frames::TripleIoError::Io(e) => ModelIoError::Io(e),
    })?;
    Ok(LexModel::fit(rows))
}

pub fn save_len(path: impl AsRef<Path>, model: &LenModel, g: &Grammar) -> Result<(), ModelIoError> {
    let mut body = String::new();
    for (rule, lengths, count) in model.rows() {
        let lengths: Vec<String> = lengths.iter().map(|l| l.to_string()).collect();
        body.push_str(&format!("{}\t{}\t{}\n", g.rule_key(rule), lengths.join(","), count));
    }
    write_model(path.as_ref(), ModelKind::Len, &body)
}

pub fn load_len(path: impl AsRef<Path>, g: &Grammar) -> Result<LenModel, ModelIoError> {
    let body = read_model(path.as_ref(), ModelKind::Len)?;
    let mut model = LenModel::new(g);
    for (idx, line) in body.lines().enumerate() {
        let lineno = idx + 3;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(ModelIoError::Malformed {
                line: lineno,
                message: format!("expected 3 tab-separated fields, got {}", fields.len()),
            });
        }
        let rule = g
            .parse_rule_key(fields[0])
            .ok_or_else(|| ModelIoError::UnknownRule { key: fields[0].to_string() })?;
        let lengths: Result<Vec<u32>, _> = fields[1].split(',').map(str::parse).collect();
        let lengths = lengths.map_err(|e| ModelIoError::Malformed {
            line: lineno,
            message: format!("bad length tuple {}: {e}", fields[1]),
        })?;
        let count: u64 = fields[2].parse().map_err(|e| ModelIoError::Malformed {
            line: lineno,
            message: format!("bad count {}: {e}", fields[2]),
        })?;
        model.add(rule, &lengths, count).map_err(|e| ModelIoError::Malformed {
            line: lineno,
            message: e.to_string(),
        })?;
    }
    Ok(model)
}

pub fn save_pcfg(path: impl AsRef<Path>, model: &PcfgModel, g: &Grammar) -> Result<(), ModelIoError> {
    let mut body = String::new();
    for (rule, count) in model.rows() {
        body.push_str(&format!("{}\t{}\n", g.rule_key(rule), count));
    }
    write_model(path.as_ref(), ModelKind::Pcfg, &body)
}

pub fn load_pcfg(path: impl AsRef<Path>, g: &Grammar) -> Result<PcfgModel, ModelIoError> {
    let body = read_model(path.as_ref(), ModelKind::Pcfg)?;
    let mut model = PcfgModel::new(g);
    for (idx, line) in body.lines().enumerate() {
        let lineno = idx + 3;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(ModelIoError::Malformed {
                line: lineno,
                message: format!("expected 2 tab-separated fields, got {}", fields.len()),
            });
        }
        let rule = g
            .parse_rule_key(fields[0])
            .ok_or_else(|| ModelIoError::UnknownRule { key: fields[0].to_string() })?;
        let count: u64 = fields[1].parse().map_err(|e| ModelIoError::Malformed {
            line: lineno,
            message: format!("bad count {}: {e}", fields[1]),
        })?;
        model.add(rule, count);
    }
    Ok(model)
}
