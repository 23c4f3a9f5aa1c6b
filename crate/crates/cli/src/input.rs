//! Parsing of command-line subspace and vector arguments.
//!
//! The compact syntax lists vectors separated by `;` with entries separated
//! by `,`, e.g. `1,0;1,1`. Each vector may be wrapped in parentheses.
//! Entries are integer encodings of field elements (base-`p` digits, low
//! degree first, so over GF(4) `2` is `x`). An argument starting with `@`
//! names a file holding subspace JSON.

use std::fmt;
use std::fs;

use mqt_core::json::SubspaceJson;
use mqt_core::{FieldSpec, Subspace, Vector};

/// Bad command-line input; maps to exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

fn column(text: &str, byte: usize) -> usize {
    text[..byte].chars().count() + 1
}

/// Parses `text` as a `;`-separated list of vectors over `field`.
pub fn parse_vectors(field: &FieldSpec, text: &str) -> Result<Vec<Vector>, UsageError> {
    let mut out = Vec::new();
    let mut dim = None;
    let mut start = 0;
    for chunk in text.split(';') {
        let chunk_start = start;
        start += chunk.len() + 1;
        let trimmed = chunk.trim();
        if trimmed.is_empty() {
            return usage(format!(
                "position {}: empty vector in {text:?}",
                column(text, chunk_start)
            ));
        }
        let lead = chunk.len() - chunk.trim_start().len();
        let (body, offset) = match trimmed.strip_prefix('(') {
            Some(rest) => match rest.strip_suffix(')') {
                Some(inner) => (inner, chunk_start + lead + 1),
                None => {
                    return usage(format!(
                        "position {}: unclosed '(' in {text:?}",
                        column(text, chunk_start + lead)
                    ))
                }
            },
            None => (trimmed, chunk_start + lead),
        };
        let mut entries = Vec::new();
        let mut pos = offset;
        for item in body.split(',') {
            let at = pos + (item.len() - item.trim_start().len());
            pos += item.len() + 1;
            let token = item.trim();
            let value: u64 = token.parse().map_err(|_| {
                UsageError(format!(
                    "position {}: expected a nonnegative integer, found {token:?}",
                    column(text, at)
                ))
            })?;
            let fe = field
                .element(value)
                .map_err(|e| UsageError(format!("position {}: {e}", column(text, at))))?;
            entries.push(fe);
        }
        match dim {
            None => dim = Some(entries.len()),
            Some(d) if d != entries.len() => {
                return usage(format!(
                    "position {}: vector has {} entries, expected {d}",
                    column(text, chunk_start + lead),
                    entries.len()
                ))
            }
            _ => {}
        }
        out.push(Vector::new(field, entries).map_err(|e| UsageError(e.to_string()))?);
    }
    Ok(out)
}

pub fn parse_vector(field: &FieldSpec, text: &str) -> Result<Vector, UsageError> {
    let mut vs = parse_vectors(field, text)?;
    if vs.len() != 1 {
        return usage(format!("expected one vector, got {} in {text:?}", vs.len()));
    }
    Ok(vs.remove(0))
}

/// A subspace given in compact syntax or as `@file.json`. The ambient
/// dimension is inferred from the vectors and checked against `ambient`
/// when that is set.
pub fn parse_subspace(field: &FieldSpec, text: &str, ambient: Option<usize>) -> Result<Subspace, UsageError> {
    let s = if let Some(path) = text.strip_prefix('@') {
        load_subspace(field, path)?
    } else {
        let vs = parse_vectors(field, text)?;
        Subspace::span(field, vs[0].dim(), &vs).map_err(|e| UsageError(e.to_string()))?
    };
    if let Some(n) = ambient {
        if s.ambient() != n {
            return usage(format!(
                "{text:?} lives in dimension {}, but --ambient is {n}",
                s.ambient()
            ));
        }
    }
    Ok(s)
}

/// Reads subspace JSON from `path` (`-` for stdin). A basis that was not in
/// RREF is accepted with a warning on stderr.
pub fn load_subspace(field: &FieldSpec, path: &str) -> Result<Subspace, UsageError> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| UsageError(format!("reading stdin: {e}")))?
    } else {
        fs::read_to_string(path).map_err(|e| UsageError(format!("reading {path}: {e}")))?
    };
    let doc: SubspaceJson = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("{path}: line {}, column {}: {e}", e.line(), e.column())))?;
    let decoded = doc.decode_in(field).map_err(|e| UsageError(format!("{path}: {e}")))?;
    if decoded.non_canonical {
        eprintln!("warning: {path}: basis was not in reduced row echelon form; re-canonicalized");
    }
    Ok(decoded.subspace)
}

/// `2x2`, `2x3x2`, ...
pub fn parse_shape(text: &str) -> Result<Vec<usize>, UsageError> {
    let mut dims = Vec::new();
    let mut pos = 0;
    for part in text.split('x') {
        let d: usize = part.parse().map_err(|_| {
            UsageError(format!(
                "position {}: bad factor dimension {part:?} in shape {text:?}",
                column(text, pos)
            ))
        })?;
        if d == 0 {
            return usage(format!(
                "position {}: factor dimension must be positive",
                column(text, pos)
            ));
        }
        dims.push(d);
        pos += part.len() + 1;
    }
    Ok(dims)
}
