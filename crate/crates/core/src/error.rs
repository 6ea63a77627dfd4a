use std::path::PathBuf;

use thiserror::Error;

use crate::annotation::Violation;

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("failed to read taxonomy file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse taxonomy JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("taxonomy has no labels")]
    Empty,
    #[error("label {0:?} has an empty name or alias")]
    EmptyName(String),
    #[error("name {0:?} is registered for two different labels")]
    DuplicateName(String),
    #[error("unknown taxonomy level {0:?} (expected 0, 1 or 2)")]
    UnknownLevel(String),
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("cannot aggregate an empty list of documents")]
    NoDocuments,
    #[error("cross comparison needs at least two annotation sets, got {0}")]
    TooFewAnnotators(usize),
    #[error("annotation set {annotator:?} does not cover document {doc_id:?}")]
    DocumentMismatch { annotator: String, doc_id: String },
}

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("sentence index {found} where {expected} was expected")]
    IndexGap { expected: usize, found: usize },
    #[error("sentence index {0} appears more than once")]
    DuplicateIndex(usize),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: record references unknown document {doc_id:?}")]
    UnknownDocument { line: usize, doc_id: String },
    #[error("line {line}: duplicate document id {doc_id:?}")]
    DuplicateDocument { line: usize, doc_id: String },
    #[error("line {line}: document {doc_id:?} is invalid: {}", join_violations(.violations))]
    Invalid {
        line: usize,
        doc_id: String,
        violations: Vec<Violation>,
    },
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
