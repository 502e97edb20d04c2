use std::io;

use thiserror::Error;

use crate::index::Variant;

#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum ParseErrorKind {
    #[error("invalid node label {0:?}")]
    InvalidLabel(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Failure while reading an index file. `offset` is the byte offset of the
/// start of the offending line.
#[derive(Debug, Error)]
#[error("byte {offset}: {kind}")]
pub struct LoadError {
    pub offset: u64,
    pub kind: LoadErrorKind,
}

#[derive(Debug, Error)]
pub enum LoadErrorKind {
    #[error("bad magic, expected KGIDX")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("unexpected end of file: {0}")]
    Truncated(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("k and g must be at least 1 (got k={k}, g={g})")]
    NonPositive { k: u32, g: u32 },
    #[error("lower bound {lb} exceeds upper bound {ub}")]
    InvertedBounds { lb: usize, ub: usize },
    #[error("query routine for {expected} called on a {actual} tree")]
    WrongVariant { expected: Variant, actual: Variant },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("cardinality range [{cmin}, {cmax}] is empty or starts at zero")]
    BadCardinality { cmin: usize, cmax: usize },
    #[error("max cardinality {cmax} exceeds node count {n}")]
    CardinalityExceedsNodes { cmax: usize, n: usize },
}

#[derive(Debug, Error)]
#[error("index was built from dataset {expected}, supplied dataset hashes to {actual}")]
pub struct FingerprintMismatch {
    pub expected: crate::hypergraph::Fingerprint,
    pub actual: crate::hypergraph::Fingerprint,
}
