use thiserror::Error;

use crate::node::IndexKind;
use crate::qftp::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}`: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: String,
}

impl ParseError {
    pub fn new(input: &str, reason: impl Into<String>) -> Self {
        ParseError { input: input.to_string(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QftpError {
    #[error("signature {sig} does not apply to {kind} indices")]
    SignatureMismatch { sig: Signature, kind: IndexKind },
    #[error("tuple mixes tree and array indices")]
    MixedKinds,
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("malformed type code: {0}")]
    MalformedCode(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReindexError {
    #[error("level list of length {given} is too short for a fragment of height {height} (need at least {})", height + 1)]
    LevelsTooShort { given: usize, height: usize },
    #[error("level list must be strictly increasing")]
    LevelsNotIncreasing,
    #[error("branching must be at least 1")]
    ZeroBranching,
    #[error("index {0} is outside the map's source")]
    NotInSource(String),
    #[error(transparent)]
    Qftp(#[from] QftpError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModellingError {
    #[error("element {0} is not in the universe")]
    NotInUniverse(u32),
    #[error("relation `{name}` has arity {arity} but contains a tuple of length {len}")]
    RelationArity { name: String, arity: usize, len: usize },
    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),
    #[error("family tuples must all have length {expected}, found {found}")]
    RaggedFamily { expected: usize, found: usize },
    #[error("index {0} appears twice in the family")]
    DuplicateIndex(String),
    #[error("family table does not match its fragment: {0}")]
    FragmentMismatch(String),
    #[error("family has no entry for index {0}")]
    MissingIndex(String),
    #[error("families are not over the same structure and parameters")]
    StructureMismatch,
    #[error("expected a family over {expected}, got {found}")]
    WrongFragment { expected: String, found: String },
    #[error("family is not {0}-indiscernible")]
    NotIndiscernible(Signature),
    #[error("insufficient length: no {target}-element indiscernible subsequence among {available}")]
    InsufficientLength { target: usize, available: usize },
    #[error("insufficient height: no homogeneous set of {target} levels among {available}")]
    InsufficientHeight { target: usize, available: usize },
    #[error("insufficient size: {0}")]
    InsufficientSize(String),
    #[error("fragment too small: need branching {branching} and height {height}")]
    FragmentTooSmall { branching: u64, height: usize },
    #[error("type code {0} is not the code of a meet-closed tree tuple")]
    NotMeetClosedCode(String),
    #[error(transparent)]
    Qftp(#[from] QftpError),
    #[error(transparent)]
    Reindex(#[from] ReindexError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Tp2Error {
    #[error("k must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("witness needs at least one row and one column")]
    EmptyShape,
    #[error("need at least two columns")]
    TooFewColumns,
    #[error("universe lists {0} twice")]
    DuplicateElement(u32),
    #[error("cell ({row},{col}) contains {elem}, which is not in the universe")]
    NotInUniverse { row: usize, col: usize, elem: u32 },
    #[error("witness has {found} cells in row {row}, expected {expected}")]
    RaggedCells { row: usize, expected: usize, found: usize },
    #[error("input is not a {0}-TP2 witness")]
    NotKtp2(usize),
    #[error("family does not index the witness array: {0}")]
    ShapeMismatch(String),
    #[error("family is not array-indiscernible")]
    NotIndiscernible,
    #[error("fragment exhausted: {0}")]
    FragmentExhausted(String),
    #[error("reduction step {step} produced a witness that is not {k}-TP2; the input array is not indiscernible enough for the case split")]
    StepFailed { step: String, k: usize },
    #[error(transparent)]
    Modelling(#[from] ModellingError),
}
