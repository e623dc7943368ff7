//! Error type shared across the library and the command-line tool.
//!
//! Every fallible operation in this crate returns [`crate::Result`], which
//! wraps this [`Error`] enum. Each variant belongs to one of three broad
//! classes — configuration/usage problems, data or file integrity problems,
//! and numerical failures — and [`Error::exit_code`] maps the class to the
//! process exit code used by the binary.

use std::path::PathBuf;

use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Qubit count outside the supported range for dense statevector
    /// simulation.
    #[error("qubit count {0} is out of range (supported: 1..={max})", max = crate::simulator::MAX_QUBITS)]
    QubitCountOutOfRange(usize),

    /// A qubit index at or beyond the register size.
    #[error("qubit index {index} is out of range for a {n_qubits}-qubit register")]
    QubitIndexOutOfRange { index: usize, n_qubits: usize },

    /// A basis-state index at or beyond the state dimension.
    #[error("basis index {index} is out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    /// A two-qubit gate was asked to use the same wire twice.
    #[error("control and target qubits must differ (both were {0})")]
    ControlEqualsTarget(usize),

    /// Two states (or a state and a circuit) disagree on register size.
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    /// A parameter vector does not have the length demanded by its shape.
    #[error("parameter length mismatch: shape requires {expected} values, got {actual}")]
    ParameterLengthMismatch { expected: usize, actual: usize },

    /// A non-finite number appeared where a finite one is required.
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    /// An entity id outside the vocabulary.
    #[error("entity id {id} is out of range (vocabulary has {n_entities} entities)")]
    EntityIdOutOfRange { id: usize, n_entities: usize },

    /// A relation id outside the vocabulary.
    #[error("relation id {id} is out of range (vocabulary has {n_relations} relations)")]
    RelationIdOutOfRange { id: usize, n_relations: usize },

    /// A flat parameter index outside a tensor's parameter count.
    #[error("parameter index {index} is out of range (tensor has {count} parameters)")]
    ParamIndexOutOfRange { index: usize, count: usize },

    /// Negative sampling cannot draw `k` distinct corrupted tails.
    #[error("cannot draw {k} distinct negative tails from {n_entities} entities (need at least {required})")]
    VocabularyTooSmall {
        k: usize,
        n_entities: usize,
        required: usize,
    },

    /// An invalid run configuration (bad flag value, impossible combination).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A malformed line in a triples file.
    #[error("{path}:{line}: malformed triple (expected `head<TAB>relation<TAB>tail`): {content:?}")]
    MalformedTriple {
        path: PathBuf,
        line: usize,
        content: String,
    },

    /// A surface form not present in the vocabulary.
    #[error("unknown {kind} {name:?}{hint}")]
    UnknownSymbol {
        kind: &'static str,
        name: String,
        hint: String,
    },

    /// A split (train/valid/test) that is empty where data is required.
    #[error("the {0} split is empty")]
    EmptySplit(&'static str),

    /// A batch of examples that is empty where at least one is required.
    #[error("empty batch: at least one example is required")]
    EmptyBatch,

    /// An example with no tail entities.
    #[error("example has no tail entities: at least one is required")]
    EmptyTails,

    /// A checkpoint whose contents are internally inconsistent or that does
    /// not match the data it is being used with.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// A checkpoint format version this build cannot read.
    #[error("unsupported checkpoint format version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },

    /// A numerical failure during training or evaluation (divergence,
    /// non-finite loss or gradient).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An underlying I/O failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A JSON (de)serialization failure.
    #[error("json error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Process exit code for the command-line tool.
    ///
    /// * `1` — usage / configuration errors,
    /// * `2` — data or checkpoint integrity errors (including I/O),
    /// * `3` — numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::QubitCountOutOfRange(_)
            | Error::QubitIndexOutOfRange { .. }
            | Error::BasisIndexOutOfRange { .. }
            | Error::ControlEqualsTarget(_)
            | Error::QubitCountMismatch { .. }
            | Error::ParameterLengthMismatch { .. }
            | Error::EntityIdOutOfRange { .. }
            | Error::RelationIdOutOfRange { .. }
            | Error::ParamIndexOutOfRange { .. }
            | Error::VocabularyTooSmall { .. }
            | Error::InvalidConfig(_)
            | Error::EmptyBatch
            | Error::EmptyTails => 1,
            Error::MalformedTriple { .. }
            | Error::UnknownSymbol { .. }
            | Error::EmptySplit(_)
            | Error::Integrity(_)
            | Error::UnsupportedVersion { .. }
            | Error::Io { .. }
            | Error::Json { .. } => 2,
            Error::NonFinite { .. } | Error::Numerical(_) => 3,
        }
    }

    /// Convenience constructor for [`Error::Io`].
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Convenience constructor for [`Error::Json`].
    pub fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
