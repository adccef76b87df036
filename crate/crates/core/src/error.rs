use thiserror::Error;

/// Errors produced by code parsing, prior construction and decoding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{matrix} row {row}: column index {index} out of range 1..={n}")]
    IndexOutOfRange {
        matrix: &'static str,
        row: usize,
        index: usize,
        n: usize,
    },
    #[error("{matrix} row {row}: duplicate column index {index}")]
    DuplicateIndex {
        matrix: &'static str,
        row: usize,
        index: usize,
    },
    #[error("{matrix}: expected {expected} rows, found {found}")]
    MissingRows {
        matrix: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid prior at qubit {qubit}: {msg}")]
    InvalidPrior { qubit: usize, msg: String },
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown decoder `{0}` (expected joint, joint-llr, separate or four-state)")]
    UnknownDecoder(String),
    #[error("exact enumeration limited to n <= {limit} qubits, code has n = {n}")]
    OracleLimit { n: usize, limit: usize },
    #[error("syndrome has zero posterior mass under the prior")]
    ZeroPosteriorMass,
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("message on {graph} edge {edge} vanished at iteration {iteration}")]
    ZeroMessage {
        graph: &'static str,
        edge: usize,
        iteration: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
