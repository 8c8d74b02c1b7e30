use thiserror::Error;

/// Errors raised by constructors, validators and capacity-limited searches.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capacity exceeded: {what} ({size} > {limit})")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid group table: {0}")]
    GroupAxiom(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not regular: row {row} has sum {sum}, expected {expected}")]
    NotRegular { row: usize, sum: f64, expected: f64 },

    #[error("element {g} is not an automorphism: a[{s}][{t}] is not preserved")]
    NotAutomorphism { s: usize, t: usize, g: usize },

    #[error("group action is not transitive: vertex {0} is not reached from the base vertex")]
    NotTransitive(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported group family `{0}`; supply an irrep table with parse_irreps")]
    UnsupportedFamily(String),

    #[error("invalid irrep table: {0}")]
    InvalidIrreps(String),

    #[error("vector norm {norm} exceeds the unit ball")]
    UnitBall { norm: f64 },

    #[error("random sampler gave up after {0} attempts; try another seed")]
    SamplerExhausted(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
