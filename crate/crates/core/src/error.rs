use thiserror::Error;

/// Errors raised by kraftlab operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Schema(String),

    #[error("unknown state `{name}` referenced in {context}")]
    DanglingState { name: String, context: String },

    #[error("unknown symbol `{name}` referenced in {context}")]
    DanglingSymbol { name: String, context: String },

    #[error("output `{0}` is not a binary string")]
    NonBinaryOutput(String),

    #[error("missing transition for state `{state}`, symbol `{symbol}`")]
    MissingTransition { state: String, symbol: String },

    #[error("duplicate transition for state `{state}`, symbol `{symbol}`")]
    DuplicateTransition { state: String, symbol: String },

    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("state {state} out of range for {states} states")]
    StateOutOfRange { state: usize, states: usize },

    #[error("state {to} is unreachable from state {from}")]
    Unreachable { from: usize, to: usize },

    #[error("encoder is not irreducible")]
    NotIrreducible,

    #[error("enumeration budget of {budget} strings exceeded (completed depth {completed_depth})")]
    BudgetExceeded { budget: u64, completed_depth: usize },

    #[error("exact arithmetic bit budget of {budget} bits exceeded")]
    BitBudgetExceeded { budget: u64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("negative matrix entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("iteration did not converge (residual {residual:e} after {iterations} iterations)")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("matrix is reducible")]
    Reducible,

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distortion level {0} is infeasible")]
    Infeasible(f64),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
