//! Kraft-matrix analysis of finite-state encoders.

pub mod converse;
pub mod corpus;
pub mod dyadic;
pub mod encoder;
pub mod error;
pub mod graph;
pub mod io;
pub mod kraft;
pub mod lossy;
pub mod matrix;
pub mod optimize;
pub mod report;
pub mod si;

pub use dyadic::Dyadic;
pub use encoder::{Codeword, Encoder, State, Symbol};
pub use error::{Error, Result};
pub use matrix::{DyadicMatrix, FloatMatrix};
pub use report::{GKIReport, InequalityRecord, Quantity, Witness};

/// Default cap on enumerated strings for exhaustive checks.
pub const DEFAULT_BUDGET: u64 = 1 << 24;
