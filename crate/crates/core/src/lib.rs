//! Random row and column operations on code matrices, with exact oracles for
//! list decodability, the expectation quantity they control, and the bounds
//! that compare against it.

pub mod bounds;
pub mod codes;
pub mod col_ops;
pub mod combin;
pub mod concat;
pub mod constructions;
pub mod error;
pub mod expectation;
pub mod field;
pub mod io;
pub mod ratio;
pub mod row_ops;
pub mod seed;

pub use codes::{Alphabet, CodeMatrix, LdReport, SearchMode, Verdict};
pub use error::{Error, Result};
pub use expectation::EstimateSummary;
pub use ratio::Ratio64;
pub use row_ops::{RowOpKind, RowOpParams, RowOpTuple};
pub use seed::derive_seed;
