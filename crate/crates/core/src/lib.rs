//! Geometric rank of imaginaries in pairs of algebraically closed fields of
//! characteristic 0, with forking independence decided by an explicit
//! criterion and cross-checked against rank bookkeeping.

pub mod error;
pub mod exactfield;
pub mod forking;
pub mod galgebra;
pub mod imaginaries;
pub mod linalg;
pub mod shell;
pub mod tdeg;

pub use error::{Error, Result};
