//! Numerical engine for finite quantum groups acting on finite-dimensional
//! C*-algebras.
//!
//! Everything is dense complex linear algebra on explicit matrix
//! realizations. Each construction carries the residuals that certify it, and
//! the [`suites`] module turns those residuals into machine-readable reports.

pub mod action;
pub mod algebra;
pub mod catalog;
pub mod cocycle;
pub mod entropy;
pub mod error;
pub mod factorization;
pub mod format;
pub mod linalg;
pub mod quantum_group;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, C64};

/// Default tolerance for structural residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
