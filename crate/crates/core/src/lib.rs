#![no_std]
//! Standard bases for multi-branch algebroid curves.
//!
//! The crate computes value semirings, value semimodules of fractional ideals
//! and of the module of Kähler differentials, and their conductors, using
//! exact rational arithmetic on truncated branch parameterizations.

extern crate alloc;

pub mod curve;
pub mod diophantine;
pub mod error;
pub mod kahler;
pub mod linalg;
pub mod poly;
pub mod series;
pub mod stdbasis;
pub mod values;

pub use curve::{CurveModel, Cut, Expr, RingElement, Value, ValueVector};
pub use error::{Error, Result};
pub use poly::Polynomial;
pub use series::{Order, Rational, TruncatedSeries};
pub use values::{Membership, NumericalSemigroup, SemimodulePresentation, SemiringPresentation};
