//! Linear continuous logic over finite metric structures: formulas,
//! ultrameans, exact convex geometry of type spaces, and extremal analysis.

pub mod convex;
pub mod extremal;
pub mod format;
pub mod corpus;
pub mod linalg;
pub mod logic;
pub mod lp;
pub mod scalar;
pub mod structure;
pub mod typespace;
pub mod ultramean;

pub use scalar::{Rational, Scalar, Tolerance};
