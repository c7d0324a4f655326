//! Exact algebraic branching programs (ABPs) for the coefficients of the
//! characteristic polynomial, over arbitrary commutative rings.

pub mod abp;
pub mod constructions;
pub mod error;
pub mod identities;
pub mod oracle;
pub mod polynomial;
pub mod ring;
pub mod sparse;

pub use error::{Error, Result};
pub use polynomial::{matrix_power, ConstMatrix, PolyMatrix, Polynomial, VarIndex};
pub use ring::{ArithOp, RingDescriptor, RingElement, RingKind, Value};
