//! Exact arithmetic and invariants for finite-order birational maps of the
//! complex projective plane.

pub mod birmaps;
pub mod classify;
pub mod curves;
pub mod delpezzo;
pub mod error;
pub mod jonquieres;
pub mod linalg;
pub mod picard;
pub mod polys;
pub mod scalars;

pub use error::{Error, Result};
pub use scalars::{CycNumber, Rational};
