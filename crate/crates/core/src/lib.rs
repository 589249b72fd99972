//! Exact verification and construction of representations of matroids and
//! orthogonal matroids (even Delta-matroids) over fields and partial fields.

pub mod census;
pub mod error;
pub mod exactalg;
pub mod groundset;
pub mod io;
pub mod matroid;
pub mod plucker;
mod sweep;
pub mod wick;

pub use error::{Error, Result};
