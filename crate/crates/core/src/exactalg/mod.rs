//! Exact scalars, partial fields, matrices, determinants and Pfaffians.

mod hom;
mod matrix;
mod scalar;

pub use hom::{apply_hom, apply_hom_skew, residue_hom, HomMap, Homomorphism};
pub use matrix::{determinant, pfaffian, principal_pfaffians, principal_submatrix, Matrix, SkewMatrix};
pub use scalar::{is_element, is_prime, PartialField, Residue, Ring, Scalar, UnitGroup};
