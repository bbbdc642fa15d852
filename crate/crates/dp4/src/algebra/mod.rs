//! Exact scalar, matrix, and polynomial arithmetic.

pub mod field;
pub mod matrix;
pub mod multipoly;
pub mod poly;

pub use field::{is_prime, Embedding, FieldElement, FieldSpec};
pub use matrix::Mat;
pub use multipoly::MultiPoly;
pub use poly::{BinaryForm, UniPoly};
