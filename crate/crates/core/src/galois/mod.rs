//! Finite fields `F_{p^n}` (`p >= 5`), their quadratic characters and
//! univariate polynomial algebra over them.

mod factor;
mod field;
mod linalg;
mod poly;

use std::sync::Arc;

pub use factor::Embedding;
pub use field::{Elem, Field, FieldDescriptor, TABLE_LIMIT};
pub(crate) use field::is_prime;
pub use linalg::charpoly;
pub use poly::Poly;

use crate::error::Result;

/// `F_{p^n}` with its deterministic modulus.
pub fn make_field(p: u32, n: u32) -> Result<Arc<Field>> {
    Field::new(p, n)
}
