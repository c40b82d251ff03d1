//! a-numbers of hyperelliptic curves y² = f(x) in characteristic 3 via the
//! Cartier operator, heights and successive minima over F_q(X), and exhaustive
//! checks of the exact counting formulas relating them.

pub mod cartier;
pub mod census;
pub mod error;
pub mod exec;
pub mod gf;
pub mod heights;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use exec::{Budget, Executor};
pub use gf::{FieldElement, FieldSpec};
pub use poly::Poly;
