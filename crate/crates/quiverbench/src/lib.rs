//! Exact computations for gentle and skew-gentle algebras: strings and bands,
//! string and band modules, pointed pushouts, the lattice of pointed modules,
//! Z₂ skew group algebras and Brauer graph algebras.

pub mod algebra;
pub mod brauer;
pub mod classify;
pub mod error;
pub mod field;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod quiver;
pub mod registry;
pub mod rep;
pub mod skew;
pub mod words;

pub use error::{Error, Result};
pub use field::Rational;

pub type Representation = rep::Representation<Rational>;
pub type PointedModule = rep::PointedModule<Rational>;
