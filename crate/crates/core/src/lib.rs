//! Exact, finite-field models of Tits buildings, Steinberg modules, Ash's
//! resolution and the stabilization maps between them, together with
//! modular-symbol and cocompact-lattice witnesses.
//!
//! Every check produces a certificate: a plain data value recording what was
//! computed and whether the identity held exactly.

pub mod ash;
pub mod building;
pub mod coinvariant;
pub mod complex;
mod echelon;
pub mod error;
pub mod lie;
pub mod matrix;
pub mod modular;
pub mod projective;
pub mod quartic;
pub mod scalar;
pub mod stabilization;

pub use complex::{ChainComplex, ChainMap};
pub use error::{LabError, Result};
pub use matrix::ExactMatrix;
pub use scalar::{ExactScalar, FieldKind};
