//! Exact monomial Burnside rings of small p-groups.
//!
//! The crate builds finite groups as Cayley tables, computes the monomial
//! Burnside ring with its species and primitive idempotents over exact
//! cyclotomic scalars, implements the elementary biset operations, and
//! evaluates the kernel of linearization together with its restriction
//! kernel and the automorphism action on it.

pub mod bisetops;
pub mod chars;
pub mod cyclotomic;
pub mod error;
pub mod exactla;
pub mod groups;
pub mod kernels;
pub mod monoburn;
pub mod report;
pub mod scalar;
pub mod verify;

pub use cyclotomic::{Cyc, Q};
pub use error::{Error, Result};
pub use exactla::Matrix;
pub use scalar::Scalar;

pub type CycMatrix = Matrix<Cyc>;
pub type QMatrix = Matrix<Q>;
pub type F64Matrix = Matrix<f64>;
pub type F32Matrix = Matrix<f32>;
