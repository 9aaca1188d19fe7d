//! Weighted zero-sum constants of `Z_n`.
//!
//! The crate computes the Davenport-type constants `D_A(n)`, `C_A(n)` and
//! `E_A(n)` exactly by exhaustive search, predicts them from closed forms,
//! and produces zero-sum certificates that can be checked by one modular
//! evaluation.

pub mod algebra;
pub mod constants;
pub mod error;
pub mod gf2;
pub mod module;
pub mod solver;
pub mod weights;

pub use algebra::{factorize, Residue, ResidueSequence, RingSpec};
pub use error::{Error, Result};
pub use weights::{WeightSet, WeightSetSpec};
