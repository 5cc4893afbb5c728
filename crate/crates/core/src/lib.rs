//! Quantum Fisher information for SU(2) interferometric rotation sensing in
//! a spinning whispering-gallery resonator.
//!
//! The crate builds the effective spin Hamiltonian `f Jz + d Jx + e Jz^2`
//! and the exact atom plus two-mode model it derives from, propagates the
//! probe state `(|j,0> + |j,1>)/sqrt(2)`, and evaluates the QFI for the
//! Sagnac shift by finite differences, by the numeric generator, and by the
//! closed-form and first-order generator expansions.
//!
//! The runnable programs in `examples/` show each capability in isolation;
//! the `rotsense` binary regenerates every figure data set.

pub mod analysis;
pub mod error;
pub mod experiments;

pub mod linalg;
pub mod metrology;

pub mod model;
pub mod propagation;
pub mod spin;
pub mod table;

pub use error::{Error, Result};
pub use linalg::{Eigensystem, C64};
pub use model::{EffectiveModelParams, MicroscopicParams, SagnacParams};
pub use spin::{HermitianOperator, SpinQuantum, SpinState};
