//! Learning a Boolean function of classical data encoded in non-orthogonal qubits.
//!
//! Every input `x ∈ {0,1}^n` is encoded as the product state `|ψ_x⟩ = ⊗ |ψ_{x_i}⟩`
//! where the two single-qubit states have real overlap `s ∈ (0,1)`. Learning
//! `f(x)` is a two-state discrimination problem between the mixtures of the
//! preimages of 0 and 1. This crate computes and compares three success
//! probabilities for that problem:
//!
//! - **greedy**: measure each qubit optimally, evaluate `f` on the outcome string;
//! - **PGM**: the pretty good measurement of the two mixtures (it coincides with greedy);
//! - **global**: the Helstrom optimum.
//!
//! It also certifies exactly, with integer arithmetic only, whether `f` is affine,
//! which is the class of functions for which greedy is globally optimal.
//!
//! ```
//! use qbool_learn::{BoolFunc, Descriptor, Overlap, strategies};
//!
//! let f = BoolFunc::from_descriptor(&"maj".parse::<Descriptor>().unwrap(), Some(3)).unwrap();
//! let s = Overlap::new(0.5).unwrap();
//! let report = strategies::analyze(&f, s).unwrap();
//! assert!(report.p_global > report.p_greedy);
//! ```

pub mod boolfunc;
pub mod certify;
pub mod cli;
pub mod ensemble;
mod error;
pub mod linalg;
pub mod strategies;
pub mod verify;

pub use boolfunc::{AffineCoefficients, BitString, BoolFunc, Descriptor, Preimages};
pub use certify::{AffineCertificate, Balance, Stage, Verdict};
pub use ensemble::{BooleanEnsemble, GeneralizedGram, Overlap};
pub use error::{Error, Result};
pub use linalg::{EigenDecomposition, Matrix, SymMatrix};
pub use strategies::StrategyReport;
