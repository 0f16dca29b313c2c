//! # imaginarity
//!
//! Numerical toolkit for the imaginarity resource theory: how far a quantum
//! state is from having an entrywise-real density matrix, quantified by two
//! monotones induced by a unified two-parameter relative entropy family.
//!
//! ## Layout
//!
//! - [`matrix`]: dense complex linear algebra (Jacobi eigensolver, fractional
//!   powers, tensor/direct-sum/partial-trace, trace functionals).
//! - [`states`]: Bloch qubits, Werner/isotropic families, random states,
//!   real Kraus channels, JSON state descriptors.
//! - [`entropy`]: the unified relative entropy with full branch dispatch,
//!   plus the alpha-z fidelity functional.
//! - [`monotones`]: the conjugate-based measure `mh`, the minimization-based
//!   measure `me` (analytic qubit solver + numeric optimizer), and the
//!   comparison measures.
//! - [`optim`]: multi-start Nelder-Mead over the real-state cone.
//! - [`harness`]: one named randomized check per claimed property, with
//!   JSON-line reports and replayable counterexamples.
//!
//! All computation is pure and deterministic for a fixed seed; random
//! generators take explicit seeds (ChaCha8), so callers own parallelism.

#![forbid(unsafe_code)]

pub mod entropy;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod monotones;
pub mod optim;
pub mod states;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, DensityMatrix, EigenSystem, Tolerances};
pub use monotones::{MeResult, MonotoneParams};
pub use optim::OptimizerConfig;
pub use states::{BlochVector, KrausSet, StateDescriptor};
