//! Simulation library for two-dimensional channel parameter estimation in
//! IRS-assisted MIMO systems.
//!
//! The crate is organized around the processing chain of a decoupled
//! horizontal/vertical training design:
//!
//! - [`multilin`]: complex matrix/tensor kernels (Kronecker, Khatri-Rao,
//!   rank-one approximations, training codebooks);
//! - [`channel`]: geometric BS-IRS-UE channel construction from spatial
//!   frequencies;
//! - [`training`]: Kronecker-structured pilot and IRS phase-shift design plus
//!   forward simulation of the received pilot blocks;
//! - [`estimators`]: the HKMR and TSHDR estimators, LS and KRF baselines,
//!   grid peak search, and channel reconstruction;
//! - [`crlb`]: Fisher information matrices and Cramér-Rao bounds;
//! - [`harness`]: Monte Carlo experiment driver, metrics, complexity models,
//!   and CSV output.

pub mod channel;
pub mod crlb;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod multilin;
pub mod training;

pub use error::{Error, Result};
