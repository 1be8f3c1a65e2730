//! Numerical laboratory for mutual-information area laws.
//!
//! Modules, bottom-up:
//! - [`qstate`]: labeled density matrices, partial traces, entropies, trace
//!   distance, Fannes bound.
//! - [`info`]: mutual information, relative entropy, correlators and the
//!   inequality checks built on them.
//! - [`thermal`]: classical and quantum Gibbs states of finite-range lattice
//!   Hamiltonians and their boundary-law checks.
//! - [`fcs`]: finitely correlated states generated by a channel.
//! - [`peps`]: tensor-network form of Gibbs states of commuting interactions.
//! - [`singlet`]: the random-singlet toy model.

pub mod caps;
pub mod error;
pub mod fcs;
pub mod info;
pub mod linalg;
pub mod peps;
pub mod qstate;
pub mod random;
pub mod singlet;
pub mod thermal;

pub use error::{Error, Result};
pub use qstate::{DensityMatrix, FactoredState, Observable, SiteSpace};
