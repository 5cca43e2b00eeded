//! Numerical experiments around large positive Hecke eigenvalues of self-dual
//! GL(2) forms.
//!
//! The crate is organised by concern:
//!
//! - [`satake`]: local Satake-parameter algebra, tensor and symmetric power
//!   eigenvalue multisets, and checks of the Clebsch–Gordan L-function
//!   identities at a single unramified prime.
//! - [`sources`]: eigenvalue sequences (Ramanujan τ, Sato–Tate and dihedral
//!   samplers, CSV files), the prime sieve and the Kim–Sarnak validator.
//! - [`dirichlet`]: partial Dirichlet series over primes, normalised ratio
//!   profiles, moment profiles and upper Dirichlet density estimates.
//! - [`optimizer`]: the constant system linking the threshold and the density
//!   lower bound, the dichotomy check, the trade-off sweep and the
//!   finite-sum inequality audit.
//! - [`report`] and [`cli`]: deterministic CSV/JSON reports and the
//!   `hecke-density` command line front end.

pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod optimizer;
pub mod report;
pub mod satake;
pub mod sources;
pub mod summation;

pub use error::{Error, Result};
