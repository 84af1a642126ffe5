//! A verification laboratory for the geometry of theta surfaces in a
//! (1,2,2)-polarized abelian threefold.
//!
//! The crate evaluates Riemann theta functions with characteristics to a
//! controlled tolerance (values, gradients, Hessians), builds the polarized
//! torus models and their section bases, samples the surface
//! `S = {theta_000 + b theta_011 + c theta_101 + d theta_110 = 0}`,
//! measures the rank of the canonical map's differential, runs the Legendre
//! elliptic model with its exact determinant ledger, and certifies the
//! algebraic bidouble-cover model by exact polynomial arithmetic.
//!
//! Entry points:
//! - [`theta`]: the evaluation engine ([`theta::theta_jet`], lattice tools).
//! - [`models`]: surface spec, base points, pencils, one-variable sections.
//! - [`canonical`]: sampling, canonical/Gauss images, rank census.
//! - [`legendre`]: Legendre functions, matrices N and M, identity ledger.
//! - [`bidouble`]: the genus-9 complete intersection and its certificates.
//! - [`runner`]: the check suites behind the `verifier` binary.
//!
//! Every sampling routine is deterministic given a seed, and every symbolic
//! certificate is exact rational arithmetic with no rounding anywhere.

pub mod bidouble;
pub mod canonical;
pub mod legendre;
pub mod models;
pub mod newton;
pub mod poly;
pub mod report;
pub mod rng;
pub mod runner;
pub mod theta;

pub use report::{CheckResult, CheckStatus, Report, RunConfig};
