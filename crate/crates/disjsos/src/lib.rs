//! Disjunctive sum-of-squares toolkit.
//!
//! Certifies polynomial nonnegativity and matrix copositivity through
//! families of low-degree algebraic identities, one per region of a
//! disjunction, and computes converging bounds for form minimization on the
//! unit sphere and quadratic minimization on the unit simplex.
//!
//! Module map:
//! - [`poly`]: sparse multivariate polynomials, linear changes of variables
//! - [`sos`]: Gram-matrix encodings, certificate extraction and verification
//! - [`disjunction`]: spherical-cap and simplicial disjunction constructions
//! - [`certify`]: global nonnegativity engines (cap hierarchy,
//!   coefficient-sign certifier, constructive local identities,
//!   alternating maximization)
//! - [`copositive`]: P+N tests and the disjunctive copositivity hierarchy
//! - [`bnb`]: spatial branch-and-bound over sphere and simplex
//! - [`bench`]: named instances, stored certificates, brute-force oracles
//! - [`conic`]: the abstract semidefinite backend interface

pub mod bench;
pub mod bnb;
pub mod certify;
pub mod conic;
pub mod copositive;
pub mod disjunction;
pub mod poly;
pub mod scalar;
pub mod solver_clarabel;
pub mod sos;
pub mod symmat;

pub use scalar::{Coeff, Rat, ScalarMode};
