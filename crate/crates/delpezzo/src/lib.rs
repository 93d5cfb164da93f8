//! Exact seed mutation, cluster characters and identity checking for the
//! five toric del Pezzo surfaces.
//!
//! The crate provides, bottom up:
//!
//! - [`exactalg`]: sparse integer Laurent polynomials, rational functions,
//!   exact division, and randomized identity testing over a prime field;
//! - [`lgseed`]: 2-variable potentials with mutation directions and their
//!   mutation, including the five initial seeds;
//! - [`clusterkit`]: skew-symmetric exchange matrices, quivers, and the
//!   x- and y-variable mutation machinery;
//! - [`repchar`]: thin quiver representations, their F-polynomials,
//!   g- and h-vectors, and cluster characters;
//! - [`comparison`]: the monomial comparison map from the potential ring
//!   to the cluster ring, and end-to-end verifiers for the compatibility
//!   identities along mutation sequences.

pub mod clusterkit;
pub mod comparison;
pub mod error;
pub mod exactalg;
pub mod lgseed;
pub mod repchar;

pub use error::{Error, Result};
