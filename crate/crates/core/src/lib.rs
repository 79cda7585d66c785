//! Exact computations for level-one SO(3)-monopole cobordism formulas.
//!
//! The crate evaluates Donaldson invariants of four-manifolds from their
//! Seiberg-Witten data, the link pairings that feed them, and the
//! comparison with Witten's formula through the first two non-trivial
//! powers of the homology class. All arithmetic is exact.

pub mod combinatorics;
pub mod fixture;
pub mod lattice;
pub mod manifold;
pub mod pairings;
pub mod polyring;
pub mod witten;

pub use combinatorics::{JacobiParams, Rational};
pub use lattice::{CohomologyClass, IntersectionForm};
pub use polyring::TruncatedPolynomial;
