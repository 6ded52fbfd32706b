//! Stabilizer groups of finite point sets on the Riemann sphere.
//!
//! For `n ≥ 5` these are exactly the orbifold groups of the moduli space
//! `M_{0,n}` of `n` unordered points on the projective line. The crate has
//! three layers:
//!
//! * [`classifier`] lists, from `n` alone, every group that can occur as the
//!   Möbius stabilizer of an `n`-point set together with its component index
//!   (how many orbits of each size the set splits into).
//! * [`oracle`] computes the stabilizer of a concrete set by brute force, and
//!   [`witness`] builds a concrete set for every classification entry, so the
//!   two can check each other.
//! * [`moduli`] implements the `S_n` action on the parameter space `K_n` and
//!   the isomorphism between point stabilizers there and Möbius stabilizers.

pub mod classifier;
pub mod cli;
pub mod geometry;
pub mod moduli;
pub mod oracle;
pub mod witness;

pub use classifier::{cardinality_of, cardinality_set, classify, ClassificationEntry, ComponentIndex, GroupLabel};
pub use geometry::{chordal_distance, set_equal, MobiusMap, PointSet, RiemannPoint, C64, DEFAULT_TOL};
pub use oracle::{stabilizer, StabilizerResult};
