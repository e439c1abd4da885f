//! Exact classification and simulation of orbit closures for groups of
//! homotheties and translations of `R^n`.

pub mod affine;
pub mod classifier;
pub mod cli;
pub mod closures;
pub mod invariant;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod scalar;
pub mod simulator;

pub use affine::{AffineMap, Generator, GroupSpec, Word};
pub use classifier::{classify_group, orbit_closure, ClassificationReport, OrbitClosureDescription};
pub use scalar::{FieldContext, FieldScalar};
