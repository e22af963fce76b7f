//! Exact computations with F_{q^m}-linear rank-metric codes and q-systems.
//!
//! The crate is organized bottom-up:
//!
//! - [`fields`]: arithmetic in F_p ⊆ F_q ⊆ F_{q^m};
//! - [`linalg`]: row reduction, kernels, F_q-spans and subspace enumeration;
//! - [`codes`]: rank weights, duals, and generalized rank weights;
//! - [`qsystems`]: the code/system correspondence, evasiveness and spectra;
//! - [`classify`]: bounds and the MRD / near-MRD / quasi-MRD flags;
//! - [`constructions`]: Gabidulin codes, pseudoregulus and near-MRD systems,
//!   direct sums and a brute-force scattered-subspace search;
//! - [`io`]: JSON documents for fields, codes, systems and witnesses;
//! - [`verify`]: data-driven suites that check structural theorems on
//!   exhaustive or seeded-random instance sets.

pub mod classify;
pub mod codes;
pub mod constructions;
pub mod error;
pub mod fields;
pub mod io;
pub mod linalg;
mod poly;
pub mod qsystems;
pub mod verify;

pub use codes::{rank_weight, DualCode, RankMetricCode, WeightProfile};
pub use error::{Error, ErrorKind, Result};
pub use fields::{Elem, FieldTower};
pub use linalg::{Budget, Mat, SubspaceIter};
pub use qsystems::{phi, psi, EvasiveWitness, QSystem, Spectrum};
