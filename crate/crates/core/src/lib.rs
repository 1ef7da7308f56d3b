//! Level matrices of rooted trees.
//!
//! The level matrix of a rooted tree has entries `|level(i) - level(j)|`.
//! This crate builds it, computes its spectrum numerically and exactly,
//! evaluates eigenvalue bounds, and verifies structural facts over every
//! rooted tree of a given order.

pub mod analysis;
pub mod bounds;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod level_matrix;
pub mod par;
pub mod report;
pub mod spectra;
pub mod tree;
pub mod verify;

pub use analysis::AnalyzedTree;
pub use bounds::{BoundReport, Relation};
pub use enumerate::{enumerate_rooted_trees, enumerate_rooted_trees_with_cap};
pub use error::{Error, Result};
pub use level_matrix::{IntMatrix, LevelMatrix};
pub use par::Parallelism;
pub use report::{AnalysisReport, BoundSelection};
pub use spectra::{symmetric_eigenvalues, CharPoly, EigenMethod, Spectrum};
pub use tree::{LevelVector, RootedTree};
pub use verify::{verify_order, VerificationLedger, VerifyOptions};
