//! Numerical laboratory for the exact correspondence between open
//! Rydberg-blockaded chains and golden (Fibonacci) anyon chains.
//!
//! The blockade constraint on N-1 hard-core sites is the flat image of the
//! fusion-tree constraint on a chain of N tau anyons with fixed boundary
//! labels: an occupied site is a trivial bond label, an empty site a tau
//! label. On top of that identification the crate builds
//!
//! * constrained bases with O(N) rank/unrank ([`basis`]),
//! * sparse operators and their algebra ([`sparse`], [`ops`]),
//! * fusion-channel projectors: nearest-neighbor pair, contiguous window,
//!   total charge ([`projectors`]),
//! * topological-symmetry diagnostics: commutant bases, symmetrization,
//!   symmetric-operator counting, locality analysis ([`symmetry`]),
//! * sector spectra and the identities relating them ([`spectra`]),
//! * unitary evolution and charge-leakage experiments under blockade-breaking
//!   noise ([`evolve`], [`leakage`]).
//!
//! Everything is deterministic: builders are pure functions of their
//! arguments, random draws are counter-based functions of (seed, site,
//! channel), and dense fallbacks have explicit capacity limits (see [`tol`]).

mod algebra;
pub mod basis;
pub mod error;
pub mod evolve;
pub mod fib;
pub mod golden;
pub mod leakage;
pub mod ops;
pub mod projectors;
pub mod rng;
pub mod sparse;
pub mod spectra;
pub mod symmetry;
pub mod tol;

pub use basis::{sector_dimension, BasisState, BoundaryLabel, ChargeChannel, Sector, SectorKey};
pub use error::{Error, Result};
pub use sparse::SparseOperator;
