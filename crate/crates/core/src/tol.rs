//! Numerical tolerances and capacity limits, fixed in one place.
//!
//! Values are part of the crate's contract: build-time self-checks, report
//! pass/fail thresholds, and dense-mode ceilings all read from here.

/// Entries with |v| at or below this are dropped when an operator is built.
pub const DROP: f64 = 1e-14;

/// Symmetry mismatch allowed on entries of an operator flagged hermitian.
pub const HERMITIAN: f64 = 1e-12;

/// Idempotence residual ||P^2 - P||_F allowed at projector build time,
/// scaled by sqrt(dim).
pub const IDEMPOTENT: f64 = 1e-10;

/// A commutator Frobenius norm below this counts as "commutes".
pub const COMMUTE: f64 = 1e-10;

/// A commutator norm above this is a decisive "does not commute"; the gap
/// between COMMUTE and here is a no-man's-land that should never occur.
pub const NO_COMMUTE: f64 = 1e-2;

/// Singular values above RANK_REL * sigma_max count toward operator-space rank.
pub const RANK_REL: f64 = 1e-8;

/// Singular values above RANK_ABS_PER_DIM * dim count toward matrix rank.
pub const RANK_ABS_PER_DIM: f64 = 1e-9;

/// Eigenvalue comparison tolerance for spectral identities.
pub const SPECTRA: f64 = 1e-9;

/// Residual allowed on operator-identity reconstructions in dictionary reports.
pub const DICTIONARY: f64 = 1e-9;

/// Residual ||Ov - lambda v|| required of iterative eigenpairs.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

/// Step error per unit time required of the iterative propagator.
pub const EVOLVE_STEP: f64 = 1e-8;

/// Norm drift allowed over a full evolution.
pub const NORM_DRIFT: f64 = 1e-9;

/// Largest dimension diagonalized or SVD-factorized densely.
pub const DENSE_EIGEN_LIMIT: usize = 2000;

/// Largest sector dimension accepted by commutant / operator-counting routes.
pub const DENSE_ALGEBRA_LIMIT: usize = 1000;

/// Largest unknown count accepted when solving for a commutant basis; the
/// reduced normal matrix is dense of this order.
pub const COMMUTANT_UNKNOWNS_LIMIT: usize = 2500;

/// Normal-matrix eigenvalues below GRAM_NULL_REL * lambda_max count as null
/// directions (squared-singular-value analogue of a 1e-6 singular cut).
pub const GRAM_NULL_REL: f64 = 1e-12;

/// Largest operator-space dimension (sector dim squared) accepted by the
/// symmetric-operator counting rank computation.
pub const SYMM_COUNT_LIMIT: usize = 3200;
