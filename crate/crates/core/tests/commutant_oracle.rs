//! Brute-force cross-check of the commutant machinery.
//!
//! The library finds commutants by block-diagonalizing against a generic
//! algebra element. Here the commutant equations are solved literally: stack
//! the Kronecker forms of X -> XG - GX for every generator and read the null
//! space off a dense SVD. Feasible only at tiny dimension, which is exactly
//! what an oracle needs.

use blockade_anyon::basis::{BoundaryLabel, Sector};
use blockade_anyon::ops::golden_hamiltonian;
use blockade_anyon::projectors::pair_vacuum_projector;
use blockade_anyon::sparse::SparseOperator;
use blockade_anyon::symmetry::commutant_basis;
use nalgebra::DMatrix;

/// Null-space dimension and an orthonormal null basis of the stacked
/// commutator map, vec(X) -> vec([X, G_k]) for all k.
fn stacked_commutant(generators: &[SparseOperator]) -> (usize, DMatrix<f64>) {
    let d = generators[0].dim();
    let eye = DMatrix::<f64>::identity(d, d);
    let mut stacked = DMatrix::<f64>::zeros(generators.len() * d * d, d * d);
    for (k, g) in generators.iter().enumerate() {
        let gd = g.to_dense();
        // vec(XG - GX) = (G^T (x) I - I (x) G) vec(X), column-major vec
        let block = gd.transpose().kronecker(&eye) - eye.kronecker(&gd);
        stacked.view_mut((k * d * d, 0), (d * d, d * d)).copy_from(&block);
    }
    let svd = stacked.svd(false, true);
    let smax = svd.singular_values.max();
    let cut = 1e-10 * smax.max(1.0);
    let rank = svd.singular_values.iter().filter(|s| **s > cut).count();
    let vt = svd.v_t.unwrap();
    let null_dim = d * d - rank;
    let mut basis = DMatrix::zeros(d * d, null_dim);
    for (col, row) in (rank..d * d).enumerate() {
        basis.set_column(col, &vt.row(row).transpose());
    }
    (null_dim, basis)
}

/// Largest residual of projecting each library commutant element onto the
/// oracle null space; zero means the library answer lies inside the oracle's.
fn span_residual(basis: &[SparseOperator], null_basis: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for x in basis {
        let xd = x.to_dense();
        let v = DMatrix::from_column_slice(xd.nrows() * xd.ncols(), 1, xd.as_slice());
        let coeffs = null_basis.transpose() * &v;
        let back = null_basis * coeffs;
        worst = worst.max((v - back).norm());
    }
    worst
}

#[test]
fn pair_projector_commutants_match_brute_force() {
    for n in 3..=6u32 {
        let sector = Sector::new(n, BoundaryLabel::Tau, BoundaryLabel::Tau).unwrap();
        let gens: Vec<SparseOperator> = (1..n)
            .map(|i| pair_vacuum_projector(&sector, i).unwrap())
            .collect();
        let basis = commutant_basis(&gens).unwrap();
        let (dim, null_basis) = stacked_commutant(&gens);
        assert_eq!(basis.len(), dim, "N={n} commutant dimension");
        assert_eq!(dim, 2, "N={n} expects exactly the two charge channels");
        let resid = span_residual(&basis, &null_basis);
        assert!(resid < 1e-8, "N={n} span residual {resid:.3e}");
    }
}

#[test]
fn generic_hamiltonian_commutant_is_its_polynomial_algebra() {
    let sector = Sector::new(5, BoundaryLabel::Tau, BoundaryLabel::Tau).unwrap();
    let h = golden_hamiltonian(&sector, &[1.0, 0.7, 1.3, 0.9]).unwrap();
    let gens = vec![h];
    let basis = commutant_basis(&gens).unwrap();
    let (dim, null_basis) = stacked_commutant(&gens);
    // nondegenerate spectrum: anything commuting is diagonal in its eigenbasis
    assert_eq!(dim, sector.dim() as usize);
    assert_eq!(basis.len(), dim);
    assert!(span_residual(&basis, &null_basis) < 1e-8);
}

#[test]
fn mixed_sector_commutants_collapse_to_scalars_under_full_generators() {
    // mixed boundaries carry a single charge channel: the pair projectors
    // generate an algebra whose commutant is trivial
    for (z0, zn) in [
        (BoundaryLabel::One, BoundaryLabel::Tau),
        (BoundaryLabel::Tau, BoundaryLabel::One),
    ] {
        let sector = Sector::new(6, z0, zn).unwrap();
        let gens: Vec<SparseOperator> = (1..6)
            .map(|i| pair_vacuum_projector(&sector, i).unwrap())
            .collect();
        let basis = commutant_basis(&gens).unwrap();
        let (dim, null_basis) = stacked_commutant(&gens);
        assert_eq!(dim, 1, "{} mixed sector is irreducible", sector.key());
        assert_eq!(basis.len(), 1);
        assert!(span_residual(&basis, &null_basis) < 1e-8);
    }
}
