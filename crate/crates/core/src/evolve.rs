//! Unitary evolution under real symmetric operators.
//!
//! Up to the dense ceiling the propagator is exact: one eigendecomposition,
//! then phase factors per requested time. Above it a Lanczos short-step
//! scheme advances the state with a per-unit-time error budget.

use crate::error::{Error, Result};
use crate::sparse::SparseOperator;
use crate::tol;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn check_evolution_input(h: &SparseOperator, psi0: &[Complex64], times: &[f64]) -> Result<()> {
    let defect = h.hermitian_defect();
    if defect > 1e-10 {
        return Err(Error::Domain(format!(
            "propagator needs a hermitian generator; defect {defect:.3e}"
        )));
    }
    if psi0.len() != h.dim() {
        return Err(Error::InvalidArgument(format!(
            "state length {} does not match dimension {}",
            psi0.len(),
            h.dim()
        )));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::InvalidArgument(
            "evolution times must be non-negative and ascending".into(),
        ));
    }
    Ok(())
}

/// psi(t) = exp(-iHt) psi0 at each requested time (non-negative, ascending).
pub fn evolve_state(
    h: &SparseOperator,
    psi0: &[Complex64],
    times: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    check_evolution_input(h, psi0, times)?;
    if h.dim() <= tol::DENSE_EIGEN_LIMIT {
        Ok(dense_evolve(h, psi0, times))
    } else {
        krylov_evolve(h, psi0, times)
    }
}

fn dense_evolve(h: &SparseOperator, psi0: &[Complex64], times: &[f64]) -> Vec<Vec<Complex64>> {
    let d = psi0.len();
    let eig = h.to_dense().symmetric_eigen();
    let re0 = DVector::from_fn(d, |i, _| psi0[i].re);
    let im0 = DVector::from_fn(d, |i, _| psi0[i].im);
    let cr = eig.eigenvectors.transpose() * re0;
    let ci = eig.eigenvectors.transpose() * im0;
    let mut out = Vec::with_capacity(times.len());
    let mut ar = DVector::zeros(d);
    let mut ai = DVector::zeros(d);
    for &t in times {
        for k in 0..d {
            let theta = eig.eigenvalues[k] * t;
            let (s, c) = theta.sin_cos();
            // (cr + i ci)(cos - i sin)
            ar[k] = cr[k] * c + ci[k] * s;
            ai[k] = ci[k] * c - cr[k] * s;
        }
        let vr = &eig.eigenvectors * &ar;
        let vi = &eig.eigenvectors * &ai;
        out.push((0..d).map(|i| Complex64::new(vr[i], vi[i])).collect());
    }
    out
}

/// Krylov subspace size per short step.
const KRYLOV_DIM: usize = 40;
/// Hard floor on the substep to rule out non-termination on hostile input.
const MIN_SUBSTEP: f64 = 1e-9;

/// Short-step Lanczos propagator; exposed separately so moderate dimensions
/// can exercise it against the dense path.
pub fn krylov_evolve(
    h: &SparseOperator,
    psi0: &[Complex64],
    times: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    check_evolution_input(h, psi0, times)?;
    let mut psi: Vec<Complex64> = psi0.to_vec();
    let mut now = 0.0f64;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let mut remaining = t - now;
        while remaining > 1e-14 {
            let (next, advanced) = krylov_step(h, &psi, remaining)?;
            psi = next;
            remaining -= advanced;
        }
        now = t;
        out.push(psi.clone());
    }
    Ok(out)
}

/// One adaptive substep: build a Krylov basis at the current state, apply
/// the tridiagonal exponential, halve the step until the subspace-edge
/// amplitude fits the per-unit-time budget. Returns (state, time advanced).
fn krylov_step(
    h: &SparseOperator,
    psi: &[Complex64],
    dt_want: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let d = psi.len();
    let norm0 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm0 == 0.0 {
        return Ok((psi.to_vec(), dt_want));
    }
    let m_cap = KRYLOV_DIM.min(d);
    let mut basis: Vec<Vec<Complex64>> = vec![psi.iter().map(|z| z / norm0).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut exact = false;
    for j in 0..m_cap {
        let mut w = h.matvec_complex(&basis[j]);
        let a: Complex64 = basis[j]
            .iter()
            .zip(&w)
            .map(|(v, x)| v.conj() * x)
            .sum();
        alpha.push(a.re);
        for (wi, vi) in w.iter_mut().zip(&basis[j]) {
            *wi -= a.re * vi;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (wi, vi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= b * vi;
            }
        }
        // one reorthogonalization sweep keeps the tridiagonal honest
        for u in &basis {
            let c: Complex64 = u.iter().zip(&w).map(|(v, x)| v.conj() * x).sum();
            for (wi, vi) in w.iter_mut().zip(u) {
                *wi -= c * vi;
            }
        }
        let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if b < 1e-13 {
            exact = true;
            break;
        }
        if j + 1 == m_cap {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }

    let m = alpha.len();
    let mut tri = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        tri[(i, i)] = alpha[i];
        if i > 0 {
            tri[(i, i - 1)] = beta[i - 1];
            tri[(i - 1, i)] = beta[i - 1];
        }
    }
    let eig = tri.symmetric_eigen();
    let u1: Vec<f64> = (0..m).map(|k| eig.eigenvectors[(0, k)]).collect();

    let mut dt = dt_want;
    loop {
        // z = exp(-i T dt) e1 in the Krylov frame
        let mut z = vec![Complex64::ZERO; m];
        for (k, u1k) in u1.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k] * dt);
            let w = phase * u1k;
            for (i, zi) in z.iter_mut().enumerate() {
                *zi += eig.eigenvectors[(i, k)] * w;
            }
        }
        let edge = z[m - 1].norm();
        if exact || edge <= tol::EVOLVE_STEP * dt.max(MIN_SUBSTEP) || dt <= MIN_SUBSTEP {
            let mut next = vec![Complex64::ZERO; d];
            for (i, zi) in z.iter().enumerate() {
                let c = zi * norm0;
                for (ni, vi) in next.iter_mut().zip(&basis[i]) {
                    *ni += c * vi;
                }
            }
            return Ok((next, dt));
        }
        dt *= 0.5;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BoundaryLabel::*, Sector};
    use crate::ops::golden_hamiltonian;
    use crate::spectra::seeded_couplings;

    fn state(d: usize) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..d)
            .map(|i| Complex64::new(1.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.71).cos()))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= n);
        v
    }

    #[test]
    fn zero_time_and_zero_generator() {
        let s = Sector::new(6, Tau, Tau).unwrap();
        let h = golden_hamiltonian(&s, &seeded_couplings(6, 5, 0.5)).unwrap();
        let psi = state(h.dim());
        let out = evolve_state(&h, &psi, &[0.0]).unwrap();
        for (a, b) in out[0].iter().zip(&psi) {
            assert!((a - b).norm() < 1e-12);
        }
        let z = SparseOperator::zero(s);
        let out = evolve_state(&z, &psi, &[0.0, 3.5, 10.0]).unwrap();
        for snap in out {
            for (a, b) in snap.iter().zip(&psi) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenstate_only_picks_up_phase() {
        let s = Sector::new(5, Tau, Tau).unwrap();
        let h = golden_hamiltonian(&s, &[1.0, 0.6, 1.4, 0.8]).unwrap();
        let spec = crate::spectra::eigensystem(&h, true).unwrap();
        let v = spec.vectors.unwrap();
        let psi: Vec<Complex64> = (0..v.nrows())
            .map(|i| Complex64::new(v[(i, 0)], 0.0))
            .collect();
        let out = evolve_state(&h, &psi, &[0.0, 1.0, 7.3]).unwrap();
        for snap in &out {
            let overlap: Complex64 = snap
                .iter()
                .zip(&psi)
                .map(|(a, b)| Complex64::new(b.re, -b.im) * a)
                .sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn norm_is_preserved() {
        let s = Sector::new(7, Tau, Tau).unwrap();
        let h = golden_hamiltonian(&s, &seeded_couplings(7, 9, 0.7)).unwrap();
        let psi = state(h.dim());
        let times: Vec<f64> = (0..=50).map(|k| f64::from(k) * 2.0).collect();
        for snap in evolve_state(&h, &psi, &times).unwrap() {
            let n2 = snap.iter().map(|z| z.norm_sqr()).sum::<f64>();
            assert!((n2 - 1.0).abs() < tol::NORM_DRIFT);
        }
    }

    #[test]
    fn krylov_matches_dense() {
        let s = Sector::new(10, Tau, Tau).unwrap();
        let h = golden_hamiltonian(&s, &seeded_couplings(10, 11, 0.6)).unwrap();
        let psi = state(h.dim());
        let times = [0.0, 0.7, 2.9, 11.0, 40.0];
        let dense = evolve_state(&h, &psi, &times).unwrap();
        let krylov = krylov_evolve(&h, &psi, &times).unwrap();
        for (a, b) in dense.iter().zip(&krylov) {
            let diff: f64 = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-6, "dense vs krylov diverged by {diff}");
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let s = Sector::new(4, Tau, Tau).unwrap();
        let h = golden_hamiltonian(&s, &[1.0; 3]).unwrap();
        let psi = state(5);
        assert!(evolve_state(&h, &psi[..3], &[0.0]).is_err());
        assert!(evolve_state(&h, &psi, &[1.0, 0.5]).is_err());
        assert!(evolve_state(&h, &psi, &[-1.0]).is_err());
        let bad = SparseOperator::from_triplets(s, vec![(0, 1, 1.0)], false).unwrap();
        assert!(evolve_state(&bad, &psi, &[0.0]).is_err());
    }
}
