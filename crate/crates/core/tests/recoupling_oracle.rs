//! Independent check of the window charge projectors.
//!
//! The implementation under test builds projectors spectrally, from the
//! algebra generated by pair projectors. Here the same matrices are derived
//! from nothing but the golden fusion rules and the recoupling matrix,
//! zipping one anyon at a time into a left-associated internal tree. The two
//! constructions share no code path beyond the basis enumeration.

use blockade_anyon::basis::{BasisState, BoundaryLabel, ChargeChannel, Sector};
use blockade_anyon::projectors::{total_charge_projector, window_charge_projector};
use nalgebra::DMatrix;
use std::sync::Arc;

const PHI: f64 = 1.618033988749894848204586834365638118;

/// Fusion labels: false = vacuum, true = tau.
type Label = bool;

fn admissible(a: Label, b: Label, c: Label) -> bool {
    match (a, b) {
        (false, false) => !c,
        (false, true) | (true, false) => c,
        (true, true) => true,
    }
}

/// Recoupling coefficient [F^{abc}_d]_{ef}. Zero when either side of the
/// move is inadmissible, the golden 2x2 when every outer label is tau,
/// and 1 otherwise.
fn f_move(a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> f64 {
    if !(admissible(a, b, e) && admissible(e, c, d) && admissible(b, c, f) && admissible(a, f, d))
    {
        return 0.0;
    }
    if a && b && c && d {
        match (e, f) {
            (false, false) => 1.0 / PHI,
            (false, true) | (true, false) => 1.0 / PHI.sqrt(),
            (true, true) => -1.0 / PHI,
        }
    } else {
        1.0
    }
}

/// Bond label at position j (0..=N) for a basis state: occupied sites carry
/// the trivial label, empty sites carry tau.
fn bond(sector: &Sector, state: BasisState, j: u32) -> Label {
    sector.occ(state, j) == 0
}

/// Amplitude for the linear fusion path of a window of anyons to land in the
/// left-associated internal tree. `path` holds the internal bond labels
/// (one fewer than the anyon count), `internal` the running tree labels,
/// ending in the window charge.
fn tree_amplitude(left: Label, path: &[Label], right: Label, internal: &[Label]) -> f64 {
    let moves = path.len();
    debug_assert_eq!(internal.len(), moves);
    let mut amp = 1.0;
    let mut prev = true; // the first anyon of the window, before zipping
    for k in 0..moves {
        let y_next = if k + 1 < moves { path[k + 1] } else { right };
        amp *= f_move(left, prev, true, y_next, path[k], internal[k]);
        if amp == 0.0 {
            return 0.0;
        }
        prev = internal[k];
    }
    amp
}

/// Charge projector for the anyon window [a, b] assembled purely from
/// category data: matrix elements are inner products of recoupled paths.
fn oracle_projector(sector: &Arc<Sector>, a: u32, b: u32, channel: ChargeChannel) -> DMatrix<f64> {
    let d = sector.dim() as usize;
    let m = (b - a + 1) as usize; // anyons in the window; m - 1 zipper moves
    assert!(m >= 2);
    let want_tau = matches!(channel, ChargeChannel::Tau);
    // every internal tree assignment ending in the requested charge
    let assignments: Vec<Vec<Label>> = (0..1u32 << (m - 2))
        .map(|bits| {
            let mut v: Vec<Label> = (0..m - 2).map(|k| bits >> k & 1 == 1).collect();
            v.push(want_tau);
            v
        })
        .collect();
    // internal bonds of the window are the interior sites a..=b-1
    let path_of =
        |state: BasisState| -> Vec<Label> { (a..b).map(|j| bond(sector, state, j)).collect() };
    let outside_key = |state: BasisState| -> u64 {
        let mut key = 0u64;
        for j in 1..sector.n() {
            if j < a || j >= b {
                key = key << 1 | u64::from(sector.occ(state, j));
            }
        }
        key
    };

    let mut p = DMatrix::zeros(d, d);
    for row in 0..d {
        let sr = sector.state_at(row as u64).unwrap();
        let left = bond(sector, sr, a - 1);
        let right = bond(sector, sr, b);
        let amps_row: Vec<f64> = assignments
            .iter()
            .map(|x| tree_amplitude(left, &path_of(sr), right, x))
            .collect();
        for col in 0..d {
            let sc = sector.state_at(col as u64).unwrap();
            if outside_key(sr) != outside_key(sc) {
                continue;
            }
            let amps_col: Vec<f64> = assignments
                .iter()
                .map(|x| tree_amplitude(left, &path_of(sc), right, x))
                .collect();
            p[(row, col)] = amps_row.iter().zip(&amps_col).map(|(x, y)| x * y).sum();
        }
    }
    p
}

fn all_sectors(n: u32) -> Vec<Arc<Sector>> {
    use BoundaryLabel::*;
    [(One, One), (One, Tau), (Tau, One), (Tau, Tau)]
        .into_iter()
        .map(|(z0, zn)| Sector::new(n, z0, zn).unwrap())
        .collect()
}

#[test]
fn windows_match_the_recoupling_construction() {
    for n in 2..=7u32 {
        for sector in all_sectors(n) {
            for a in 1..=n {
                for b in a + 1..=n.min(a + 3) {
                    for channel in [ChargeChannel::Vacuum, ChargeChannel::Tau] {
                        let got = window_charge_projector(&sector, a, b, channel)
                            .unwrap()
                            .to_dense();
                        let want = oracle_projector(&sector, a, b, channel);
                        let diff = (&got - &want).norm();
                        assert!(
                            diff < 1e-9,
                            "window [{a},{b}] {channel} in {} off by {diff:.3e}",
                            sector.key()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn full_chain_window_matches_the_charge_projector() {
    for n in 2..=6u32 {
        for sector in all_sectors(n) {
            let got = total_charge_projector(&sector).unwrap().to_dense();
            let want = oracle_projector(&sector, 1, n, ChargeChannel::Vacuum);
            assert!((got - want).norm() < 1e-9, "charge projector at {}", sector.key());
        }
    }
}

#[test]
fn oracle_channels_resolve_the_identity() {
    for n in 3..=6u32 {
        for sector in all_sectors(n) {
            let d = sector.dim() as usize;
            for (a, b) in [(1, 2), (1, n), (2, n)] {
                let pv = oracle_projector(&sector, a, b, ChargeChannel::Vacuum);
                let pt = oracle_projector(&sector, a, b, ChargeChannel::Tau);
                let sum = &pv + &pt;
                assert!((sum - DMatrix::<f64>::identity(d, d)).norm() < 1e-10);
                assert!((&pv * &pt).norm() < 1e-10);
                assert!((&pv * &pv - &pv).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn oracle_pair_matches_the_closed_form() {
    use blockade_anyon::projectors::pair_vacuum_projector;
    for n in 2..=6u32 {
        for sector in all_sectors(n) {
            for i in 1..n {
                let got = pair_vacuum_projector(&sector, i).unwrap().to_dense();
                let want = oracle_projector(&sector, i, i + 1, ChargeChannel::Vacuum);
                assert!((got - want).norm() < 1e-10);
            }
        }
    }
}
