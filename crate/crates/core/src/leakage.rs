//! The charge qubit under noise.
//!
//! A state prepared inside one total-charge eigenspace stays there under any
//! coupling choice; single-site fields and flips break that. This module
//! draws reproducible noise, prepares states in a chosen charge channel, and
//! records how much weight leaks out over time.

use crate::basis::{BoundaryLabel, ChargeChannel, Sector, SectorKey};
use crate::error::{Error, Result};
use crate::ops::{golden_hamiltonian, op_flip, op_number};
use crate::projectors::total_charge_projector;
use crate::rng::{uniform_symmetric, STREAM_NOISE_X, STREAM_NOISE_Z};
use crate::sparse::SparseOperator;
use crate::evolve;
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Noise strengths and the seed all draws derive from.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoiseConfig {
    pub eps_x: f64,
    pub eps_z: f64,
    pub master_seed: u64,
}

impl NoiseConfig {
    pub fn new(eps_x: f64, eps_z: f64, master_seed: u64) -> Result<Self> {
        if !(eps_x >= 0.0 && eps_z >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise amplitudes must be non-negative, got eps_x={eps_x}, eps_z={eps_z}"
            )));
        }
        Ok(Self {
            eps_x,
            eps_z,
            master_seed,
        })
    }

    pub fn silent(master_seed: u64) -> Self {
        Self {
            eps_x: 0.0,
            eps_z: 0.0,
            master_seed,
        }
    }

    /// Flip-field amplitude at `site`; depends only on (seed, site, channel).
    pub fn draw_x(&self, site: u32) -> f64 {
        uniform_symmetric(self.master_seed, STREAM_NOISE_X, u64::from(site), self.eps_x)
    }

    /// Density-field amplitude at `site`; depends only on (seed, site, channel).
    pub fn draw_z(&self, site: u32) -> f64 {
        uniform_symmetric(self.master_seed, STREAM_NOISE_Z, u64::from(site), self.eps_z)
    }
}

/// Coupling Hamiltonian plus per-site noise fields on every interior site.
///
/// Silent noise returns the coupling Hamiltonian unchanged, entry for entry.
pub fn noisy_hamiltonian(
    sector: &Arc<Sector>,
    couplings: &[f64],
    noise: &NoiseConfig,
) -> Result<SparseOperator> {
    let mut h = golden_hamiltonian(sector, couplings)?;
    for site in 1..sector.n() {
        let a = noise.draw_x(site);
        if a != 0.0 {
            h = h.add(&op_flip(sector, site)?.scale(a))?;
        }
        let b = noise.draw_z(site);
        if b != 0.0 {
            h = h.add(&op_number(sector, site)?.scale(b))?;
        }
    }
    Ok(h)
}

/// How to pick a state inside (or outside) the vacuum-channel image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitialStyle {
    /// First vector of the canonical-order orthonormalization of the image:
    /// the normalized projection of the lowest basis state that survives.
    ProjectorEigenbasis,
    /// Normalized projection of the basis state at this index.
    ProjectedBasisState(u64),
}

impl fmt::Display for InitialStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialStyle::ProjectorEigenbasis => write!(f, "projector-eigenbasis"),
            InitialStyle::ProjectedBasisState(k) => write!(f, "projected-basis-state:{k}"),
        }
    }
}

/// Normalized state in the chosen charge channel of the sector.
///
/// The vacuum channel projects with the total-charge projector, the tau
/// channel with its complement. The overall sign makes the first significant
/// component positive.
pub fn initial_qubit_state(
    sector: &Arc<Sector>,
    which: ChargeChannel,
    style: InitialStyle,
) -> Result<Vec<f64>> {
    let p = total_charge_projector(sector)?;
    let proj = match which {
        ChargeChannel::Vacuum => p,
        ChargeChannel::Tau => SparseOperator::identity(Arc::clone(sector)).sub(&p)?,
    };
    let dim = sector.dim();
    let candidates: Vec<u64> = match style {
        InitialStyle::ProjectedBasisState(k) => {
            if k >= dim {
                return Err(Error::InvalidArgument(format!(
                    "basis index {k} out of range for dimension {dim}"
                )));
            }
            vec![k]
        }
        InitialStyle::ProjectorEigenbasis => (0..dim).collect(),
    };
    for k in candidates {
        // column k of a symmetric operator read off its row
        let mut v = vec![0.0f64; dim as usize];
        for (col, val) in proj.row(k as usize) {
            v[col] = val;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            match style {
                InitialStyle::ProjectedBasisState(_) => {
                    return Err(Error::Degenerate(format!(
                        "basis state {k} has no weight in the {which} channel of {}",
                        sector.key()
                    )));
                }
                InitialStyle::ProjectorEigenbasis => continue,
            }
        }
        let lead = v.iter().find(|x| x.abs() > 1e-9 * norm).copied().unwrap_or(1.0);
        let scale = if lead < 0.0 { -1.0 / norm } else { 1.0 / norm };
        v.iter_mut().for_each(|x| *x *= scale);
        return Ok(v);
    }
    Err(Error::Degenerate(format!(
        "the {which} channel of {} is empty",
        sector.key()
    )))
}

/// Everything needed to reproduce a trace.
#[derive(Debug, Clone, Serialize)]
pub struct LeakageProvenance {
    pub sector: SectorKey,
    pub couplings: Vec<f64>,
    pub noise: NoiseConfig,
    pub channel: ChargeChannel,
    pub initial: String,
}

/// Time series of the charge expectation for one noisy evolution.
#[derive(Debug, Clone, Serialize)]
pub struct LeakageTrace {
    pub times: Vec<f64>,
    pub charge_expectation: Vec<f64>,
    pub norm_drift: Vec<f64>,
    /// Exact channel value the expectation is measured against (1 or 0).
    pub ideal_charge: f64,
    pub max_deviation: f64,
    pub provenance: LeakageProvenance,
}

impl LeakageTrace {
    /// Time-averaged |<P>(t) - ideal| over the grid.
    pub fn mean_deviation(&self) -> f64 {
        if self.charge_expectation.is_empty() {
            return 0.0;
        }
        let total: f64 = self
            .charge_expectation
            .iter()
            .map(|c| (c - self.ideal_charge).abs())
            .sum();
        total / self.charge_expectation.len() as f64
    }
}

/// 201 evenly spaced times covering [0, 100].
pub fn default_time_grid() -> Vec<f64> {
    (0..=200).map(|k| f64::from(k) * 0.5).collect()
}

/// Evolve a charge-channel state of the two-tau sector under a noisy
/// Hamiltonian and record the charge expectation along the way.
///
/// `init` defaults to the projected lowest basis state in the vacuum channel.
pub fn leakage_experiment(
    n: u32,
    couplings: &[f64],
    noise: &NoiseConfig,
    times: &[f64],
    init: Option<(ChargeChannel, InitialStyle)>,
) -> Result<LeakageTrace> {
    let sector = Sector::new(n, BoundaryLabel::Tau, BoundaryLabel::Tau)?;
    let (channel, style) =
        init.unwrap_or((ChargeChannel::Vacuum, InitialStyle::ProjectedBasisState(0)));
    let h = noisy_hamiltonian(&sector, couplings, noise)?;
    let p = total_charge_projector(&sector)?;
    let psi0 = initial_qubit_state(&sector, channel, style)?;
    let psi0_c: Vec<Complex64> = psi0.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    let snapshots = evolve::evolve_state(&h, &psi0_c, times)?;

    let ideal = match channel {
        ChargeChannel::Vacuum => 1.0,
        ChargeChannel::Tau => 0.0,
    };
    let mut charge = Vec::with_capacity(times.len());
    let mut drift = Vec::with_capacity(times.len());
    let mut max_dev = 0.0f64;
    for psi in &snapshots {
        let pv = p.matvec_complex(psi);
        let expect: f64 = psi
            .iter()
            .zip(&pv)
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        max_dev = max_dev.max((expect - ideal).abs());
        charge.push(expect);
        drift.push((norm2 - 1.0).abs());
    }
    Ok(LeakageTrace {
        times: times.to_vec(),
        charge_expectation: charge,
        norm_drift: drift,
        ideal_charge: ideal,
        max_deviation: max_dev,
        provenance: LeakageProvenance {
            sector: sector.key(),
            couplings: couplings.to_vec(),
            noise: *noise,
            channel,
            initial: style.to_string(),
        },
    })
}

/// Least-squares slope of ln(deviation) against ln(eps).
///
/// Draws scale linearly with the amplitude at fixed seed, so the leading
/// leakage response is quadratic and the fitted slope should sit near 2.
pub fn scaling_exponent(eps: &[f64], mean_deviation: &[f64]) -> Result<f64> {
    if eps.len() != mean_deviation.len() || eps.len() < 2 {
        return Err(Error::InvalidArgument(
            "scaling fit needs matching lists with at least two points".into(),
        ));
    }
    if eps.iter().any(|e| *e <= 0.0) || mean_deviation.iter().any(|d| *d <= 0.0) {
        return Err(Error::InvalidArgument(
            "scaling fit needs strictly positive amplitudes and deviations".into(),
        ));
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = mean_deviation.iter().map(|d| d.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}
