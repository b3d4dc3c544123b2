//! Elementary operators: occupation, label sign, blockade-projected flip,
//! and the golden-chain Hamiltonian assembled from pair projectors.

use crate::basis::Sector;
use crate::error::{Error, Result};
use crate::golden::Golden;
use crate::projectors::pair_vacuum_projector;
use crate::sparse::SparseOperator;
use std::sync::Arc;

fn check_site(sector: &Sector, site: u32, allow_boundary: bool) -> Result<()> {
    let ok = if allow_boundary {
        site <= sector.n()
    } else {
        site >= 1 && site < sector.n()
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "site {site} out of range for {}",
            sector.key()
        )))
    }
}

/// Occupation n_i. Boundary sites 0 and N give the constant fixed by the
/// sector label: identity for an occupied boundary, zero otherwise.
pub fn op_number(sector: &Arc<Sector>, site: u32) -> Result<SparseOperator> {
    check_site(sector, site, true)?;
    if site == 0 || site == sector.n() {
        let occ = if site == 0 {
            sector.z0().occupation()
        } else {
            sector.zn().occupation()
        };
        return Ok(SparseOperator::scaled_identity(
            sector.clone(),
            f64::from(occ),
        ));
    }
    let triplets = sector
        .states()
        .iter()
        .enumerate()
        .filter(|(_, s)| sector.occ(**s, site) == 1)
        .map(|(k, _)| (k as u64, k as u64, 1.0))
        .collect();
    SparseOperator::from_triplets(sector.clone(), triplets, true)
}

/// Label sign 2 n_i - 1: eigenvalue +1 on an occupied site (trivial bond
/// label), -1 on an empty site (tau label). Boundary sites give +-identity.
pub fn op_zhat(sector: &Arc<Sector>, site: u32) -> Result<SparseOperator> {
    let n = op_number(sector, site)?;
    n.scale(2.0)
        .sub(&SparseOperator::identity(sector.clone()))
}

/// Blockade-projected flip at interior site i: matrix element 1 between the
/// two legal states that differ exactly at i, which requires both neighbors
/// (boundary occupations included) to be empty. Squares to the projector
/// onto that neighborhood condition, not to the identity.
pub fn op_flip(sector: &Arc<Sector>, site: u32) -> Result<SparseOperator> {
    check_site(sector, site, false)?;
    let mut triplets = Vec::new();
    for (k, s) in sector.states().iter().enumerate() {
        if sector.occ(*s, site - 1) == 0 && sector.occ(*s, site + 1) == 0 {
            let partner = sector.flipped(*s, site);
            let kp = sector.index_of(partner)?;
            triplets.push((kp, k as u64, 1.0));
        }
    }
    SparseOperator::from_triplets(sector.clone(), triplets, true)
}

/// H = -sum_i J_i P(i, i+1) over the N-1 nearest-neighbor anyon pairs, each
/// term projecting the pair onto its vacuum fusion channel.
pub fn golden_hamiltonian(sector: &Arc<Sector>, couplings: &[f64]) -> Result<SparseOperator> {
    let pairs = (sector.n() - 1) as usize;
    if couplings.len() != pairs {
        return Err(Error::InvalidArgument(format!(
            "{} couplings supplied, {} pairs in {}",
            couplings.len(),
            pairs,
            sector.key()
        )));
    }
    let mut triplets = Vec::new();
    for (idx, &j) in couplings.iter().enumerate() {
        let p = pair_vacuum_projector(sector, idx as u32 + 1)?;
        triplets.extend(p.entries().map(|(r, c, v)| (r, c, -j * v)));
    }
    SparseOperator::from_triplets(sector.clone(), triplets, true)
}

/// Golden-chain couplings drawn uniformly from [lo, hi], keyed by seed.
pub fn random_couplings(n: u32, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    (0..n - 1)
        .map(|i| {
            lo + (hi - lo) * crate::rng::uniform01(seed, crate::rng::STREAM_COUPLINGS, u64::from(i))
        })
        .collect()
}

/// The inverse dictionary at one site: coefficients expressing the bare flip
/// in pair-projector and label-sign terms. Returned by value so callers can
/// assemble the operator themselves; see `symmetry::dictionary_report` for
/// the verified reconstruction.
#[derive(Debug, Clone, Copy)]
pub struct FlipDecomposition {
    /// Multiplies the pair vacuum projector.
    pub projector: f64,
    /// Multiplies each neighbor label sign.
    pub neighbor: f64,
    /// Multiplies the neighbor label-sign product.
    pub neighbor_product: f64,
    /// Multiplies the on-site label sign.
    pub onsite: f64,
}

impl FlipDecomposition {
    /// Coefficients valid at any interior site whose neighbors are interior.
    pub fn interior() -> Self {
        let g = Golden::new();
        FlipDecomposition {
            projector: g.phi_3_2,
            neighbor: g.sqrt_phi * (1.0 - g.phi) / 4.0,
            neighbor_product: -g.phi_5_2 / 4.0,
            onsite: -(1.0 - g.phi) / (2.0 * g.sqrt_phi),
        }
    }

    /// The additive constant the four terms leave over; algebraically
    /// -3 / (4 sqrt phi) when both neighbors are interior.
    pub fn interior_constant() -> f64 {
        let g = Golden::new();
        -3.0 / (4.0 * g.sqrt_phi)
    }
}
