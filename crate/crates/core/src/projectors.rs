//! Fusion-channel projectors.
//!
//! The nearest-neighbor pair projector has a closed form in Rydberg
//! variables: a blockade-projected flip plus neighbor-dependent diagonal
//! terms with golden-ratio coefficients. Wider windows have no such closed
//! form here; they are built spectrally. The pair projectors inside a window
//! generate, channel by channel, a full matrix algebra, so the two window
//! charge projectors are exactly the minimal central projectors of that
//! algebra. A generic weighted sum of the generators is diagonalized, its
//! eigenspaces are joined whenever a generator has a matrix element between
//! them, and the two surviving components are the channel subspaces.
//!
//! Channels are told apart by rank: the vacuum component of an m-anyon
//! window has rank F(m-1) x M_vac and the tau component F(m) x M_tau, where
//! the multiplicities M count constrained configurations of the complement.
//! When the two ranks coincide the fallback witness is a vector in the image
//! of disjoint pair projectors tiling the window: all pairs in their vacuum
//! channel leaves total charge vacuum for even m and tau for odd m.
//!
//! Built projectors are cached per (sector, window, channel); the cache is
//! shared, reads are concurrent, writes serialized.

use crate::algebra::{clustered_eigen, conjugate, weighted_sum, UnionFind};
use crate::basis::{BoundaryLabel, ChargeChannel, Sector, SectorKey};
use crate::error::{Error, Result};
use crate::fib::{fib, walk_count};
use crate::golden::Golden;
use crate::ops::op_flip;
use crate::sparse::{ProjectorTag, SparseOperator};
use crate::tol;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

/// Weight seed for the generic algebra element; any fixed value works, the
/// retry loop bumps the attempt stream on spectral collisions.
const CENTER_SEED: u64 = 0x636861726765;
const MAX_CENTER_ATTEMPTS: u64 = 4;
/// Eigenbasis matrix elements above this join two eigenspaces.
const CONNECT_TOL: f64 = 1e-8;
/// Relative eigenvalue gap that separates clusters.
const CLUSTER_GAP: f64 = 1e-9;

/// Projector onto the vacuum fusion channel of anyons (i, i+1), built from
/// its closed form: flip / phi^(3/2) plus diagonal neighbor terms.
pub fn pair_vacuum_projector(sector: &Arc<Sector>, i: u32) -> Result<SparseOperator> {
    if i < 1 || i >= sector.n() {
        return Err(Error::InvalidArgument(format!(
            "pair ({i}, {}) not in {}",
            i + 1,
            sector.key()
        )));
    }
    let g = Golden::new();
    let c_onsite = (1.0 - g.phi) * g.inv_phi2;
    let mut triplets = Vec::new();
    for (k, s) in sector.states().iter().enumerate() {
        let nl = f64::from(sector.occ(*s, i - 1));
        let nr = f64::from(sector.occ(*s, i + 1));
        let ni = f64::from(sector.occ(*s, i));
        let diag = -g.inv_phi * (nl + nr - 1.0) + g.phi * nl * nr + c_onsite * ni;
        triplets.push((k as u64, k as u64, diag));
        if nl == 0.0 && nr == 0.0 {
            let kp = sector.index_of(sector.flipped(*s, i))?;
            triplets.push((kp, k as u64, g.inv_phi_3_2));
        }
    }
    let mut p = SparseOperator::from_triplets(sector.clone(), triplets, true)?;
    let rank = expected_window_rank(sector, i, i + 1, ChargeChannel::Vacuum)?;
    verify_projector(&p, "pair vacuum projector", rank)?;
    p.tag = Some(ProjectorTag {
        window: [i, i + 1],
        channel: ChargeChannel::Vacuum,
        rank,
    });
    Ok(p)
}

/// Fusion paths of m tau anyons resolving to (vacuum, tau):
/// (F(m-1), F(m)), with the single anyon counting as (0, 1).
pub fn charge_resolved_path_count(m: u32) -> Result<(u64, u64)> {
    if m == 0 {
        return Err(Error::InvalidArgument("empty anyon group".into()));
    }
    let vac = if m == 1 { 0 } else { fib(m - 1)? };
    Ok((vac, fib(m)?))
}

/// Configurations of the complement of window [a, b] when the window is
/// contracted to a single leg of the given charge: fence labels must be
/// fusion-consistent with the charge and the outer chain walks constrained.
pub fn channel_multiplicity(
    sector: &Sector,
    a: u32,
    b: u32,
    channel: ChargeChannel,
) -> Result<u64> {
    check_window(sector, a, b)?;
    // fence occupation pairs (left bond a-1, right bond b) consistent with
    // the channel: vacuum keeps the label, tau maps 1 -> tau and tau -> both
    let allowed: &[(u8, u8)] = match channel {
        ChargeChannel::Vacuum => &[(0, 0), (1, 1)],
        ChargeChannel::Tau => &[(0, 0), (0, 1), (1, 0)],
    };
    let occ0 = sector.z0().occupation();
    let occ_n = sector.zn().occupation();
    let mut m = 0u64;
    for &(l, r) in allowed {
        m += walk_count(occ0, l, a - 1) * walk_count(r, occ_n, sector.n() - b);
    }
    Ok(m)
}

/// Rank of the window charge projector: internal fusion paths times
/// complement multiplicity.
pub fn expected_window_rank(
    sector: &Sector,
    a: u32,
    b: u32,
    channel: ChargeChannel,
) -> Result<u64> {
    let (vac, tau) = charge_resolved_path_count(b - a + 1)?;
    let paths = match channel {
        ChargeChannel::Vacuum => vac,
        ChargeChannel::Tau => tau,
    };
    Ok(paths * channel_multiplicity(sector, a, b, channel)?)
}

fn check_window(sector: &Sector, a: u32, b: u32) -> Result<()> {
    if a < 1 || a > b || b > sector.n() {
        return Err(Error::InvalidArgument(format!(
            "window [{a}, {b}] not contiguous inside {}",
            sector.key()
        )));
    }
    Ok(())
}

type CacheKey = (SectorKey, u32, u32, ChargeChannel);

fn cache() -> &'static RwLock<HashMap<CacheKey, SparseOperator>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, SparseOperator>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Projector onto one fusion channel of the contiguous anyon window [a, b].
///
/// m = 1 is immediate: a lone tau has charge tau. When a channel is absent
/// (its rank count is zero) the projector degenerates to zero and its
/// partner to the identity. Otherwise both channels are built spectrally
/// from the pair projectors inside the window and cached.
pub fn window_charge_projector(
    sector: &Arc<Sector>,
    a: u32,
    b: u32,
    channel: ChargeChannel,
) -> Result<SparseOperator> {
    check_window(sector, a, b)?;
    let key = (sector.key(), a, b, channel);
    if let Some(hit) = cache().read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let dim = sector.dim();
    if dim as usize > tol::DENSE_ALGEBRA_LIMIT {
        return Err(Error::Capacity(format!(
            "center route is dense; dimension {dim} exceeds {}",
            tol::DENSE_ALGEBRA_LIMIT
        )));
    }
    let tagged = |mut op: SparseOperator, ch: ChargeChannel, rank: u64| {
        op.tag = Some(ProjectorTag {
            window: [a, b],
            channel: ch,
            rank,
        });
        op
    };
    if a == b {
        let p = match channel {
            ChargeChannel::Vacuum => tagged(SparseOperator::zero(sector.clone()), channel, 0),
            ChargeChannel::Tau => {
                tagged(SparseOperator::identity(sector.clone()), channel, dim)
            }
        };
        return Ok(p);
    }
    let r_vac = expected_window_rank(sector, a, b, ChargeChannel::Vacuum)?;
    let r_tau = expected_window_rank(sector, a, b, ChargeChannel::Tau)?;
    if r_vac + r_tau != dim {
        return Err(Error::Structure(format!(
            "window [{a}, {b}] rank split {r_vac} + {r_tau} misses dimension {dim} in {}",
            sector.key()
        )));
    }
    if r_vac == 0 || r_tau == 0 {
        let (vac_op, tau_op) = if r_vac == 0 {
            (
                SparseOperator::zero(sector.clone()),
                SparseOperator::identity(sector.clone()),
            )
        } else {
            (
                SparseOperator::identity(sector.clone()),
                SparseOperator::zero(sector.clone()),
            )
        };
        let vac_op = tagged(vac_op, ChargeChannel::Vacuum, r_vac);
        let tau_op = tagged(tau_op, ChargeChannel::Tau, r_tau);
        let mut w = cache().write().unwrap();
        w.insert((sector.key(), a, b, ChargeChannel::Vacuum), vac_op.clone());
        w.insert((sector.key(), a, b, ChargeChannel::Tau), tau_op.clone());
        return Ok(match channel {
            ChargeChannel::Vacuum => vac_op,
            ChargeChannel::Tau => tau_op,
        });
    }

    let generators: Vec<SparseOperator> = (a..b)
        .map(|i| pair_vacuum_projector(sector, i))
        .collect::<Result<_>>()?;
    let (vac_cols, tau_cols, vecs) =
        channel_components(sector, a, b, &generators, r_vac, r_tau)?;

    let mut built = Vec::new();
    for (ch, cols, rank) in [
        (ChargeChannel::Vacuum, vac_cols, r_vac),
        (ChargeChannel::Tau, tau_cols, r_tau),
    ] {
        let vs = vecs.select_columns(&cols);
        let dense = &vs * vs.transpose();
        let mut triplets = Vec::new();
        for r in 0..dense.nrows() {
            for c in 0..dense.ncols() {
                let v = dense[(r, c)];
                if v.abs() > tol::DROP {
                    triplets.push((r as u64, c as u64, v));
                }
            }
        }
        let p = SparseOperator::from_triplets(sector.clone(), triplets, true)?;
        verify_projector(&p, "window charge projector", rank)?;
        for g in &generators {
            let comm = p.commutator(g)?.frobenius_norm();
            if comm > tol::COMMUTE {
                return Err(Error::Structure(format!(
                    "window projector fails to centralize its generators: |[P, G]| = {comm:.3e}"
                )));
            }
        }
        built.push(tagged(p, ch, rank));
    }
    let mut w = cache().write().unwrap();
    for p in &built {
        let t = p.tag.unwrap();
        w.insert((sector.key(), a, b, t.channel), p.clone());
    }
    Ok(match channel {
        ChargeChannel::Vacuum => built.remove(0),
        ChargeChannel::Tau => built.remove(1),
    })
}

/// Diagonalize a generic element of the window algebra and split the
/// eigenbasis into the two channel components. Returns vacuum columns, tau
/// columns, and the eigenbasis they index into.
fn channel_components(
    sector: &Arc<Sector>,
    a: u32,
    b: u32,
    generators: &[SparseOperator],
    r_vac: u64,
    r_tau: u64,
) -> Result<(Vec<usize>, Vec<usize>, nalgebra::DMatrix<f64>)> {
    let d = sector.dim() as usize;
    let mut last_count = 0usize;
    for attempt in 0..MAX_CENTER_ATTEMPTS {
        let t = weighted_sum(generators, CENTER_SEED, attempt)?;
        let ce = clustered_eigen(&t.to_dense(), CLUSTER_GAP);
        let mut uf = UnionFind::new(ce.clusters.len());
        for g in generators {
            let ghat = conjugate(g, &ce.vecs);
            for p in 0..d {
                for q in (p + 1)..d {
                    if ghat[(p, q)].abs() > CONNECT_TOL {
                        uf.union(ce.cluster_of[p], ce.cluster_of[q]);
                    }
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (ci, range) in ce.clusters.iter().enumerate() {
            comps
                .entry(uf.find(ci))
                .or_default()
                .extend(range.clone());
        }
        last_count = comps.len();
        if comps.len() != 2 {
            // an accidental cross-channel eigenvalue collision merges
            // components; new weights break the tie
            continue;
        }
        let mut comps: Vec<Vec<usize>> = comps.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        let sizes = [comps[0].len() as u64, comps[1].len() as u64];
        let (vac_idx, tau_idx) = if r_vac != r_tau {
            if sizes == [r_vac, r_tau] {
                (0, 1)
            } else if sizes == [r_tau, r_vac] {
                (1, 0)
            } else {
                return Err(Error::Structure(format!(
                    "component ranks {sizes:?} match neither channel split ({r_vac}, {r_tau})"
                )));
            }
        } else {
            identify_by_witness(sector, a, b, &comps, &ce.vecs)?
        };
        let vac_cols = comps[vac_idx].clone();
        let tau_cols = comps[tau_idx].clone();
        return Ok((vac_cols, tau_cols, ce.vecs));
    }
    Err(Error::Structure(format!(
        "window [{a}, {b}] algebra center has {last_count} minimal projectors, expected 2"
    )))
}

/// Rank-degenerate fallback: a vector in the image of disjoint pair
/// projectors tiling the window lies in the vacuum channel for even window
/// length and in the tau channel for odd. Returns (vacuum, tau) component
/// indices.
fn identify_by_witness(
    sector: &Arc<Sector>,
    a: u32,
    b: u32,
    comps: &[Vec<usize>],
    vecs: &nalgebra::DMatrix<f64>,
) -> Result<(usize, usize)> {
    let mut q = pair_vacuum_projector(sector, a)?;
    let mut start = a + 2;
    while start < b {
        q = q.mul(&pair_vacuum_projector(sector, start)?)?;
        start += 2;
    }
    let d = q.dim();
    let mut witness = vec![0.0f64; d];
    let mut found = false;
    for r in 0..d {
        let mut norm = 0.0;
        for (_, v) in q.row(r) {
            norm += v * v;
        }
        if norm.sqrt() > 1e-9 {
            for (c, v) in q.row(r) {
                witness[c] = v;
            }
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::Structure(
            "pair-product witness vanished; cannot identify channels".into(),
        ));
    }
    let wnorm = witness.iter().map(|v| v * v).sum::<f64>().sqrt();
    let m = b - a + 1;
    let mut fixed = None;
    for (idx, cols) in comps.iter().enumerate() {
        // |P w - w| with P the component projector
        let vs = vecs.select_columns(cols);
        let coeff = vs.transpose() * nalgebra::DVector::from_column_slice(&witness);
        let pw = vs * coeff;
        let mut diff = 0.0f64;
        for k in 0..d {
            diff += (pw[k] - witness[k]).powi(2);
        }
        if diff.sqrt() < 1e-6 * wnorm {
            if fixed.is_some() {
                return Err(Error::Structure(
                    "witness fixed by both components".into(),
                ));
            }
            fixed = Some(idx);
        }
    }
    let fixed = fixed.ok_or_else(|| {
        Error::Structure("witness fixed by neither component".into())
    })?;
    let other = 1 - fixed;
    Ok(if m.is_multiple_of(2) {
        (fixed, other)
    } else {
        (other, fixed)
    })
}

/// Projector onto total chain charge vacuum. Only the (tau, tau) sector has
/// both charges; elsewhere the boundary labels fix the charge and the
/// projector is 0 or the identity.
pub fn total_charge_projector(sector: &Arc<Sector>) -> Result<SparseOperator> {
    use BoundaryLabel::*;
    let n = sector.n();
    match (sector.z0(), sector.zn()) {
        (Tau, Tau) => window_charge_projector(sector, 1, n, ChargeChannel::Vacuum),
        (One, One) => {
            // 1 x 1 can only close to vacuum
            let mut p = SparseOperator::identity(sector.clone());
            p.tag = Some(ProjectorTag {
                window: [1, n],
                channel: ChargeChannel::Vacuum,
                rank: sector.dim(),
            });
            Ok(p)
        }
        _ => {
            // mixed boundaries close to tau; the vacuum component is empty
            let mut p = SparseOperator::zero(sector.clone());
            p.tag = Some(ProjectorTag {
                window: [1, n],
                channel: ChargeChannel::Vacuum,
                rank: 0,
            });
            Ok(p)
        }
    }
}

/// Two-valued charge detector (1 + phi^-2) P_vac - phi^-2: eigenvalue 1 on
/// the vacuum channel, -phi^-2 on the tau channel.
pub fn otest_operator(sector: &Arc<Sector>) -> Result<SparseOperator> {
    let g = Golden::new();
    let p = total_charge_projector(sector)?;
    let mut o = p.scale(1.0 + g.inv_phi2).sub(&SparseOperator::scaled_identity(
        sector.clone(),
        g.inv_phi2,
    ))?;
    o.set_hermitian(true);
    Ok(o)
}

/// Vacuum projector of the prefix anyons 1..=i. With an occupied left
/// boundary the prefix charge is readable from bond i alone and the
/// projector collapses to the occupation operator; that collapse is a
/// theorem here, not an input: the window construction is used unchanged.
pub fn prefix_vacuum_projector(sector: &Arc<Sector>, i: u32) -> Result<SparseOperator> {
    if i < 1 || i > sector.n() {
        return Err(Error::InvalidArgument(format!(
            "prefix 1..={i} not inside {}",
            sector.key()
        )));
    }
    window_charge_projector(sector, 1, i, ChargeChannel::Vacuum)
}

/// Hermiticity, idempotence, and integer trace against the expected rank.
fn verify_projector(p: &SparseOperator, what: &'static str, expected_rank: u64) -> Result<()> {
    let defect = p.hermitian_defect();
    if defect > tol::HERMITIAN {
        return Err(Error::construction(what, defect, tol::HERMITIAN));
    }
    let idem_tol = tol::IDEMPOTENT * (p.dim() as f64).sqrt();
    let residual = p.mul(p)?.sub(p)?.frobenius_norm();
    if residual > idem_tol {
        return Err(Error::construction(what, residual, idem_tol));
    }
    let tr = p.trace();
    if (tr - expected_rank as f64).abs() > 1e-6 {
        return Err(Error::Structure(format!(
            "{what}: trace {tr:.8} does not match expected rank {expected_rank}"
        )));
    }
    Ok(())
}

/// The blockade-projected flip is recovered from the pair projector and
/// label signs; used by dictionary reports and their tests.
pub fn flip_from_pair_projector(sector: &Arc<Sector>, i: u32) -> Result<SparseOperator> {
    let g = Golden::new();
    let p = pair_vacuum_projector(sector, i)?;
    let nl = crate::ops::op_number(sector, i - 1)?;
    let nr = crate::ops::op_number(sector, i + 1)?;
    let ni = crate::ops::op_number(sector, i)?;
    let id = SparseOperator::identity(sector.clone());
    // invert the closed form: flip = phi^(3/2) (P - diagonal terms)
    let mut acc = p;
    acc = acc.add(&nl.add(&nr)?.sub(&id)?.scale(g.inv_phi))?;
    acc = acc.sub(&nl.mul(&nr)?.scale(g.phi))?;
    acc = acc.sub(&ni.scale((1.0 - g.phi) * g.inv_phi2))?;
    let mut out = acc.scale(g.phi_3_2);
    out.set_hermitian(true);
    let direct = op_flip(sector, i)?;
    let residual = out.distance(&direct)?;
    if residual > tol::DICTIONARY {
        return Err(Error::construction("flip recovery", residual, tol::DICTIONARY));
    }
    Ok(out)
}
