//! Constrained occupation bases for open chains with hard-core blockade.
//!
//! A chain of N anyons carries bond labels 0..=N; the boundary labels z0, zN
//! are fixed sector data and the N-1 interior bonds map to Rydberg sites
//! 1..=N-1 via label 1 <-> occupied, label tau <-> empty. Adjacent occupied
//! sites are forbidden, boundary occupations included, so sector dimensions
//! are Fibonacci numbers.
//!
//! States are stored as the integer value of the occupation bitstring with
//! n1 as the most significant bit; the canonical enumeration order is
//! ascending in that value. Ranking and unranking walk the bitstring once
//! against a precomputed suffix-count table, so both are O(N) and scale to
//! sector dimensions in the millions.

use crate::error::{Error, Result};
use crate::fib::fib;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, OnceLock};

/// Boundary bond label of the anyon chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryLabel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "tau")]
    Tau,
}

impl BoundaryLabel {
    /// Rydberg occupation of the boundary bond (1 <-> occupied).
    pub fn occupation(self) -> u8 {
        match self {
            BoundaryLabel::One => 1,
            BoundaryLabel::Tau => 0,
        }
    }

    /// Offset contributed to the Fibonacci dimension index.
    pub fn fib_offset(self) -> u32 {
        match self {
            BoundaryLabel::One => 0,
            BoundaryLabel::Tau => 1,
        }
    }
}

impl std::fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryLabel::One => write!(f, "1"),
            BoundaryLabel::Tau => write!(f, "tau"),
        }
    }
}

/// Net fusion channel of a contiguous group of anyons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChargeChannel {
    #[serde(rename = "vacuum")]
    Vacuum,
    #[serde(rename = "tau")]
    Tau,
}

impl std::fmt::Display for ChargeChannel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChargeChannel::Vacuum => write!(f, "vacuum"),
            ChargeChannel::Tau => write!(f, "tau"),
        }
    }
}

/// Identifies a sector without carrying its state table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorKey {
    #[serde(rename = "N")]
    pub n: u32,
    pub z0: BoundaryLabel,
    #[serde(rename = "zN")]
    pub zn: BoundaryLabel,
}

impl std::fmt::Display for SectorKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(N={}, {}, {})", self.n, self.z0, self.zn)
    }
}

/// One interior occupation configuration, stored as the integer value of the
/// bitstring n1..n_{N-1} with n1 most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState(pub u64);

/// Sector dimension F(N - 1 + offset(z0) + offset(zN)), with F(1) = F(2) = 1.
pub fn sector_dimension(n: u32, z0: BoundaryLabel, zn: BoundaryLabel) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "chain needs at least 2 anyons, got {n}"
        )));
    }
    fib(n - 1 + z0.fib_offset() + zn.fib_offset())
}

/// A fixed-boundary sector: dimension, canonical enumeration, rank/unrank.
#[derive(Debug)]
pub struct Sector {
    n: u32,
    z0: BoundaryLabel,
    zn: BoundaryLabel,
    dim: u64,
    /// suffix[j][p] = legal completions of sites j..=N-1 when site j-1 has
    /// occupation p, including the zN compatibility at the right edge;
    /// indexed j = 1..=N (entry N is the base case).
    suffix: Vec<[u64; 2]>,
    states: OnceLock<Vec<BasisState>>,
}

impl Sector {
    pub fn new(n: u32, z0: BoundaryLabel, zn: BoundaryLabel) -> Result<Arc<Self>> {
        if n > 65 {
            return Err(Error::Capacity(format!(
                "states are stored as 64-bit masks; N = {n} exceeds 65 anyons"
            )));
        }
        let dim = sector_dimension(n, z0, zn)?;
        let len = (n - 1) as usize;
        let occ_n = zn.occupation();
        let mut suffix = vec![[0u64; 2]; len + 2];
        suffix[len + 1] = [1, u64::from(occ_n == 0)];
        for j in (1..=len).rev() {
            let choose0 = suffix[j + 1][0];
            let choose1 = suffix[j + 1][1];
            suffix[j] = [choose0 + choose1, choose0];
        }
        debug_assert_eq!(suffix[1][z0.occupation() as usize], dim);
        Ok(Arc::new(Sector {
            n,
            z0,
            zn,
            dim,
            suffix,
            states: OnceLock::new(),
        }))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of interior Rydberg sites, N - 1.
    pub fn interior_len(&self) -> u32 {
        self.n - 1
    }

    pub fn z0(&self) -> BoundaryLabel {
        self.z0
    }

    pub fn zn(&self) -> BoundaryLabel {
        self.zn
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn key(&self) -> SectorKey {
        SectorKey {
            n: self.n,
            z0: self.z0,
            zn: self.zn,
        }
    }

    /// Occupation of site i for 0 <= i <= N; 0 and N read the boundary labels.
    pub fn occ(&self, state: BasisState, site: u32) -> u8 {
        if site == 0 {
            self.z0.occupation()
        } else if site == self.n {
            self.zn.occupation()
        } else {
            debug_assert!(site < self.n);
            ((state.0 >> (self.n - 1 - site)) & 1) as u8
        }
    }

    /// State with the occupation at interior site i flipped.
    pub fn flipped(&self, state: BasisState, site: u32) -> BasisState {
        debug_assert!(site >= 1 && site < self.n);
        BasisState(state.0 ^ (1u64 << (self.n - 1 - site)))
    }

    pub fn is_legal(&self, state: BasisState) -> bool {
        let len = self.interior_len();
        let v = state.0;
        if len < 64 && v >> len != 0 {
            return false;
        }
        if v & (v >> 1) != 0 {
            return false;
        }
        if self.z0.occupation() == 1 && self.occ(state, 1) == 1 {
            return false;
        }
        if self.zn.occupation() == 1 && self.occ(state, self.n - 1) == 1 {
            return false;
        }
        true
    }

    /// All states in canonical (ascending-value) order; built once and cached.
    pub fn states(&self) -> &[BasisState] {
        self.states.get_or_init(|| {
            let mut out = Vec::with_capacity(self.dim as usize);
            let len = self.interior_len();
            let occ_n = self.zn.occupation();
            // depth-first with the 0-branch first yields ascending values
            fn rec(
                i: u32,
                prev: u8,
                acc: u64,
                len: u32,
                occ_n: u8,
                out: &mut Vec<BasisState>,
            ) {
                if i > len {
                    out.push(BasisState(acc));
                    return;
                }
                rec(i + 1, 0, acc, len, occ_n, out);
                let right_ok = i < len || occ_n == 0;
                if prev == 0 && right_ok {
                    rec(i + 1, 1, acc | 1 << (len - i), len, occ_n, out);
                }
            }
            rec(1, self.z0.occupation(), 0, len, occ_n, &mut out);
            debug_assert_eq!(out.len() as u64, self.dim);
            out
        })
    }

    /// Canonical index of a state; domain error on an illegal bitstring.
    pub fn index_of(&self, state: BasisState) -> Result<u64> {
        let len = self.interior_len();
        if len < 64 && state.0 >> len != 0 {
            return Err(Error::Domain(format!(
                "bitstring {:#b} has more than {len} sites",
                state.0
            )));
        }
        let mut rank = 0u64;
        let mut prev = self.z0.occupation();
        for i in 1..=len {
            let b = self.occ(state, i);
            if prev == 1 && b == 1 {
                return Err(Error::Domain(format!(
                    "state {} violates blockade at site {i}",
                    self.bitstring(state)
                )));
            }
            if b == 1 {
                rank += self.suffix[(i + 1) as usize][0];
            }
            prev = b;
        }
        if prev == 1 && self.zn.occupation() == 1 {
            return Err(Error::Domain(format!(
                "state {} occupies the site blocked by the right boundary",
                self.bitstring(state)
            )));
        }
        Ok(rank)
    }

    /// State at a canonical index; argument error when out of range.
    pub fn state_at(&self, index: u64) -> Result<BasisState> {
        if index >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for dimension {}",
                self.dim
            )));
        }
        let len = self.interior_len();
        let mut k = index;
        let mut prev = self.z0.occupation();
        let mut acc = 0u64;
        for i in 1..=len {
            if prev == 1 {
                prev = 0;
                continue;
            }
            let with_zero = self.suffix[(i + 1) as usize][0];
            if k < with_zero {
                prev = 0;
            } else {
                k -= with_zero;
                acc |= 1 << (len - i);
                prev = 1;
            }
        }
        debug_assert_eq!(k, 0);
        Ok(BasisState(acc))
    }

    /// Occupations as a literal string, n1 leftmost.
    pub fn bitstring(&self, state: BasisState) -> String {
        (1..self.n)
            .map(|i| char::from(b'0' + self.occ(state, i)))
            .collect()
    }
}

impl PartialEq for Sector {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Sector {}

impl Serialize for Sector {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("Sector", 4)?;
        s.serialize_field("N", &self.n)?;
        s.serialize_field("z0", &self.z0)?;
        s.serialize_field("zN", &self.zn)?;
        s.serialize_field("dim", &self.dim)?;
        s.end()
    }
}
