//! Sector-tagged sparse real operators in CSR form.
//!
//! Every operator knows the sector it acts on; mixing sectors is a domain
//! error, not a silent shape mismatch. Entry order is canonical (row-major,
//! ascending column), entries with |v| <= tol::DROP are dropped at build
//! time, and all constructions are deterministic, so equal builds are
//! byte-identical.

use crate::basis::{ChargeChannel, Sector, SectorKey};
use crate::error::{Error, Result};
use crate::tol;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::sync::Arc;

/// Extra export header carried by fusion-channel projectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectorTag {
    /// Anyon window [a, b], inclusive.
    pub window: [u32; 2],
    pub channel: ChargeChannel,
    pub rank: u64,
}

#[derive(Debug, Clone)]
pub struct SparseOperator {
    sector: Arc<Sector>,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<f64>,
    hermitian: bool,
    /// Set by projector builders; serialized into the export header.
    pub tag: Option<ProjectorTag>,
}

impl SparseOperator {
    /// Build from (row, col, value) triplets: duplicate entries are summed,
    /// entries with |v| <= tol::DROP dropped, order canonicalized.
    ///
    /// `hermitian` is the caller's promise; it is cheap to assert later via
    /// [`SparseOperator::hermitian_defect`].
    pub fn from_triplets(
        sector: Arc<Sector>,
        mut triplets: Vec<(u64, u64, f64)>,
        hermitian: bool,
    ) -> Result<Self> {
        let dim = sector.dim();
        for &(r, c, _) in &triplets {
            if r >= dim || c >= dim {
                return Err(Error::Domain(format!(
                    "entry ({r}, {c}) outside dimension {dim}"
                )));
            }
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let n = dim as usize;
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut row = 0u64;
        let mut it = triplets.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(r2, c2, v2)) = it.peek() {
                if r2 == r && c2 == c {
                    v += v2;
                    it.next();
                } else {
                    break;
                }
            }
            if v.abs() <= tol::DROP {
                continue;
            }
            while row < r {
                row += 1;
                indptr[row as usize] = indices.len();
            }
            indices.push(c as u32);
            values.push(v);
        }
        while row < dim {
            row += 1;
            indptr[row as usize] = indices.len();
        }
        Ok(SparseOperator {
            sector,
            indptr,
            indices,
            values,
            hermitian,
            tag: None,
        })
    }

    pub fn zero(sector: Arc<Sector>) -> Self {
        let n = sector.dim() as usize;
        SparseOperator {
            sector,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
            hermitian: true,
            tag: None,
        }
    }

    pub fn identity(sector: Arc<Sector>) -> Self {
        Self::scaled_identity(sector, 1.0)
    }

    pub fn scaled_identity(sector: Arc<Sector>, c: f64) -> Self {
        let n = sector.dim() as usize;
        if c.abs() <= tol::DROP {
            return Self::zero(sector);
        }
        SparseOperator {
            sector,
            indptr: (0..=n).collect(),
            indices: (0..n as u32).collect(),
            values: vec![c; n],
            hermitian: true,
            tag: None,
        }
    }

    pub fn sector(&self) -> &Arc<Sector> {
        &self.sector
    }

    pub fn sector_key(&self) -> SectorKey {
        self.sector.key()
    }

    pub fn dim(&self) -> usize {
        self.sector.dim() as usize
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    pub(crate) fn set_hermitian(&mut self, h: bool) {
        self.hermitian = h;
    }

    /// Iterate entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        (0..self.dim()).flat_map(move |r| {
            self.row(r)
                .map(move |(c, v)| (r as u64, c as u64, v))
        })
    }

    /// (column, value) pairs of one row, ascending column.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        self.indices[lo..hi]
            .iter()
            .zip(&self.values[lo..hi])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        match self.indices[lo..hi].binary_search(&(c as u32)) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    fn check_same_sector(&self, other: &Self) -> Result<()> {
        if self.sector.key() != other.sector.key() {
            return Err(Error::Domain(format!(
                "sector mismatch: {} vs {}",
                self.sector.key(),
                other.sector.key()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_sector(other)?;
        let mut triplets: Vec<(u64, u64, f64)> = self.entries().collect();
        triplets.extend(other.entries());
        let mut out = Self::from_triplets(
            self.sector.clone(),
            triplets,
            self.hermitian && other.hermitian,
        )?;
        out.tag = None;
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        if c.abs() <= tol::DROP {
            return Self::zero(self.sector.clone());
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out.tag = None;
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Transpose; for real operators this is the adjoint.
    pub fn adjoint(&self) -> Self {
        let triplets: Vec<(u64, u64, f64)> =
            self.entries().map(|(r, c, v)| (c, r, v)).collect();
        let mut out =
            Self::from_triplets(self.sector.clone(), triplets, self.hermitian).unwrap();
        out.tag = self.tag;
        out
    }

    /// Sparse product self * other.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_sector(other)?;
        let n = self.dim();
        let mut scratch = vec![0.0f64; n];
        let mut touched: Vec<u32> = Vec::new();
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for r in 0..n {
            touched.clear();
            for (k, va) in self.row(r) {
                if va == 0.0 {
                    continue;
                }
                let lo = other.indptr[k];
                let hi = other.indptr[k + 1];
                for (c, vb) in other.indices[lo..hi].iter().zip(&other.values[lo..hi]) {
                    if scratch[*c as usize] == 0.0 {
                        touched.push(*c);
                    }
                    scratch[*c as usize] += va * vb;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                let v = scratch[c as usize];
                scratch[c as usize] = 0.0;
                if v.abs() > tol::DROP {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr[r + 1] = indices.len();
        }
        Ok(SparseOperator {
            sector: self.sector.clone(),
            indptr,
            indices,
            values,
            hermitian: false,
            tag: None,
        })
    }

    /// [self, other] = self*other - other*self. Not hermitian (it is
    /// anti-hermitian for hermitian inputs), so the flag is cleared.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn frobenius_norm(&self) -> f64 {
        // empty f64 sums are -0.0 and sqrt keeps the sign; a norm is unsigned
        self.values.iter().map(|v| v * v).sum::<f64>().abs().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|r| self.entry(r, r)).sum()
    }

    /// Frobenius inner product sum_rc A_rc * B_rc.
    pub fn frobenius_dot(&self, other: &Self) -> Result<f64> {
        self.check_same_sector(other)?;
        let mut acc = 0.0;
        for r in 0..self.dim() {
            let mut a = self.row(r).peekable();
            let mut b = other.row(r).peekable();
            while let (Some(&(ca, va)), Some(&(cb, vb))) = (a.peek(), b.peek()) {
                match ca.cmp(&cb) {
                    std::cmp::Ordering::Less => {
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        acc += va * vb;
                        a.next();
                        b.next();
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Largest |entry(r,c) - entry(c,r)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (r, c, v) in self.entries() {
            worst = worst.max((v - self.entry(c as usize, r as usize)).abs());
        }
        worst
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        let mut y = vec![0.0; x.len()];
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (c, v) in self.row(r) {
                acc += v * x[c];
            }
            *yr = acc;
        }
        y
    }

    pub fn matvec_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim());
        let mut y = vec![Complex64::ZERO; x.len()];
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for (c, v) in self.row(r) {
                acc += x[c] * v;
            }
            *yr = acc;
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (r, c, v) in self.entries() {
            m[(r as usize, c as usize)] = v;
        }
        m
    }

    /// Numerical rank: singular values above RANK_ABS_PER_DIM * dim.
    pub fn rank(&self) -> Result<u64> {
        let n = self.dim();
        if n > tol::DENSE_EIGEN_LIMIT {
            return Err(Error::Capacity(format!(
                "rank needs a dense SVD; dimension {n} exceeds {}",
                tol::DENSE_EIGEN_LIMIT
            )));
        }
        let sv = self.to_dense().singular_values();
        let cut = tol::RANK_ABS_PER_DIM * n as f64;
        Ok(sv.iter().filter(|s| **s > cut).count() as u64)
    }

    /// Entrywise comparison in Frobenius norm.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Write the coordinate-list export: one JSON header line, then one
    /// `row col value` line per entry in canonical order. Values use the
    /// shortest representation that round-trips f64 exactly.
    pub fn write_coo<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = CooHeader {
            sector: SectorHeader {
                n: self.sector.n(),
                z0: self.sector.z0(),
                zn: self.sector.zn(),
                dim: self.sector.dim(),
            },
            hermitian: self.hermitian,
            nnz: self.nnz() as u64,
            window: self.tag.map(|t| t.window),
            channel: self.tag.map(|t| t.channel),
            rank: self.tag.map(|t| t.rank),
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for (r, c, v) in self.entries() {
            writeln!(w, "{r} {c} {v}")?;
        }
        Ok(())
    }

    /// Read back an operator written by [`SparseOperator::write_coo`].
    pub fn read_coo<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty operator file".into()))?
            .map_err(|e| Error::InvalidArgument(format!("read failed: {e}")))?;
        let header: CooHeader = serde_json::from_str(&header_line)
            .map_err(|e| Error::InvalidArgument(format!("bad header: {e}")))?;
        let sector = Sector::new(header.sector.n, header.sector.z0, header.sector.zn)?;
        if sector.dim() != header.sector.dim {
            return Err(Error::InvalidArgument(format!(
                "header dimension {} does not match sector {}",
                header.sector.dim,
                sector.key()
            )));
        }
        let mut triplets = Vec::with_capacity(header.nnz as usize);
        for line in lines {
            let line = line.map_err(|e| Error::InvalidArgument(format!("read failed: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_ascii_whitespace();
            let (r, c, v) = (parts.next(), parts.next(), parts.next());
            let (r, c, v) = match (r, c, v) {
                (Some(r), Some(c), Some(v)) => (r, c, v),
                _ => {
                    return Err(Error::InvalidArgument(format!("bad entry line: {line:?}")))
                }
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad number {s:?}: {e}")))
            };
            let ri = r
                .parse::<u64>()
                .map_err(|e| Error::InvalidArgument(format!("bad row {r:?}: {e}")))?;
            let ci = c
                .parse::<u64>()
                .map_err(|e| Error::InvalidArgument(format!("bad col {c:?}: {e}")))?;
            triplets.push((ri, ci, parse(v)?));
        }
        if triplets.len() as u64 != header.nnz {
            return Err(Error::InvalidArgument(format!(
                "nnz mismatch: header {} vs {} entries",
                header.nnz,
                triplets.len()
            )));
        }
        let mut op = Self::from_triplets(sector, triplets, header.hermitian)?;
        if let (Some(window), Some(channel), Some(rank)) =
            (header.window, header.channel, header.rank)
        {
            op.tag = Some(ProjectorTag {
                window,
                channel,
                rank,
            });
        }
        Ok(op)
    }
}

#[derive(Serialize, Deserialize)]
struct SectorHeader {
    #[serde(rename = "N")]
    n: u32,
    z0: crate::basis::BoundaryLabel,
    #[serde(rename = "zN")]
    zn: crate::basis::BoundaryLabel,
    dim: u64,
}

#[derive(Serialize, Deserialize)]
struct CooHeader {
    sector: SectorHeader,
    hermitian: bool,
    nnz: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    window: Option<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    channel: Option<ChargeChannel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rank: Option<u64>,
}
