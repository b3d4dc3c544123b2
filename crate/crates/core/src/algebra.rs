//! Crate-private spectral helpers shared by the commutant and
//! channel-projector routes: eigenvalue clustering of a generic algebra
//! element, basis conjugation, and a small union-find.

use crate::error::{Error, Result};
use crate::rng::uniform01;
use crate::sparse::SparseOperator;
use nalgebra::DMatrix;
use std::ops::Range;

/// Eigendecomposition sorted ascending, with near-degenerate eigenvalues
/// grouped into clusters. Cluster membership is what downstream code trusts;
/// the basis within a cluster is whatever the solver returned.
pub(crate) struct ClusteredEigen {
    pub vecs: DMatrix<f64>,
    pub clusters: Vec<Range<usize>>,
    pub cluster_of: Vec<usize>,
}

pub(crate) fn clustered_eigen(m: &DMatrix<f64>, rel_gap: f64) -> ClusteredEigen {
    let se = m.clone().symmetric_eigen();
    let d = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(k));
    }
    let scale = vals
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    let gap = rel_gap * scale;
    let mut clusters = Vec::new();
    let mut start = 0usize;
    for k in 1..=d {
        if k == d || vals[k] - vals[k - 1] > gap {
            clusters.push(start..k);
            start = k;
        }
    }
    let mut cluster_of = vec![0usize; d];
    for (ci, r) in clusters.iter().enumerate() {
        for k in r.clone() {
            cluster_of[k] = ci;
        }
    }
    ClusteredEigen {
        vecs,
        clusters,
        cluster_of,
    }
}

/// Generic element of the span of the generators: weights in [1, 2] keyed by
/// (seed, attempt), so retries after an accidental spectral collision are
/// deterministic.
pub(crate) fn weighted_sum(
    generators: &[SparseOperator],
    seed: u64,
    attempt: u64,
) -> Result<SparseOperator> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
    let mut acc = SparseOperator::zero(first.sector().clone());
    for (i, g) in generators.iter().enumerate() {
        let w = 1.0 + uniform01(seed, attempt, i as u64);
        acc = acc.add(&g.scale(w))?;
    }
    Ok(acc)
}

/// V^T O V for sparse O and dense orthogonal V.
pub(crate) fn conjugate(op: &SparseOperator, v: &DMatrix<f64>) -> DMatrix<f64> {
    let d = op.dim();
    let mut ov = DMatrix::zeros(d, d);
    for (r, c, val) in op.entries() {
        for col in 0..d {
            ov[(r as usize, col)] += val * v[(c as usize, col)];
        }
    }
    v.transpose() * ov
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeping component labels deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_groups_degenerate_values() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0,
            1.0 + 1e-13,
            2.0,
            3.0,
            3.0,
        ]));
        let ce = clustered_eigen(&m, 1e-9);
        assert_eq!(ce.clusters.len(), 3);
        assert_eq!(ce.clusters[0], 0..2);
        assert_eq!(ce.clusters[1], 2..3);
        assert_eq!(ce.clusters[2], 3..5);
        assert_eq!(ce.cluster_of, vec![0, 0, 1, 2, 2]);
    }

    #[test]
    fn union_find_components() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 3);
        uf.union(4, 3);
        uf.union(1, 2);
        let roots: Vec<usize> = (0..5).map(|k| uf.find(k)).collect();
        assert_eq!(roots, vec![0, 1, 1, 0, 0]);
    }
}
