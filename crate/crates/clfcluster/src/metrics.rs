//! Clustering evaluation: accuracy under the optimal label mapping,
//! normalized mutual information, and the similarity-matrix contrast index.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::SimilarityMatrix;
use crate::types::ClusterLabels;

/// Joint counts between a ground-truth and a predicted labeling.
///
/// `counts[p][q]` is the number of points in ground-truth cluster `p` and
/// predicted cluster `q`.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub total: usize,
}

impl ContingencyTable {
    pub fn build(gt: &ClusterLabels, pred: &ClusterLabels) -> Result<Self> {
        if gt.len() != pred.len() {
            return Err(Error::shape(format!(
                "label vectors differ in length: {} vs {}",
                gt.len(),
                pred.len()
            )));
        }
        let k = gt.k();
        let kp = pred.k();
        let mut counts = vec![vec![0usize; kp]; k];
        for (&g, &p) in gt.iter().zip(pred.iter()) {
            counts[g][p] += 1;
        }
        let row_sums: Vec<usize> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<usize> = (0..kp).map(|q| counts.iter().map(|r| r[q]).sum()).collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            total: gt.len(),
        })
    }
}

/// Minimum-cost assignment on a square cost matrix (Kuhn-Munkres).
///
/// Returns `perm` with `perm[row] = column`. Shortest-augmenting-path
/// formulation, optimal for any finite costs.
pub fn hungarian(cost: &DMatrix<f64>) -> Result<Vec<usize>> {
    let n = cost.nrows();
    if cost.ncols() != n {
        return Err(Error::shape(format!(
            "cost matrix must be square, got {}x{}",
            n,
            cost.ncols()
        )));
    }
    if cost.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("cost matrix contains non-finite entries"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // Potentials u, v and column matching p, 1-indexed with a virtual row 0.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    Ok(perm)
}

/// Clustering accuracy: the fraction of points whose predicted label matches
/// the ground truth after the best one-to-one relabeling.
///
/// The contingency table is padded square when the two labelings use a
/// different number of clusters, then matched by [`hungarian`] on negated
/// counts.
pub fn accuracy(gt: &ClusterLabels, pred: &ClusterLabels) -> Result<f64> {
    let table = ContingencyTable::build(gt, pred)?;
    let k = table.counts.len();
    let kp = table.counts[0].len();
    let m = k.max(kp);
    let max_count = table
        .counts
        .iter()
        .flat_map(|r| r.iter())
        .copied()
        .max()
        .unwrap_or(0) as f64;
    let cost = DMatrix::from_fn(m, m, |p, q| {
        if p < k && q < kp {
            max_count - table.counts[p][q] as f64
        } else {
            max_count
        }
    });
    let perm = hungarian(&cost)?;
    let matched: usize = (0..k)
        .map(|p| {
            let q = perm[p];
            if q < kp {
                table.counts[p][q]
            } else {
                0
            }
        })
        .sum();
    Ok(matched as f64 / table.total as f64)
}

/// Normalized mutual information `2 MI / (H_gt + H_pred)` with natural
/// logarithms; `0 log 0` terms contribute zero.
///
/// When both labelings are a single cluster both entropies vanish and the
/// score is 1 by convention.
pub fn nmi(gt: &ClusterLabels, pred: &ClusterLabels) -> Result<f64> {
    let table = ContingencyTable::build(gt, pred)?;
    let n = table.total as f64;

    let mut mi = 0.0;
    for (p, row) in table.counts.iter().enumerate() {
        for (q, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let joint = c as f64 / n;
            let marg = (table.row_sums[p] as f64 / n) * (table.col_sums[q] as f64 / n);
            mi += joint * (joint / marg).ln();
        }
    }
    let h_gt = entropy(&table.row_sums, n);
    let h_pred = entropy(&table.col_sums, n);
    if h_gt == 0.0 && h_pred == 0.0 {
        return Ok(1.0);
    }
    // MI is non-negative up to rounding; clamp into [0, 1].
    Ok((2.0 * mi / (h_gt + h_pred)).clamp(0.0, 1.0))
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Contrast index of a similarity matrix against a ground-truth partition:
/// the fraction of total absolute affinity lying inside same-cluster blocks,
/// `S_D / (S_D + S_ND)`. A zero matrix scores 0 by convention.
pub fn contrast_index(w: &SimilarityMatrix, gt: &ClusterLabels) -> Result<f64> {
    let n = w.n();
    if gt.len() != n {
        return Err(Error::shape(format!(
            "similarity is {}x{} but ground truth has {} labels",
            n,
            n,
            gt.len()
        )));
    }
    let labels = gt.as_slice();
    let mut diag = 0.0;
    let mut total = 0.0;
    for j in 0..n {
        for i in 0..n {
            let v = w.values()[(i, j)].abs();
            total += v;
            if labels[i] == labels[j] {
                diag += v;
            }
        }
    }
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(diag / total)
}
