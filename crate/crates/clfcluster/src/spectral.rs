//! Similarity construction and normalized-cuts spectral clustering.
//!
//! The affinity is the symmetrized magnitude of the representation matrix,
//! `W = (|Z| + |Z^T|)/2`. Clustering follows the symmetric-normalization
//! relaxation: eigenvectors of `L = I - D^{-1/2} W D^{-1/2}` for the k
//! smallest eigenvalues, row-normalized, then k-means on the embedding rows.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::baselines::{kmeans, KmeansConfig};
use crate::error::{Error, Result};
use crate::types::ClusterLabels;

/// Guard added to every degree so isolated vertices keep a finite `D^{-1/2}`.
const DEGREE_GUARD: f64 = 1e-12;

/// Symmetric nonnegative affinity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    w: DMatrix<f64>,
}

impl SimilarityMatrix {
    /// Validate symmetry (within `1e-12`), nonnegativity, and finiteness.
    pub fn new(w: DMatrix<f64>) -> Result<Self> {
        let n = w.nrows();
        if w.ncols() != n {
            return Err(Error::shape(format!(
                "similarity matrix must be square, got {}x{}",
                n,
                w.ncols()
            )));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("similarity matrix has non-finite entries"));
        }
        if w.iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("similarity matrix has negative entries"));
        }
        for j in 0..n {
            for i in (j + 1)..n {
                if (w[(i, j)] - w[(j, i)]).abs() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "similarity matrix is asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { w })
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn into_values(self) -> DMatrix<f64> {
        self.w
    }
}

/// Symmetrized magnitude affinity `W = (|Z| + |Z^T|)/2`.
pub fn build_similarity(z: &DMatrix<f64>) -> Result<SimilarityMatrix> {
    let n = z.nrows();
    if z.ncols() != n {
        return Err(Error::shape(format!(
            "representation matrix must be square, got {}x{}",
            n,
            z.ncols()
        )));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(
            "representation matrix has non-finite entries",
        ));
    }
    let w = DMatrix::from_fn(n, n, |i, j| (z[(i, j)].abs() + z[(j, i)].abs()) / 2.0);
    Ok(SimilarityMatrix { w })
}

/// Symmetric normalized Laplacian `L = I - D^{-1/2} W D^{-1/2}`.
///
/// Degrees carry a `1e-12` guard; eigenvalues lie in `[0, 2]`.
pub fn normalized_laplacian(w: &SimilarityMatrix) -> DMatrix<f64> {
    let n = w.n();
    let inv_sqrt_deg: Vec<f64> = (0..n)
        .map(|i| {
            let d: f64 = w.w.row(i).iter().sum::<f64>() + DEGREE_GUARD;
            1.0 / d.sqrt()
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| {
        let normalized = w.w[(i, j)] * inv_sqrt_deg[i] * inv_sqrt_deg[j];
        if i == j {
            1.0 - normalized
        } else {
            -normalized
        }
    })
}

/// Normalized-cuts spectral clustering into `k` groups.
///
/// The embedding takes the eigenvectors of the k smallest Laplacian
/// eigenvalues (stable sort by eigenvalue, then index), row-normalizes them
/// (zero rows stay zero), and hands the rows to seeded k-means.
pub fn normalized_cuts(w: &SimilarityMatrix, k: usize, seed: u64) -> Result<ClusterLabels> {
    let n = w.n();
    if k == 0 {
        return Err(Error::invalid("cluster count k must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "cluster count k = {k} exceeds number of points {n}"
        )));
    }
    if k == 1 {
        return ClusterLabels::new(vec![0; n], 1);
    }

    let lap = normalized_laplacian(w);
    // Iteration cap in the spirit of the classic tridiagonal-QL limit.
    let max_niter = 30 * n.max(10);
    let eig = SymmetricEigen::try_new(lap, f64::EPSILON, max_niter).ok_or_else(|| {
        Error::numerical(format!(
            "eigensolver failed to converge on the {n}x{n} normalized Laplacian \
             within {max_niter} iterations"
        ))
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    // n x k embedding, one eigenvector per column; rows are the points.
    let mut embedding = DMatrix::zeros(n, k);
    for (col, &e) in order[..k].iter().enumerate() {
        embedding.set_column(col, &eig.eigenvectors.column(e));
    }
    for i in 0..n {
        let norm = embedding.row(i).norm();
        if norm > 0.0 {
            for j in 0..k {
                embedding[(i, j)] /= norm;
            }
        }
    }

    // k-means expects points as columns.
    let points = embedding.transpose();
    let cfg = KmeansConfig {
        k,
        restarts: 20,
        max_iter: 100,
        seed,
    };
    kmeans(&points, &cfg)
}
