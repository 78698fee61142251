//! Baseline methods: closed-form least-squares regression over the
//! self-expression model, and plain k-means with seeded restarts.
//!
//! Both double as building blocks: the representation solver can warm-start
//! from the LSR solution, and spectral clustering runs k-means on its
//! embedding.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{ClusterLabels, DataMatrix};

/// Closed-form minimizer of `||X - XZ||_F^2 + lambda ||Z||_F^2`:
/// `Z = (X^T X + lambda I)^{-1} X^T X`.
///
/// The solution is symmetric because `X^T X` commutes with the inverse.
pub fn lsr_solve(x: &DataMatrix, lambda: f64) -> Result<DMatrix<f64>> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::invalid(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    let n = x.num_samples();
    let gram = x.values().transpose() * x.values();
    let mut system = gram.clone();
    for i in 0..n {
        system[(i, i)] += lambda;
    }
    let chol = Cholesky::new(system)
        .ok_or_else(|| Error::numerical("ridge system is not positive definite"))?;
    Ok(chol.solve(&gram))
}

/// Settings for [`kmeans`]. Restart seeds are derived from `seed`, so a fixed
/// seed gives identical labels regardless of scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KmeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KmeansConfig {
    fn default() -> Self {
        Self {
            k: 1,
            restarts: 20,
            max_iter: 100,
            seed: 0,
        }
    }
}

impl KmeansConfig {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    fn validate(&self, n_points: usize) -> Result<()> {
        if self.k == 0 || self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::invalid(
                "k, restarts, and max_iter must all be at least 1",
            ));
        }
        if self.k > n_points {
            return Err(Error::invalid(format!(
                "k = {} exceeds number of points {}",
                self.k, n_points
            )));
        }
        Ok(())
    }
}

/// Lloyd's algorithm with distance-weighted seeding and restarts.
///
/// `points` holds one point per column. Among restarts the assignment with
/// the lowest within-cluster sum of squares wins; ties go to the lowest
/// restart index. An emptied cluster is re-seeded to the point farthest from
/// its current centroid.
pub fn kmeans(points: &DMatrix<f64>, cfg: &KmeansConfig) -> Result<ClusterLabels> {
    let n = points.ncols();
    cfg.validate(n)?;
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("points contain non-finite entries"));
    }

    let runs: Vec<(f64, usize, Vec<usize>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let seed = cfg
                .seed
                .wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let (labels, wcss) = lloyd_run(points, cfg.k, cfg.max_iter, seed);
            (wcss, r, labels)
        })
        .collect();

    let best = runs
        .into_iter()
        .min_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap())
        .expect("at least one restart");
    ClusterLabels::new(best.2, cfg.k)
}

fn lloyd_run(points: &DMatrix<f64>, k: usize, max_iter: usize, seed: u64) -> (Vec<usize>, f64) {
    let n = points.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_seed(points, k, &mut rng);
    let mut labels = vec![0usize; n];

    for _ in 0..max_iter {
        let mut changed = false;
        for (j, label) in labels.iter_mut().enumerate() {
            let p = points.column(j);
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = (p - centroid).norm_squared();
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if *label != best {
                *label = best;
                changed = true;
            }
        }

        // Means, with empty clusters re-seeded to the farthest point.
        let mut counts = vec![0usize; k];
        let mut sums = vec![DVector::<f64>::zeros(points.nrows()); k];
        for j in 0..n {
            counts[labels[j]] += 1;
            sums[labels[j]] += points.column(j);
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = &sums[c] / counts[c] as f64;
            } else {
                let far = farthest_point(points, &centroids, &labels);
                centroids[c] = points.column(far).into_owned();
                labels[far] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let wcss = (0..n)
        .map(|j| (points.column(j) - &centroids[labels[j]]).norm_squared())
        .sum();
    (labels, wcss)
}

fn farthest_point(points: &DMatrix<f64>, centroids: &[DVector<f64>], labels: &[usize]) -> usize {
    let mut best = 0usize;
    let mut best_d = -1.0;
    for j in 0..points.ncols() {
        let d = (points.column(j) - &centroids[labels[j]]).norm_squared();
        if d > best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

/// Distance-weighted random seeding: first centroid uniform, each further one
/// drawn with probability proportional to squared distance from the chosen set.
fn plus_plus_seed(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<DVector<f64>> {
    let n = points.ncols();
    let mut centroids = Vec::with_capacity(k);
    let first = rng.random_range(0..n);
    centroids.push(points.column(first).into_owned());

    let mut dist2: Vec<f64> = (0..n)
        .map(|j| (points.column(j) - &centroids[0]).norm_squared())
        .collect();

    while centroids.len() < k {
        let total: f64 = dist2.iter().sum();
        let next = if total <= 0.0 {
            // All mass on already-chosen locations; fall back to uniform.
            rng.random_range(0..n)
        } else {
            let draw: f64 = rng.random_range(0.0..total);
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (j, &d) in dist2.iter().enumerate() {
                acc += d;
                if draw < acc {
                    pick = j;
                    break;
                }
            }
            pick
        };
        let c = points.column(next).into_owned();
        for (j, slot) in dist2.iter_mut().enumerate() {
            let d = (points.column(j) - &c).norm_squared();
            if d < *slot {
                *slot = d;
            }
        }
        centroids.push(c);
    }
    centroids
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn lsr_orthonormal_columns() {
        // X^T X = I implies Z = I / (1 + lambda).
        let x = DataMatrix::new(dmatrix![1.0, 0.0; 0.0, 1.0; 0.0, 0.0]).unwrap();
        let z = lsr_solve(&x, 0.5).unwrap();
        let expected = DMatrix::identity(2, 2) / 1.5;
        assert!((z - expected).norm() < 1e-12);
    }

    #[test]
    fn lsr_duplicate_one_dimensional_samples() {
        let x = DataMatrix::new(dmatrix![1.0, 1.0]).unwrap();
        let z = lsr_solve(&x, 1.0).unwrap();
        let expected = DMatrix::from_element(2, 2, 1.0 / 3.0);
        assert!((z - expected).norm() < 1e-12);
    }

    #[test]
    fn lsr_large_lambda_shrinks() {
        let x = DataMatrix::new(dmatrix![0.3, -1.2, 0.8; 1.1, 0.4, -0.6]).unwrap();
        let z = lsr_solve(&x, 1e9).unwrap();
        assert!(z.norm() < 1e-6);
    }

    #[test]
    fn lsr_solution_is_symmetric_and_satisfies_system() {
        let x = DataMatrix::new(
            dmatrix![0.3, -1.2, 0.8, 0.1; 1.1, 0.4, -0.6, 0.9; 0.2, 0.0, 0.5, -0.3],
        )
        .unwrap();
        let lambda = 0.25;
        let z = lsr_solve(&x, lambda).unwrap();
        assert!((&z - z.transpose()).norm() < 1e-10);
        let gram = x.values().transpose() * x.values();
        let mut system = gram.clone();
        for i in 0..4 {
            system[(i, i)] += lambda;
        }
        assert!((system * &z - gram).norm() < 1e-8);
    }

    #[test]
    fn lsr_rejects_bad_lambda() {
        let x = DataMatrix::new(dmatrix![1.0, 0.0; 0.0, 1.0]).unwrap();
        assert!(lsr_solve(&x, 0.0).is_err());
        assert!(lsr_solve(&x, -1.0).is_err());
    }

    #[test]
    fn kmeans_separates_two_pairs() {
        let points = dmatrix![
            0.0, 0.1, 10.0, 10.1;
            0.0, 0.1, 10.0, 10.1
        ];
        let labels = kmeans(
            &points,
            &KmeansConfig {
                k: 2,
                seed: 7,
                ..KmeansConfig::default()
            },
        )
        .unwrap();
        let l = labels.as_slice();
        assert_eq!(l[0], l[1]);
        assert_eq!(l[2], l[3]);
        assert_ne!(l[0], l[2]);
    }

    #[test]
    fn kmeans_k_equals_n_gives_zero_wcss() {
        let points = dmatrix![
            0.0, 1.0, 2.0, 5.0;
            0.0, -1.0, 3.0, 2.0
        ];
        let cfg = KmeansConfig {
            k: 4,
            seed: 3,
            ..KmeansConfig::default()
        };
        let labels = kmeans(&points, &cfg).unwrap();
        let mut seen = [false; 4];
        for &l in labels.as_slice() {
            assert!(!seen[l], "cluster {l} assigned twice");
            seen[l] = true;
        }
    }

    #[test]
    fn kmeans_is_deterministic() {
        let points = DMatrix::from_fn(3, 20, |i, j| ((i * 31 + j * 17) % 13) as f64 * 0.37);
        let cfg = KmeansConfig {
            k: 4,
            seed: 42,
            ..KmeansConfig::default()
        };
        let a = kmeans(&points, &cfg).unwrap();
        let b = kmeans(&points, &cfg).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
    }

    #[test]
    fn kmeans_restarts_never_hurt() {
        let points = DMatrix::from_fn(2, 30, |i, j| ((i * 7 + j * 23) % 11) as f64 - 5.0);
        let one = KmeansConfig {
            k: 5,
            restarts: 1,
            seed: 9,
            ..KmeansConfig::default()
        };
        let many = KmeansConfig { restarts: 8, ..one };
        let wcss = |cfg: &KmeansConfig| {
            let labels = kmeans(&points, cfg).unwrap();
            wcss_of(&points, labels.as_slice(), cfg.k)
        };
        assert!(wcss(&many) <= wcss(&one) + 1e-12);
    }

    #[test]
    fn kmeans_rejects_k_above_n() {
        let points = dmatrix![0.0, 1.0; 0.0, 1.0];
        let cfg = KmeansConfig {
            k: 3,
            ..KmeansConfig::default()
        };
        assert!(kmeans(&points, &cfg).is_err());
    }

    fn wcss_of(points: &DMatrix<f64>, labels: &[usize], k: usize) -> f64 {
        let mut counts = vec![0usize; k];
        let mut sums = vec![DVector::<f64>::zeros(points.nrows()); k];
        for (j, &l) in labels.iter().enumerate() {
            counts[l] += 1;
            sums[l] += points.column(j);
        }
        let centroids: Vec<_> = (0..k)
            .map(|c| {
                if counts[c] > 0 {
                    &sums[c] / counts[c] as f64
                } else {
                    DVector::zeros(points.nrows())
                }
            })
            .collect();
        labels
            .iter()
            .enumerate()
            .map(|(j, &l)| (points.column(j) - &centroids[l]).norm_squared())
            .sum()
    }
}
