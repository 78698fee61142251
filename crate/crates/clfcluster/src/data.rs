//! Synthetic union-of-subspaces generation, column normalization, PCA energy
//! truncation, and the CSV matrix/label formats.
//!
//! Matrix CSV: one line per matrix row, comma-separated decimal literals
//! printed with 17 significant digits (lossless for doubles), no header, LF
//! line endings. Label files hold one integer per line.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::types::{ClusterLabels, DataMatrix};

/// Noise applied to generated samples before the final column normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    None,
    /// Additive i.i.d. Gaussian noise on every entry.
    Gaussian {
        sigma: f64,
    },
    /// Exactly `floor(fraction * d * n)` entries, drawn without replacement,
    /// shifted by `±magnitude` with random sign.
    EntrySparse {
        fraction: f64,
        magnitude: f64,
    },
    /// Exactly `floor(fraction * n)` columns, drawn without replacement, each
    /// shifted by a random direction scaled to `magnitude` times the column
    /// norm.
    SampleSpecific {
        fraction: f64,
        magnitude: f64,
    },
}

impl NoiseSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::None => Ok(()),
            NoiseSpec::Gaussian { sigma } => {
                if sigma < 0.0 || !sigma.is_finite() {
                    Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")))
                } else {
                    Ok(())
                }
            }
            NoiseSpec::EntrySparse {
                fraction,
                magnitude,
            }
            | NoiseSpec::SampleSpecific {
                fraction,
                magnitude,
            } => {
                if !(0.0..=1.0).contains(&fraction) {
                    return Err(Error::invalid(format!(
                        "fraction must lie in [0, 1], got {fraction}"
                    )));
                }
                if magnitude < 0.0 || !magnitude.is_finite() {
                    return Err(Error::invalid(format!(
                        "magnitude must be >= 0, got {magnitude}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Parameters of the synthetic union-of-subspaces generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceSpec {
    pub ambient_dim: usize,
    pub subspace_dim: usize,
    pub num_subspaces: usize,
    pub points_per_subspace: usize,
    pub noise: NoiseSpec,
    pub seed: u64,
}

impl SubspaceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.subspace_dim == 0 || self.subspace_dim >= self.ambient_dim {
            return Err(Error::invalid(format!(
                "need 1 <= subspace_dim < ambient_dim, got r = {}, d = {}",
                self.subspace_dim, self.ambient_dim
            )));
        }
        if self.num_subspaces == 0 {
            return Err(Error::invalid("num_subspaces must be at least 1"));
        }
        if self.points_per_subspace < self.subspace_dim {
            return Err(Error::invalid(format!(
                "points_per_subspace = {} undersamples subspaces of dimension {}",
                self.points_per_subspace, self.subspace_dim
            )));
        }
        self.noise.validate()
    }
}

/// Draw samples from a union of random subspaces, apply the noise model, and
/// unit-normalize the columns. All randomness flows from `spec.seed`.
pub fn generate(spec: &SubspaceSpec) -> Result<(DataMatrix, ClusterLabels)> {
    let (raw, _, labels) = generate_raw(spec)?;
    let x = normalize_columns(&DataMatrix::new(raw)?)?;
    Ok((x, labels))
}

/// Generator internals: also returns the orthonormal basis of each subspace
/// and skips the final normalization, so tests can check subspace membership
/// and noise placement directly.
pub(crate) fn generate_raw(
    spec: &SubspaceSpec,
) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>, ClusterLabels)> {
    spec.validate()?;
    let d = spec.ambient_dim;
    let r = spec.subspace_dim;
    let k = spec.num_subspaces;
    let per = spec.points_per_subspace;
    let n = k * per;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut x = DMatrix::zeros(d, n);
    let mut bases = Vec::with_capacity(k);
    let mut labels = Vec::with_capacity(n);
    for s in 0..k {
        // Orthonormal basis from the QR of a Gaussian matrix.
        let gauss = DMatrix::from_fn(d, r, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = gauss.qr();
        let basis = qr.q().columns(0, r).into_owned();
        let coeffs = DMatrix::from_fn(r, per, |_, _| rng.sample::<f64, _>(StandardNormal));
        let block = &basis * coeffs;
        x.view_mut((0, s * per), (d, per)).copy_from(&block);
        bases.push(basis);
        labels.extend(std::iter::repeat_n(s, per));
    }

    apply_noise(&mut x, &spec.noise, &mut rng);
    let labels = ClusterLabels::new(labels, k)?;
    Ok((x, bases, labels))
}

/// Corrupt `x` in place according to the noise model.
pub(crate) fn apply_noise(x: &mut DMatrix<f64>, noise: &NoiseSpec, rng: &mut ChaCha8Rng) {
    match *noise {
        NoiseSpec::None => {}
        NoiseSpec::Gaussian { sigma } => {
            for v in x.iter_mut() {
                *v += sigma * rng.sample::<f64, _>(StandardNormal);
            }
        }
        NoiseSpec::EntrySparse {
            fraction,
            magnitude,
        } => {
            let d = x.nrows();
            let total = d * x.ncols();
            let count = (fraction * total as f64).floor() as usize;
            for idx in sample_without_replacement(total, count, rng) {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                x[(idx % d, idx / d)] += sign * magnitude;
            }
        }
        NoiseSpec::SampleSpecific {
            fraction,
            magnitude,
        } => {
            let n = x.ncols();
            let count = (fraction * n as f64).floor() as usize;
            let d = x.nrows();
            for col in sample_without_replacement(n, count, rng) {
                let mut dir = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
                let norm = dir.norm();
                if norm > 0.0 {
                    dir /= norm;
                }
                let scale = magnitude * x.column(col).norm();
                for i in 0..d {
                    x[(i, col)] += scale * dir[i];
                }
            }
        }
    }
}

/// First `count` entries of a seeded Fisher-Yates shuffle of `0..total`.
fn sample_without_replacement(total: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..total).collect();
    let count = count.min(total);
    for i in 0..count {
        let j = rng.random_range(i..total);
        indices.swap(i, j);
    }
    indices.truncate(count);
    indices
}

/// Scale every column to unit Euclidean norm.
pub fn normalize_columns(x: &DataMatrix) -> Result<DataMatrix> {
    let mut values = x.values().clone();
    for (j, mut col) in values.column_iter_mut().enumerate() {
        let norm = col.norm();
        if norm == 0.0 {
            return Err(Error::invalid(format!("column {j} has zero norm")));
        }
        col /= norm;
    }
    Ok(DataMatrix::new(values)?.mark_column_normalized())
}

/// Center columns and project onto the top principal directions that keep at
/// least `energy` of the squared singular-value mass. Returns the `m x n`
/// score matrix.
///
/// Works from the symmetric eigendecomposition of the smaller of the
/// covariance (`d x d`) and Gram (`n x n`) matrices; their eigenvalues are
/// the squared singular values the threshold is defined over.
pub fn pca_reduce(x: &DataMatrix, energy: f64) -> Result<DataMatrix> {
    if !(energy > 0.0 && energy <= 1.0) {
        return Err(Error::invalid(format!(
            "energy must lie in (0, 1], got {energy}"
        )));
    }
    let n = x.num_samples();
    if n < 2 {
        return Err(Error::invalid("pca requires at least 2 samples"));
    }
    let d = x.dim();
    let mean = x.values().column_mean();
    let mut centered = x.values().clone();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }

    let use_covariance = d <= n;
    let small = if use_covariance {
        &centered * centered.transpose()
    } else {
        centered.transpose() * &centered
    };
    let side = small.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(small, f64::EPSILON, 30 * side.max(10))
        .ok_or_else(|| {
            Error::numerical(format!(
                "eigensolver failed to converge on the {side}x{side} scatter matrix"
            ))
        })?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();

    let total: f64 = spectrum.iter().sum();
    let mut m = 1;
    if total > 0.0 {
        let mut acc = 0.0;
        m = spectrum.len();
        for (i, lambda) in spectrum.iter().enumerate() {
            acc += lambda;
            if acc >= energy * total {
                m = i + 1;
                break;
            }
        }
    }

    let mut scores = DMatrix::zeros(m, n);
    if use_covariance {
        // Rows are u_i^T (X - mean) for the top covariance eigenvectors.
        for (row, &i) in order[..m].iter().enumerate() {
            scores.set_row(row, &(eig.eigenvectors.column(i).transpose() * &centered));
        }
    } else {
        // Rows are sigma_i v_i^T from the Gram eigenvectors.
        for (row, &i) in order[..m].iter().enumerate() {
            let sigma = spectrum[row].sqrt();
            scores.set_row(row, &(eig.eigenvectors.column(i).transpose() * sigma));
        }
    }
    DataMatrix::new(scores)
}

/// Read a matrix from the CSV format written by [`save_matrix`].
pub fn load_matrix(path: impl AsRef<Path>) -> Result<DataMatrix> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_matrix(&text)
}

pub(crate) fn parse_matrix(text: &str) -> Result<DataMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_number = lineno + 1;
        if line.trim().is_empty() {
            return Err(Error::Parse {
                line: line_number,
                message: "empty line inside matrix".into(),
            });
        }
        let mut row = Vec::new();
        for tok in line.split(',') {
            let v: f64 = tok.trim().parse().map_err(|_| Error::Parse {
                line: line_number,
                message: format!("non-numeric token {tok:?}"),
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: line_number,
                    message: format!(
                        "ragged row: expected {} columns, found {}",
                        first.len(),
                        row.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "empty file".into(),
        });
    }
    let d = rows.len();
    let n = rows[0].len();
    let m = DMatrix::from_fn(d, n, |i, j| rows[i][j]);
    DataMatrix::new(m)
}

/// Write a matrix in CSV, 17 significant digits per entry.
pub fn save_matrix(path: impl AsRef<Path>, m: &DMatrix<f64>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.16e}", m[(i, j)]);
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read labels, one integer per line.
pub fn load_labels(path: impl AsRef<Path>) -> Result<ClusterLabels> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let v: usize = line.trim().parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("non-integer label {line:?}"),
        })?;
        labels.push(v);
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "empty label file".into(),
        });
    }
    ClusterLabels::from_assignments(labels)
}

/// Write labels, one integer per line.
pub fn save_labels(path: impl AsRef<Path>, labels: &ClusterLabels) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for &l in labels.as_slice() {
        let _ = writeln!(out, "{l}");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}
