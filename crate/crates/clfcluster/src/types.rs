//! Shared domain types: the column-major sample matrix and cluster labelings.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance used to auto-detect unit-norm columns on construction.
const UNIT_NORM_TOL: f64 = 1e-10;

/// A data matrix holding one sample per column: `d` features by `n` samples.
///
/// All entries are finite. The `column_normalized` flag records whether every
/// column has unit Euclidean norm (within `1e-10`); it is detected on
/// construction and set by [`crate::data::normalize_columns`].
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
    column_normalized: bool,
}

impl DataMatrix {
    /// Wrap a `d x n` matrix, validating that it is non-empty and finite.
    ///
    /// A single-column matrix is accepted: the representation solver reduces
    /// to a scalar fixed point in that case and tests rely on it.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::invalid(format!(
                "data matrix must be non-empty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("data matrix contains non-finite entries"));
        }
        let column_normalized = values
            .column_iter()
            .all(|c| (c.norm() - 1.0).abs() <= UNIT_NORM_TOL);
        Ok(Self {
            values,
            column_normalized,
        })
    }

    /// Build from a column-major slice.
    pub fn from_column_major(d: usize, n: usize, values: &[f64]) -> Result<Self> {
        if values.len() != d * n {
            return Err(Error::shape(format!(
                "expected {} values for a {}x{} matrix, got {}",
                d * n,
                d,
                n,
                values.len()
            )));
        }
        Self::new(DMatrix::from_column_slice(d, n, values))
    }

    /// Feature dimension `d`.
    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Number of samples `n`.
    pub fn num_samples(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<f64> {
        self.values
    }

    pub fn is_column_normalized(&self) -> bool {
        self.column_normalized
    }

    pub(crate) fn mark_column_normalized(mut self) -> Self {
        self.column_normalized = true;
        self
    }
}

/// Integer cluster labels in `[0, k)`, one per sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterLabels {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("cluster count k must be at least 1"));
        }
        if labels.is_empty() {
            return Err(Error::invalid("label vector must be non-empty"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::invalid(format!(
                "label {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Build labels with `k` inferred as `max(label) + 1`.
    pub fn from_assignments(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map(|&m| m + 1).unwrap_or(0).max(1);
        Self::new(labels, k)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.labels.iter()
    }
}
