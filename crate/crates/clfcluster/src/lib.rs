//! Robust subspace clustering with a Cauchy loss on the self-expression
//! residual.
//!
//! The pipeline: solve `min_Z log(1 + ||X - XZ||_F^2 / c^2) + lambda ||Z||_F^2`
//! by iteratively re-weighted residuals, symmetrize `|Z*|` into an affinity
//! matrix, and partition it with normalized-cuts spectral clustering. The
//! bounded influence of the Cauchy loss keeps single heavily-corrupted
//! samples from dominating the fit, so the affinity stays usable under noise
//! that breaks plain least squares.
//!
//! Modules:
//! - [`solver`] — the re-weighted-residuals solver and its vector form.
//! - [`baselines`] — closed-form least-squares regression and k-means.
//! - [`spectral`] — affinity construction and normalized cuts.
//! - [`metrics`] — accuracy, normalized mutual information, contrast index.
//! - [`data`] — synthetic union-of-subspaces generator, PCA, CSV formats.
//! - [`experiment`] — the reproducible experiment runner behind the CLI.

pub mod baselines;
pub mod data;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod solver;
pub mod spectral;
pub mod types;

pub use error::{Error, Result};
pub use types::{ClusterLabels, DataMatrix};
