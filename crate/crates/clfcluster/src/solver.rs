//! Representation solver: minimize a Cauchy loss on the self-expression
//! residual plus a Frobenius penalty,
//!
//! ```text
//!   J(Z) = log(1 + ||X - XZ||_F^2 / c^2) + lambda * ||Z||_F^2,
//! ```
//!
//! via iteratively re-weighted residuals. Each sweep refreshes the scalar
//! weight `Q = 1 / (c^2 + ||X - XZ||_F^2)` and then solves the ridge system
//! `(Q X^T X + lambda I) Z = Q X^T X`. The right-hand side is the same for
//! every column, so one symmetric positive-definite factorization per sweep
//! serves all `n` solves.
//!
//! The update uses `lambda I` in the system matrix, which is what the
//! stationarity condition of `J` yields after the common factor 2 cancels.
//! A formulation with `2 lambda I` is reachable by passing `2 * lambda`.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::baselines::lsr_solve;
use crate::error::{Error, Result};
use crate::types::DataMatrix;

/// Initial representation for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitStrategy {
    /// Start from `Z = 0`; the first sweep is a ridge regression with weight
    /// `Q = 1 / (c^2 + ||X||_F^2)`.
    #[default]
    Zero,
    /// Warm-start from the closed-form least-squares-regression solution.
    Lsr,
}

/// Parameters of the Cauchy-loss representation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Regularization weight, must be positive.
    pub lambda: f64,
    /// Cauchy scale constant, must be positive.
    pub c: f64,
    /// Convergence threshold on the relative Frobenius change of `Z`.
    pub tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
    pub init: InitStrategy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            c: 0.5,
            tol: 1e-6,
            max_iter: 200,
            init: InitStrategy::Zero,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("lambda", self.lambda), ("c", self.c), ("tol", self.tol)] {
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::invalid(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// One consistent snapshot of the iteration: the current `Z`, its residual
/// `R = X - XZ`, the weight `Q = 1 / (c^2 + ||R||_F^2)`, the objective value,
/// and the sweep counter.
#[derive(Debug, Clone)]
pub struct IrrState {
    z: DMatrix<f64>,
    residual: DMatrix<f64>,
    q: f64,
    objective: f64,
    iter: usize,
}

impl IrrState {
    /// Build the consistent snapshot for a given `Z`.
    pub fn from_z(x: &DataMatrix, z: DMatrix<f64>, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let n = x.num_samples();
        if z.nrows() != n || z.ncols() != n {
            return Err(Error::shape(format!(
                "representation must be {}x{}, got {}x{}",
                n,
                n,
                z.nrows(),
                z.ncols()
            )));
        }
        let residual = x.values() - x.values() * &z;
        let q = 1.0 / (cfg.c * cfg.c + residual.norm_squared());
        let objective = objective(x, &z, cfg)?;
        Ok(Self {
            z,
            residual,
            q,
            objective,
            iter: 0,
        })
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn residual(&self) -> &DMatrix<f64> {
        &self.residual
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn iter(&self) -> usize {
        self.iter
    }
}

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// The representation matrix at the last sweep.
    pub z_star: DMatrix<f64>,
    /// Objective values, starting with the initial `Z` and then one entry per
    /// sweep. Non-increasing.
    pub objective_history: Vec<f64>,
    /// Number of sweeps performed.
    pub iterations: usize,
    /// Whether the relative-change test fired before the iteration cap.
    pub converged: bool,
    /// Frobenius norm of the objective gradient at `z_star`.
    pub stationarity_residual: f64,
}

/// Cauchy loss `rho(x) = log(1 + (x/c)^2)`.
///
/// Non-negative, zero only at `x = 0`.
pub fn cauchy_rho(x: f64, c: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!(
            "rho argument must be finite, got {x}"
        )));
    }
    check_scale(c)?;
    let t = x / c;
    Ok((t * t).ln_1p())
}

/// Influence function `psi(x) = 2x / (x^2 + c^2)` of the Cauchy loss.
///
/// Bounded: `|psi(x)| <= 1/c`, with the extremes attained at `x = ±c`.
pub fn cauchy_psi(x: f64, c: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!(
            "psi argument must be finite, got {x}"
        )));
    }
    check_scale(c)?;
    Ok(2.0 * x / (x * x + c * c))
}

fn check_scale(c: f64) -> Result<()> {
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::invalid(format!(
            "scale constant c must be positive and finite, got {c}"
        )));
    }
    Ok(())
}

/// Objective `J(Z) = log(1 + ||X - XZ||_F^2 / c^2) + lambda ||Z||_F^2`.
///
/// Evaluated with `log1p` so small residuals lose no precision.
pub fn objective(x: &DataMatrix, z: &DMatrix<f64>, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    let n = x.num_samples();
    if z.nrows() != n || z.ncols() != n {
        return Err(Error::shape(format!(
            "objective expects a {}x{} representation, got {}x{}",
            n,
            n,
            z.nrows(),
            z.ncols()
        )));
    }
    let residual = x.values() - x.values() * z;
    let loss = (residual.norm_squared() / (cfg.c * cfg.c)).ln_1p();
    Ok(loss + cfg.lambda * z.norm_squared())
}

/// Analytic gradient of [`objective`]:
/// `-2Q X^T (X - XZ) + 2 lambda Z` with `Q = 1 / (c^2 + ||X - XZ||_F^2)`.
pub fn objective_gradient(
    x: &DataMatrix,
    z: &DMatrix<f64>,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    let n = x.num_samples();
    if z.nrows() != n || z.ncols() != n {
        return Err(Error::shape(format!(
            "gradient expects a {}x{} representation, got {}x{}",
            n,
            n,
            z.nrows(),
            z.ncols()
        )));
    }
    let residual = x.values() - x.values() * z;
    let q = 1.0 / (cfg.c * cfg.c + residual.norm_squared());
    Ok(x.values().transpose() * residual * (-2.0 * q) + z * (2.0 * cfg.lambda))
}

/// One re-weighting sweep.
///
/// Takes a consistent snapshot at `Z^t` and returns the consistent snapshot at
/// `Z^{t+1} = Q (Q X^T X + lambda I)^{-1} X^T X`, where `Q` is the weight of
/// the incoming state. The system is solved through a Cholesky factorization,
/// once for all `n` right-hand sides. The objective never increases.
pub fn irr_step(x: &DataMatrix, state: &IrrState, cfg: &SolverConfig) -> Result<IrrState> {
    cfg.validate()?;
    let gram = x.values().transpose() * x.values();
    let z_next = weighted_ridge_update(&gram, state.q, cfg.lambda)?;
    advance(x, z_next, cfg, state.iter + 1)
}

/// Solve `(q G + lambda I) Z = q G` for the shared Gram matrix `G = X^T X`.
fn weighted_ridge_update(gram: &DMatrix<f64>, q: f64, lambda: f64) -> Result<DMatrix<f64>> {
    let n = gram.nrows();
    let mut system = gram * q;
    for i in 0..n {
        system[(i, i)] += lambda;
    }
    let chol = Cholesky::new(system).ok_or_else(|| {
        Error::numerical("ridge system is not positive definite; factorization failed")
    })?;
    Ok(chol.solve(&(gram * q)))
}

fn advance(x: &DataMatrix, z: DMatrix<f64>, cfg: &SolverConfig, iter: usize) -> Result<IrrState> {
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical(
            "representation update produced non-finite entries",
        ));
    }
    let residual = x.values() - x.values() * &z;
    let q = 1.0 / (cfg.c * cfg.c + residual.norm_squared());
    let objective =
        (residual.norm_squared() / (cfg.c * cfg.c)).ln_1p() + cfg.lambda * z.norm_squared();
    Ok(IrrState {
        z,
        residual,
        q,
        objective,
        iter,
    })
}

/// Run the re-weighted-residuals iteration to convergence.
///
/// Stops when `||Z^{t+1} - Z^t||_F / max(1, ||Z^t||_F) < tol` or after
/// `max_iter` sweeps. The Gram matrix is formed once and shared by all sweeps.
pub fn solve(x: &DataMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let n = x.num_samples();
    let z0 = match cfg.init {
        InitStrategy::Zero => DMatrix::zeros(n, n),
        InitStrategy::Lsr => lsr_solve(x, cfg.lambda)?,
    };
    let gram = x.values().transpose() * x.values();

    let mut state = IrrState::from_z(x, z0, cfg)?;
    let mut history = Vec::with_capacity(cfg.max_iter + 1);
    history.push(state.objective);
    let mut converged = false;

    for iter in 1..=cfg.max_iter {
        let z_next = weighted_ridge_update(&gram, state.q, cfg.lambda)?;
        let change = (&z_next - &state.z).norm();
        let rel_change = change / state.z.norm().max(1.0);
        state = advance(x, z_next, cfg, iter)?;
        history.push(state.objective);
        if rel_change < cfg.tol {
            converged = true;
            break;
        }
    }

    let stationarity_residual = objective_gradient(x, &state.z, cfg)?.norm();
    Ok(SolveReport {
        iterations: state.iter,
        z_star: state.z,
        objective_history: history,
        converged,
        stationarity_residual,
    })
}

/// Per-point variant: minimize
/// `log(1 + ||x - Xz||_2^2 / c^2) + lambda ||z||_2^2` over a single
/// coefficient vector `z`.
///
/// Requires a column-normalized dictionary; that hypothesis underlies the
/// grouping-effect bound `|z_i - z_j| / ||x||_2 <= sqrt(2(1 - x_i^T x_j)) / (lambda c^2)`
/// which tests assert on the output. Iterates the same re-weighting scheme
/// restricted to one column until the gradient norm drops below `1e-8`.
pub fn solve_vector(
    x: &DVector<f64>,
    dict: &DataMatrix,
    cfg: &SolverConfig,
) -> Result<DVector<f64>> {
    cfg.validate()?;
    if !dict.is_column_normalized() {
        return Err(Error::invalid(
            "solve_vector requires a column-normalized dictionary",
        ));
    }
    if x.len() != dict.dim() {
        return Err(Error::shape(format!(
            "target vector has length {}, dictionary has {} rows",
            x.len(),
            dict.dim()
        )));
    }
    const GRAD_TOL: f64 = 1e-8;
    const MAX_SWEEPS: usize = 10_000;

    let n = dict.num_samples();
    let gram = dict.values().transpose() * dict.values();
    let xtx = dict.values().transpose() * x;
    let mut z = DVector::zeros(n);

    for _ in 0..MAX_SWEEPS {
        let residual = x - dict.values() * &z;
        let q = 1.0 / (cfg.c * cfg.c + residual.norm_squared());
        let grad = dict.values().transpose() * residual * (-2.0 * q) + &z * (2.0 * cfg.lambda);
        if grad.norm() < GRAD_TOL {
            return Ok(z);
        }
        let mut system = &gram * q;
        for i in 0..n {
            system[(i, i)] += cfg.lambda;
        }
        let chol = Cholesky::new(system).ok_or_else(|| {
            Error::numerical("ridge system is not positive definite; factorization failed")
        })?;
        z = chol.solve(&(&xtx * q));
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical(
                "vector update produced non-finite entries",
            ));
        }
    }
    Err(Error::numerical(format!(
        "vector solve did not reach gradient norm {GRAD_TOL} within {MAX_SWEEPS} sweeps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn cfg(lambda: f64, c: f64) -> SolverConfig {
        SolverConfig {
            lambda,
            c,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn rho_at_zero_is_zero() {
        assert_eq!(cauchy_rho(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn rho_at_scale_is_log_two() {
        let v = cauchy_rho(2.5, 2.5).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn rho_direct_evaluation() {
        // rho(3, 1) = log(1 + 9) = log 10.
        let v = cauchy_rho(3.0, 1.0).unwrap();
        assert!((v - std::f64::consts::LN_10).abs() < 1e-15);
    }

    #[test]
    fn rho_rejects_bad_input() {
        assert!(cauchy_rho(f64::NAN, 1.0).is_err());
        assert!(cauchy_rho(1.0, 0.0).is_err());
        assert!(cauchy_rho(1.0, -2.0).is_err());
    }

    #[test]
    fn psi_is_odd_and_bounded() {
        assert_eq!(cauchy_psi(0.0, 1.0).unwrap(), 0.0);
        assert!((cauchy_psi(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let v = cauchy_psi(10.0, 1.0).unwrap();
        assert!((v - 0.19801980198019803).abs() < 1e-15);
        for &x in &[-7.3, -1.0, 0.4, 2.0, 55.0] {
            let c = 0.7;
            assert!(cauchy_psi(x, c).unwrap().abs() <= 1.0 / c + 1e-15);
        }
        assert!(cauchy_psi(1.0, -1.0).is_err());
    }

    #[test]
    fn objective_zero_representation() {
        let x = DataMatrix::new(dmatrix![1.0, 2.0; 3.0, 4.0]).unwrap();
        let c = cfg(0.7, 1.3);
        let z = DMatrix::zeros(2, 2);
        let expected = (x.values().norm_squared() / (1.3 * 1.3)).ln_1p();
        assert!((objective(&x, &z, &c).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn objective_identity_representation() {
        let x = DataMatrix::new(dmatrix![1.0, 2.0, 0.5; 3.0, 4.0, -1.0]).unwrap();
        let c = cfg(0.7, 1.3);
        let z = DMatrix::identity(3, 3);
        let expected = 0.7 * 3.0;
        assert!((objective(&x, &z, &c).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn objective_hand_example() {
        // X = I2, Z = I/2, lambda = 1, c = 1: residual energy 0.5, penalty 0.5.
        let x = DataMatrix::new(DMatrix::identity(2, 2)).unwrap();
        let z = DMatrix::identity(2, 2) * 0.5;
        let v = objective(&x, &z, &cfg(1.0, 1.0)).unwrap();
        assert!((v - 0.9054651081081644).abs() < 1e-15);
    }

    #[test]
    fn objective_rejects_shape_mismatch() {
        let x = DataMatrix::new(dmatrix![1.0, 2.0; 3.0, 4.0]).unwrap();
        assert!(matches!(
            objective(&x, &DMatrix::zeros(3, 3), &cfg(1.0, 1.0)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn irr_step_scalar_example() {
        // X = [[1]], Z0 = 0, lambda = c = 1: the incoming snapshot carries
        // R = [1], Q = 1/2, and the sweep lands on Z = 1/3.
        let x = DataMatrix::new(dmatrix![1.0]).unwrap();
        let c = cfg(1.0, 1.0);
        let s0 = IrrState::from_z(&x, DMatrix::zeros(1, 1), &c).unwrap();
        assert!((s0.residual()[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((s0.q() - 0.5).abs() < 1e-15);
        let s1 = irr_step(&x, &s0, &c).unwrap();
        assert!((s1.z()[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s1.iter(), 1);
    }

    #[test]
    fn irr_step_orthonormal_columns_give_scaled_identity() {
        // With X^T X = I and Z = 0: Q = 1/(c^2 + n), Z' = Q/(Q + lambda) I.
        let q_mat = DMatrix::from_column_slice(4, 2, &[0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5]);
        let x = DataMatrix::new(q_mat).unwrap();
        let c = cfg(0.3, 0.9);
        let n = 2.0;
        let q = 1.0 / (0.9f64 * 0.9 + n);
        let alpha = q / (q + 0.3);
        let s0 = IrrState::from_z(&x, DMatrix::zeros(2, 2), &c).unwrap();
        let s1 = irr_step(&x, &s0, &c).unwrap();
        let expected = DMatrix::identity(2, 2) * alpha;
        assert!((s1.z() - expected).norm() < 1e-12);
    }

    #[test]
    fn irr_step_fixed_point_is_stationary() {
        let x = DataMatrix::new(dmatrix![1.0, 0.3, -0.2; 0.1, 0.8, 0.5; 0.0, -0.4, 1.1]).unwrap();
        let c = SolverConfig {
            tol: 1e-12,
            max_iter: 2000,
            ..cfg(0.5, 0.8)
        };
        let report = solve(&x, &c).unwrap();
        assert!(report.converged);
        let state = IrrState::from_z(&x, report.z_star.clone(), &c).unwrap();
        let next = irr_step(&x, &state, &c).unwrap();
        assert!((next.z() - &report.z_star).norm() < 10.0 * c.tol);
    }

    #[test]
    fn irr_state_invariants_hold() {
        let x = DataMatrix::new(dmatrix![1.0, 0.5; -0.3, 0.9]).unwrap();
        let c = cfg(0.2, 0.6);
        let z = dmatrix![0.1, -0.2; 0.05, 0.3];
        let s = IrrState::from_z(&x, z.clone(), &c).unwrap();
        assert!((s.q() * (0.36 + s.residual().norm_squared()) - 1.0).abs() < 1e-10);
        let recomputed = x.values() - x.values() * &z;
        assert!((s.residual() - recomputed).norm() < 1e-10);
    }

    #[test]
    fn solve_identity3_matches_scalar_fixed_point() {
        // X = I3, lambda = c = 1: Z* = alpha I with alpha the root of
        // alpha = q/(q+1), q = 1/(1 + 3(1-alpha)^2). Root found by bisection
        // to 25 digits beforehand.
        let alpha = 0.2819428349395196;
        let x = DataMatrix::new(DMatrix::identity(3, 3)).unwrap();
        let c = SolverConfig {
            tol: 1e-12,
            max_iter: 1000,
            ..cfg(1.0, 1.0)
        };
        let report = solve(&x, &c).unwrap();
        assert!(report.converged);
        let expected = DMatrix::identity(3, 3) * alpha;
        assert!(
            (&report.z_star - expected).norm() < 1e-9,
            "z* = {:?}",
            report.z_star
        );
    }

    #[test]
    fn solve_duplicate_columns_get_equal_coefficients() {
        let x = DataMatrix::new(dmatrix![
            0.9, 0.9, -0.1;
            0.2, 0.2, 0.7;
            -0.5, -0.5, 0.3
        ])
        .unwrap();
        let c = SolverConfig {
            tol: 1e-10,
            max_iter: 1000,
            ..cfg(0.4, 0.7)
        };
        let report = solve(&x, &c).unwrap();
        let z = &report.z_star;
        assert!((z.column(0) - z.column(1)).norm() < 1e-8);
    }

    #[test]
    fn solve_history_non_increasing() {
        let x = DataMatrix::new(dmatrix![1.2, -0.3, 0.4; 0.7, 0.9, -1.1]).unwrap();
        let report = solve(&x, &cfg(0.05, 0.3)).unwrap();
        for w in report.objective_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-10);
        }
        assert!(report.iterations <= 200);
    }

    #[test]
    fn solve_vector_scalar_case() {
        // d = 1: first sweep gives z = 1/3; the fixed point solves
        // z = q/(q+1), q = 1/(1+(1-z)^2), bisected beforehand to 25 digits.
        let dict = DataMatrix::new(dmatrix![1.0]).unwrap();
        let x = DVector::from_element(1, 1.0);
        let z = solve_vector(&x, &dict, &cfg(1.0, 1.0)).unwrap();
        assert!((z[0] - 0.4301597090019467).abs() < 1e-9);
    }

    #[test]
    fn solve_vector_shrinks_to_zero_for_large_lambda() {
        let dict = DataMatrix::new(dmatrix![1.0, 0.0; 0.0, 1.0]).unwrap();
        let x = DVector::from_column_slice(&[1.0, 0.0]);
        let z = solve_vector(&x, &dict, &cfg(1e6, 1.0)).unwrap();
        assert!(z.norm() < 1e-5);
    }

    #[test]
    fn solve_vector_rejects_unnormalized_dictionary() {
        let dict = DataMatrix::new(dmatrix![2.0, 0.0; 0.0, 1.0]).unwrap();
        let x = DVector::from_column_slice(&[1.0, 0.0]);
        assert!(solve_vector(&x, &dict, &cfg(1.0, 1.0)).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let x = DataMatrix::new(dmatrix![0.8, -0.4, 0.1; 0.3, 1.2, -0.9]).unwrap();
        let c = cfg(0.3, 0.7);
        let z = dmatrix![0.2, -0.1, 0.4; 0.0, 0.3, -0.2; 0.5, 0.1, 0.0];
        let grad = objective_gradient(&x, &z, &c).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            for j in 0..3 {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[(i, j)] += h;
                zm[(i, j)] -= h;
                let fd =
                    (objective(&x, &zp, &c).unwrap() - objective(&x, &zm, &c).unwrap()) / (2.0 * h);
                let denom = fd.abs().max(1.0);
                assert!(
                    (grad[(i, j)] - fd).abs() / denom < 1e-4,
                    "entry ({i},{j}): analytic {} vs fd {}",
                    grad[(i, j)],
                    fd
                );
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0.0, 1.0).validate().is_err());
        assert!(cfg(1.0, 0.0).validate().is_err());
        assert!(SolverConfig {
            tol: 0.0,
            ..SolverConfig::default()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            max_iter: 0,
            ..SolverConfig::default()
        }
        .validate()
        .is_err());
    }
}
