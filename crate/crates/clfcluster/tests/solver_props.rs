//! Property tests for the representation solver.

use clfcluster::data::normalize_columns;
use clfcluster::solver::{cauchy_psi, cauchy_rho, irr_step, solve, IrrState, SolverConfig};
use clfcluster::types::DataMatrix;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn data_matrix_strategy() -> impl Strategy<Value = DataMatrix> {
    (2usize..8, 3usize..12).prop_flat_map(|(d, n)| {
        proptest::collection::vec(-2.0f64..2.0, d * n).prop_filter_map(
            "columns must be nonzero",
            move |vals| {
                let m = DMatrix::from_column_slice(d, n, &vals);
                let x = DataMatrix::new(m).ok()?;
                normalize_columns(&x).ok()
            },
        )
    })
}

fn solver_config_strategy() -> impl Strategy<Value = SolverConfig> {
    (
        prop_oneof![Just(0.01f64), Just(0.1), Just(1.0)],
        prop_oneof![Just(0.1f64), Just(0.5), Just(1.0)],
    )
        .prop_map(|(lambda, c)| SolverConfig {
            lambda,
            c,
            tol: 1e-8,
            max_iter: 300,
            ..SolverConfig::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn objective_never_increases(
        x in data_matrix_strategy(),
        cfg in solver_config_strategy(),
    ) {
        let report = solve(&x, &cfg).unwrap();
        for w in report.objective_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10, "objective rose: {} -> {}", w[0], w[1]);
        }
        prop_assert!(report.z_star.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn converged_solution_is_a_fixed_point(
        x in data_matrix_strategy(),
        cfg in solver_config_strategy(),
    ) {
        let report = solve(&x, &cfg).unwrap();
        prop_assume!(report.converged);
        let state = IrrState::from_z(&x, report.z_star.clone(), &cfg).unwrap();
        let next = irr_step(&x, &state, &cfg).unwrap();
        prop_assert!(
            (next.z() - &report.z_star).norm() < 10.0 * cfg.tol,
            "fixed point drifted by {}",
            (next.z() - &report.z_star).norm()
        );
    }

    #[test]
    fn stronger_regularization_never_grows_the_solution(
        x in data_matrix_strategy(),
        c in prop_oneof![Just(0.3f64), Just(1.0)],
    ) {
        let mut previous = f64::INFINITY;
        for lambda in [0.01, 0.1, 0.5, 1.0, 5.0] {
            let cfg = SolverConfig {
                lambda,
                c,
                tol: 1e-9,
                max_iter: 500,
                ..SolverConfig::default()
            };
            let norm = solve(&x, &cfg).unwrap().z_star.norm();
            prop_assert!(
                norm <= previous + 1e-6,
                "||Z*|| grew from {previous} to {norm} when lambda rose to {lambda}"
            );
            previous = norm;
        }
    }

    #[test]
    fn influence_is_bounded_by_inverse_scale(
        x in -100.0f64..100.0,
        c in 0.05f64..5.0,
    ) {
        let psi = cauchy_psi(x, c).unwrap();
        prop_assert!(psi.abs() <= 1.0 / c + 1e-12);
    }

    #[test]
    fn loss_is_nonnegative_and_vanishes_only_at_zero(
        x in -50.0f64..50.0,
        c in 0.05f64..5.0,
    ) {
        let rho = cauchy_rho(x, c).unwrap();
        prop_assert!(rho >= 0.0);
        if x != 0.0 {
            prop_assert!(rho > 0.0);
        } else {
            prop_assert_eq!(rho, 0.0);
        }
    }
}
