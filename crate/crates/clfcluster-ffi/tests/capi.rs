//! Exercise the C ABI the way a foreign caller would: raw pointers, status
//! codes, and opaque handles.

use std::ffi::CStr;
use std::ptr::null_mut;

use clfcluster_ffi::*;

fn unit_columns(d: usize, n: usize, seed: u64) -> Vec<f64> {
    // Cheap deterministic pseudo-random unit columns.
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut values = vec![0.0f64; d * n];
    for col in values.chunks_mut(d) {
        let mut norm2 = 0.0;
        for v in col.iter_mut() {
            *v = next();
            norm2 += *v * *v;
        }
        let norm = norm2.sqrt();
        for v in col.iter_mut() {
            *v /= norm;
        }
    }
    values
}

#[test]
fn solve_round_trip_through_handles() {
    let (d, n) = (6, 10);
    let values = unit_columns(d, n, 42);
    let mut matrix = null_mut();
    let status = unsafe { clf_data_matrix_new(values.as_ptr(), d, n, &mut matrix) };
    assert_eq!(status, ClfStatus::Ok);
    assert!(!matrix.is_null());

    let opts = clf_solver_options_default();
    let mut report = null_mut();
    let status = unsafe { clf_solve(matrix, &opts, &mut report) };
    assert_eq!(status, ClfStatus::Ok);
    assert!(!report.is_null());

    unsafe {
        assert_eq!(clf_solve_report_n(report), n);
        assert_eq!(clf_solve_report_converged(report), 1);
        assert!(clf_solve_report_iterations(report) >= 1);
        assert!(clf_solve_report_stationarity(report) < 1e-4);

        let z = clf_solve_report_z(report);
        assert!(!z.is_null());
        let z_slice = std::slice::from_raw_parts(z, n * n);
        assert!(z_slice.iter().all(|v| v.is_finite()));

        let mut len = 0usize;
        let history = clf_solve_report_objective_history(report, &mut len);
        assert!(len >= 2);
        let hist = std::slice::from_raw_parts(history, len);
        for w in hist.windows(2) {
            assert!(w[1] <= w[0] + 1e-10);
        }

        clf_solve_report_free(report);
        clf_data_matrix_free(matrix);
    }
}

#[test]
fn cluster_and_score_through_the_abi() {
    // Two orthogonal-ish bundles of columns.
    let (d, n) = (8, 12);
    let mut values = vec![0.0f64; d * n];
    for j in 0..n {
        let base = if j < 6 { 0 } else { 4 };
        let fill = unit_columns(4, 1, (j + 1) as u64);
        for i in 0..4 {
            values[j * d + base + i] = fill[i];
        }
    }
    let mut matrix = null_mut();
    assert_eq!(
        unsafe { clf_data_matrix_new(values.as_ptr(), d, n, &mut matrix) },
        ClfStatus::Ok
    );
    assert_eq!(
        unsafe { clf_data_matrix_normalize_columns(matrix) },
        ClfStatus::Ok
    );

    let opts = clf_solver_options_default();
    let mut labels = vec![0u32; n];
    let status = unsafe { clf_cluster(matrix, 2, &opts, 7, labels.as_mut_ptr()) };
    assert_eq!(status, ClfStatus::Ok);

    let gt: Vec<u32> = (0..n as u32).map(|j| u32::from(j >= 6)).collect();
    let mut ac = 0.0f64;
    assert_eq!(
        unsafe { clf_accuracy(gt.as_ptr(), labels.as_ptr(), n, &mut ac) },
        ClfStatus::Ok
    );
    assert_eq!(ac, 1.0);

    let mut mi = 0.0f64;
    assert_eq!(
        unsafe { clf_nmi(gt.as_ptr(), labels.as_ptr(), n, &mut mi) },
        ClfStatus::Ok
    );
    assert!((mi - 1.0).abs() < 1e-12);

    let mut km_labels = vec![0u32; n];
    assert_eq!(
        unsafe { clf_kmeans(matrix, 2, 10, 50, 3, km_labels.as_mut_ptr()) },
        ClfStatus::Ok
    );
    let mut km_ac = 0.0f64;
    assert_eq!(
        unsafe { clf_accuracy(gt.as_ptr(), km_labels.as_ptr(), n, &mut km_ac) },
        ClfStatus::Ok
    );
    assert!(km_ac >= 0.5);

    unsafe { clf_data_matrix_free(matrix) };
}

#[test]
fn errors_surface_as_status_codes_with_messages() {
    let mut out = null_mut();
    let status = unsafe { clf_data_matrix_new(std::ptr::null(), 2, 2, &mut out) };
    assert_eq!(status, ClfStatus::NullPointer);
    assert!(out.is_null());

    let bad = [1.0, f64::NAN, 0.0, 1.0];
    let status = unsafe { clf_data_matrix_new(bad.as_ptr(), 2, 2, &mut out) };
    assert_eq!(status, ClfStatus::InvalidArgument);
    let msg = unsafe { CStr::from_ptr(clf_last_error_message()) };
    assert!(msg.to_string_lossy().contains("finite"));

    // Bad solver options turn into InvalidArgument.
    let values = unit_columns(3, 4, 1);
    let mut matrix = null_mut();
    assert_eq!(
        unsafe { clf_data_matrix_new(values.as_ptr(), 3, 4, &mut matrix) },
        ClfStatus::Ok
    );
    let mut opts = clf_solver_options_default();
    opts.lambda = -1.0;
    let mut report = null_mut();
    let status = unsafe { clf_solve(matrix, &opts, &mut report) };
    assert_eq!(status, ClfStatus::InvalidArgument);
    assert!(report.is_null());

    // k larger than n is rejected by the pipeline.
    let opts = clf_solver_options_default();
    let mut labels = vec![0u32; 4];
    let status = unsafe { clf_cluster(matrix, 9, &opts, 0, labels.as_mut_ptr()) };
    assert_eq!(status, ClfStatus::InvalidArgument);

    unsafe { clf_data_matrix_free(matrix) };
}

#[test]
fn report_accessors_tolerate_null() {
    unsafe {
        assert_eq!(clf_solve_report_n(std::ptr::null()), 0);
        assert!(clf_solve_report_z(std::ptr::null()).is_null());
        let mut len = 99usize;
        let hist = clf_solve_report_objective_history(std::ptr::null(), &mut len);
        assert!(hist.is_null());
        assert_eq!(len, 0);
        clf_solve_report_free(null_mut());
        clf_data_matrix_free(null_mut());
    }
}
