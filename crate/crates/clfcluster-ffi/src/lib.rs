//! C ABI over the clfcluster library.
//!
//! Conventions: opaque handles behind `*mut`, status codes for every fallible
//! call, and a thread-local message retrievable with
//! [`clf_last_error_message`] after a non-OK status. Matrices cross the
//! boundary as column-major `double` buffers. Pointers returned from report
//! accessors stay valid until the report is freed.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::ptr::null_mut;

use clfcluster::baselines::KmeansConfig;
use clfcluster::error::Error;
use clfcluster::metrics;
use clfcluster::solver::{self, InitStrategy, SolveReport, SolverConfig};
use clfcluster::spectral::{build_similarity, normalized_cuts};
use clfcluster::types::{ClusterLabels, DataMatrix};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    NumericalError = 4,
    ParseError = 5,
    IoError = 6,
    ConfigError = 7,
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&ch| ch != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn status_of(err: &Error) -> ClfStatus {
    match err {
        Error::InvalidArgument(_) => ClfStatus::InvalidArgument,
        Error::Shape(_) => ClfStatus::ShapeMismatch,
        Error::Numerical(_) => ClfStatus::NumericalError,
        Error::Parse { .. } => ClfStatus::ParseError,
        Error::Config(_) => ClfStatus::ConfigError,
        Error::Io { .. } => ClfStatus::IoError,
    }
}

fn fail(err: Error) -> ClfStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn fail_null(what: &str) -> ClfStatus {
    set_error(&format!("null pointer: {what}"));
    ClfStatus::NullPointer
}

/// Message for the most recent non-OK status on this thread, or null.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn clf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Opaque column-major data matrix handle.
pub struct ClfDataMatrix(DataMatrix);

/// Opaque solver report handle.
pub struct ClfSolveReport(SolveReport);

/// Solver options; obtain defaults from [`clf_solver_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ClfSolverOptions {
    /// Regularization weight, > 0.
    pub lambda: f64,
    /// Cauchy scale constant, > 0.
    pub c: f64,
    /// Relative-change convergence threshold, > 0.
    pub tol: f64,
    /// Iteration cap, >= 1.
    pub max_iter: usize,
    /// Nonzero warm-starts from the least-squares solution.
    pub use_lsr_init: c_int,
}

impl ClfSolverOptions {
    fn to_config(self) -> SolverConfig {
        SolverConfig {
            lambda: self.lambda,
            c: self.c,
            tol: self.tol,
            max_iter: self.max_iter,
            init: if self.use_lsr_init != 0 {
                InitStrategy::Lsr
            } else {
                InitStrategy::Zero
            },
        }
    }
}

#[no_mangle]
pub extern "C" fn clf_solver_options_default() -> ClfSolverOptions {
    let cfg = SolverConfig::default();
    ClfSolverOptions {
        lambda: cfg.lambda,
        c: cfg.c,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        use_lsr_init: 0,
    }
}

/// Wrap `d * n` column-major values into a matrix handle.
///
/// # Safety
/// `values` must point to `d * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clf_data_matrix_new(
    values: *const f64,
    d: usize,
    n: usize,
    out: *mut *mut ClfDataMatrix,
) -> ClfStatus {
    if out.is_null() {
        return fail_null("out");
    }
    if values.is_null() {
        unsafe { *out = null_mut() };
        return fail_null("values");
    }
    let len = match d.checked_mul(n) {
        Some(len) => len,
        None => {
            unsafe { *out = null_mut() };
            set_error("matrix dimensions overflow");
            return ClfStatus::InvalidArgument;
        }
    };
    let slice = unsafe { std::slice::from_raw_parts(values, len) };
    match DataMatrix::from_column_major(d, n, slice) {
        Ok(m) => {
            unsafe { *out = Box::into_raw(Box::new(ClfDataMatrix(m))) };
            ClfStatus::Ok
        }
        Err(e) => {
            unsafe { *out = null_mut() };
            fail(e)
        }
    }
}

/// # Safety
/// `handle` must come from [`clf_data_matrix_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn clf_data_matrix_free(handle: *mut ClfDataMatrix) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Scale every column of the matrix to unit norm, in place.
///
/// # Safety
/// `handle` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn clf_data_matrix_normalize_columns(
    handle: *mut ClfDataMatrix,
) -> ClfStatus {
    let Some(m) = (unsafe { handle.as_mut() }) else {
        return fail_null("handle");
    };
    match clfcluster::data::normalize_columns(&m.0) {
        Ok(normalized) => {
            m.0 = normalized;
            ClfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Run the re-weighted-residuals solver; on success `*out` owns the report.
///
/// # Safety
/// `x` must be a live matrix handle; `opts` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn clf_solve(
    x: *const ClfDataMatrix,
    opts: *const ClfSolverOptions,
    out: *mut *mut ClfSolveReport,
) -> ClfStatus {
    if out.is_null() {
        return fail_null("out");
    }
    unsafe { *out = null_mut() };
    let Some(x) = (unsafe { x.as_ref() }) else {
        return fail_null("x");
    };
    let Some(opts) = (unsafe { opts.as_ref() }) else {
        return fail_null("opts");
    };
    match solver::solve(&x.0, &opts.to_config()) {
        Ok(report) => {
            unsafe { *out = Box::into_raw(Box::new(ClfSolveReport(report))) };
            ClfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `report` must come from [`clf_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_free(report: *mut ClfSolveReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Number of samples `n`; the representation is `n x n`.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_n(report: *const ClfSolveReport) -> usize {
    unsafe { report.as_ref() }
        .map(|r| r.0.z_star.nrows())
        .unwrap_or(0)
}

/// Column-major `n x n` representation matrix; valid until the report is freed.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_z(report: *const ClfSolveReport) -> *const f64 {
    unsafe { report.as_ref() }
        .map(|r| r.0.z_star.as_slice().as_ptr())
        .unwrap_or(std::ptr::null())
}

/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_iterations(report: *const ClfSolveReport) -> usize {
    unsafe { report.as_ref() }
        .map(|r| r.0.iterations)
        .unwrap_or(0)
}

/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_converged(report: *const ClfSolveReport) -> c_int {
    unsafe { report.as_ref() }
        .map(|r| c_int::from(r.0.converged))
        .unwrap_or(0)
}

/// Frobenius norm of the objective gradient at the solution.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_stationarity(report: *const ClfSolveReport) -> f64 {
    unsafe { report.as_ref() }
        .map(|r| r.0.stationarity_residual)
        .unwrap_or(f64::NAN)
}

/// Objective values per sweep (initial value first); length goes to `*len`.
/// Valid until the report is freed.
///
/// # Safety
/// `report` must be a live report handle; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clf_solve_report_objective_history(
    report: *const ClfSolveReport,
    len: *mut usize,
) -> *const f64 {
    let Some(r) = (unsafe { report.as_ref() }) else {
        if !len.is_null() {
            unsafe { *len = 0 };
        }
        return std::ptr::null();
    };
    if !len.is_null() {
        unsafe { *len = r.0.objective_history.len() };
    }
    r.0.objective_history.as_ptr()
}

/// Full pipeline: solve, symmetrize into an affinity, cluster with
/// normalized cuts. Writes one label per sample into `labels_out`.
///
/// # Safety
/// `x` must be a live matrix handle; `opts` must be valid; `labels_out` must
/// point to `n` writable `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn clf_cluster(
    x: *const ClfDataMatrix,
    k: usize,
    opts: *const ClfSolverOptions,
    seed: u64,
    labels_out: *mut u32,
) -> ClfStatus {
    let Some(x) = (unsafe { x.as_ref() }) else {
        return fail_null("x");
    };
    let Some(opts) = (unsafe { opts.as_ref() }) else {
        return fail_null("opts");
    };
    if labels_out.is_null() {
        return fail_null("labels_out");
    }
    let result = solver::solve(&x.0, &opts.to_config())
        .and_then(|report| build_similarity(&report.z_star))
        .and_then(|w| normalized_cuts(&w, k, seed));
    match result {
        Ok(labels) => {
            let out = unsafe { std::slice::from_raw_parts_mut(labels_out, labels.len()) };
            for (slot, &label) in out.iter_mut().zip(labels.iter()) {
                *slot = label as u32;
            }
            ClfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// K-means directly on the matrix columns; writes one label per sample.
///
/// # Safety
/// `x` must be a live matrix handle; `labels_out` must point to `n` writable
/// `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn clf_kmeans(
    x: *const ClfDataMatrix,
    k: usize,
    restarts: usize,
    max_iter: usize,
    seed: u64,
    labels_out: *mut u32,
) -> ClfStatus {
    let Some(x) = (unsafe { x.as_ref() }) else {
        return fail_null("x");
    };
    if labels_out.is_null() {
        return fail_null("labels_out");
    }
    let cfg = KmeansConfig {
        k,
        restarts,
        max_iter,
        seed,
    };
    match clfcluster::baselines::kmeans(x.0.values(), &cfg) {
        Ok(labels) => {
            let out = unsafe { std::slice::from_raw_parts_mut(labels_out, labels.len()) };
            for (slot, &label) in out.iter_mut().zip(labels.iter()) {
                *slot = label as u32;
            }
            ClfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn labels_from_raw(ptr: *const u32, n: usize) -> Result<ClusterLabels, Error> {
    let slice = unsafe { std::slice::from_raw_parts(ptr, n) };
    ClusterLabels::from_assignments(slice.iter().map(|&v| v as usize).collect())
}

/// Clustering accuracy under the optimal label mapping.
///
/// # Safety
/// `gt` and `pred` must point to `n` readable `uint32_t`; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn clf_accuracy(
    gt: *const u32,
    pred: *const u32,
    n: usize,
    out: *mut f64,
) -> ClfStatus {
    if gt.is_null() || pred.is_null() || out.is_null() {
        return fail_null("gt/pred/out");
    }
    let result = labels_from_raw(gt, n)
        .and_then(|g| labels_from_raw(pred, n).map(|p| (g, p)))
        .and_then(|(g, p)| metrics::accuracy(&g, &p));
    match result {
        Ok(v) => {
            unsafe { *out = v };
            ClfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Normalized mutual information between two labelings.
///
/// # Safety
/// `gt` and `pred` must point to `n` readable `uint32_t`; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn clf_nmi(
    gt: *const u32,
    pred: *const u32,
    n: usize,
    out: *mut f64,
) -> ClfStatus {
    if gt.is_null() || pred.is_null() || out.is_null() {
        return fail_null("gt/pred/out");
    }
    let result = labels_from_raw(gt, n)
        .and_then(|g| labels_from_raw(pred, n).map(|p| (g, p)))
        .and_then(|(g, p)| metrics::nmi(&g, &p));
    match result {
        Ok(v) => {
            unsafe { *out = v };
            ClfStatus::Ok
        }
        Err(e) => fail(e),
    }
}
