//! C ABI for the `hobody` crate.
//!
//! Bodies are opaque handles created by the `hobody_body_*` constructors and
//! released with [`hobody_body_free`].  Fallible calls return a
//! [`HobodyStatus`]; on any non-`Ok` status a human-readable message is
//! available from [`hobody_last_error`] until the next failing call on the
//! same thread.  Strings returned as `char *` are owned by the caller and
//! must be released with [`hobody_string_free`]; `const char *` returns are
//! borrowed and must not be freed.
//!
//! Panics never cross the boundary: every entry point catches unwinding and
//! reports `HOBODY_STATUS_PANIC` (or a null pointer) instead.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use hobody::bodies::BodyError;
use hobody::centroid::ball_centroid_radius;
use hobody::covariogram::{diff_body_volume, m_covariogram};
use hobody::harness::{
    emit_report, run_suite, BodySpec, HarnessError, ReportFormat, SuiteConfig, SUITE_NAMES,
};
use hobody::projection::{petty_product, proj_support, simplex_product_bound};
use hobody::{Body, DirectionTuple, Ellipsoid, Polytope};

/// Opaque convex body handle (a polytope or an ellipsoid).
pub struct HobodyBody {
    inner: Body,
}

/// Result of a fallible call.  Everything except `Ok` leaves a message in
/// `hobody_last_error`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HobodyStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was out of range or otherwise malformed.
    InvalidArgument = 2,
    /// The body is degenerate for the requested operation.
    Degenerate = 3,
    /// A numeric routine failed to converge or ran over budget.
    Numeric = 4,
    /// A panic was caught at the boundary; state is unchanged.
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let owned = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained an interior NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn fail(status: HobodyStatus, msg: impl std::fmt::Display) -> HobodyStatus {
    set_error(&msg.to_string());
    status
}

fn body_error_status(err: &BodyError) -> HobodyStatus {
    match err {
        BodyError::TooFewPoints { .. }
        | BodyError::Dimension { .. }
        | BodyError::UnsupportedDimension(_)
        | BodyError::Exponent { .. } => HobodyStatus::InvalidArgument,
        BodyError::Degenerate { .. }
        | BodyError::OriginNotInterior { .. }
        | BodyError::SingularMap { .. } => HobodyStatus::Degenerate,
        BodyError::EnumerationBudget { .. }
        | BodyError::Program { .. }
        | BodyError::Precision { .. }
        | BodyError::Quadrature(_) => HobodyStatus::Numeric,
    }
}

fn harness_error_status(err: &HarnessError) -> HobodyStatus {
    match err {
        HarnessError::UnknownSuite(_)
        | HarnessError::Config(_)
        | HarnessError::Catalog { .. }
        | HarnessError::Io { .. } => HobodyStatus::InvalidArgument,
        HarnessError::Body(e) => body_error_status(e),
        HarnessError::Quadrature(_) => HobodyStatus::Numeric,
    }
}

fn panic_text(payload: &(dyn std::any::Any + Send)) -> &str {
    payload
        .downcast_ref::<&str>()
        .copied()
        .or_else(|| payload.downcast_ref::<String>().map(String::as_str))
        .unwrap_or("opaque panic payload")
}

/// Runs `f`, converting a panic into `fallback` plus a recorded message.
fn guarded<R>(fallback: R, f: impl FnOnce() -> R) -> R {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(value) => value,
        Err(payload) => {
            set_error(&format!("internal panic: {}", panic_text(payload.as_ref())));
            fallback
        }
    }
}

fn boxed(inner: Body) -> *mut HobodyBody {
    Box::into_raw(Box::new(HobodyBody { inner }))
}

fn check_dim(dim: usize) -> Result<(), HobodyStatus> {
    if (1..=4).contains(&dim) {
        Ok(())
    } else {
        Err(fail(
            HobodyStatus::InvalidArgument,
            format!("dimension {dim} is outside 1..=4"),
        ))
    }
}

fn check_order(n: usize, m: usize) -> Result<(), HobodyStatus> {
    if !(1..=3).contains(&m) {
        return Err(fail(
            HobodyStatus::InvalidArgument,
            format!("order m = {m} is outside 1..=3"),
        ));
    }
    if n * m > 12 {
        return Err(fail(
            HobodyStatus::InvalidArgument,
            format!("n * m = {} exceeds the supported total dimension 12", n * m),
        ));
    }
    Ok(())
}

/// Reads an `n * m` flat direction tuple from `ptr`.
///
/// # Safety
/// `ptr` must point to `n * m` readable doubles.
unsafe fn read_tuple(n: usize, m: usize, ptr: *const f64) -> Result<DirectionTuple, HobodyStatus> {
    let flat = unsafe { std::slice::from_raw_parts(ptr, n * m) }.to_vec();
    DirectionTuple::new(n, m, flat)
        .map_err(|e| fail(body_error_status(&e), format!("direction tuple: {e}")))
}

unsafe fn write_out(ptr: *mut f64, value: f64) {
    if !ptr.is_null() {
        unsafe { *ptr = value };
    }
}

/// Library version as a static string; never free it.
#[no_mangle]
pub extern "C" fn hobody_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null if none.
/// Valid until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn hobody_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Frees a string previously returned as an owned `char *`.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library's owned-string
/// returns, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hobody_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Frees a body handle; a null handle is ignored.
///
/// # Safety
/// `body` must be null or a handle from a `hobody_body_*` constructor, not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn hobody_body_free(body: *mut HobodyBody) {
    if !body.is_null() {
        drop(unsafe { Box::from_raw(body) });
    }
}

/// Regular simplex in `R^dim` (1 <= dim <= 4) with centroid at the origin.
/// Returns null on error.
#[no_mangle]
pub extern "C" fn hobody_body_simplex(dim: usize) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if check_dim(dim).is_err() {
            return std::ptr::null_mut();
        }
        boxed(Body::Polytope(Polytope::simplex(dim)))
    })
}

/// Cube `[-1, 1]^dim` (1 <= dim <= 4).  Returns null on error.
#[no_mangle]
pub extern "C" fn hobody_body_cube(dim: usize) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if check_dim(dim).is_err() {
            return std::ptr::null_mut();
        }
        boxed(Body::Polytope(Polytope::cube(dim)))
    })
}

/// Cross-polytope `conv(+-e_1, ..., +-e_dim)` (1 <= dim <= 4).  Returns
/// null on error.
#[no_mangle]
pub extern "C" fn hobody_body_cross_polytope(dim: usize) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if check_dim(dim).is_err() {
            return std::ptr::null_mut();
        }
        boxed(Body::Polytope(Polytope::cross_polytope(dim)))
    })
}

/// Regular polygon with `sides >= 3` vertices on the unit circle.  Returns
/// null on error.
#[no_mangle]
pub extern "C" fn hobody_body_regular_polygon(sides: usize) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if sides < 3 {
            fail(
                HobodyStatus::InvalidArgument,
                format!("a polygon needs at least 3 sides, got {sides}"),
            );
            return std::ptr::null_mut();
        }
        boxed(Body::Polytope(Polytope::regular_polygon(sides)))
    })
}

/// Euclidean ball of the given radius in `R^dim` (1 <= dim <= 4).  Returns
/// null on error.
#[no_mangle]
pub extern "C" fn hobody_body_ball(dim: usize, radius: f64) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if check_dim(dim).is_err() {
            return std::ptr::null_mut();
        }
        if !(radius.is_finite() && radius > 0.0) {
            fail(
                HobodyStatus::InvalidArgument,
                format!("ball radius must be finite and positive, got {radius}"),
            );
            return std::ptr::null_mut();
        }
        boxed(Body::Ellipsoid(Ellipsoid::ball(dim, radius)))
    })
}

/// Convex hull of `count` points in `R^dim`, given row-major as
/// `count * dim` doubles.  Returns null on error (too few points, degenerate
/// hull, bad dimension).
///
/// # Safety
/// `coords` must point to `count * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn hobody_body_from_vertices(
    dim: usize,
    count: usize,
    coords: *const f64,
) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if coords.is_null() {
            fail(HobodyStatus::NullArgument, "coords is null");
            return std::ptr::null_mut();
        }
        if check_dim(dim).is_err() {
            return std::ptr::null_mut();
        }
        let flat = unsafe { std::slice::from_raw_parts(coords, count * dim) };
        let points: Vec<Vec<f64>> = flat.chunks_exact(dim).map(<[f64]>::to_vec).collect();
        match Polytope::from_vertices(dim, &points) {
            Ok(p) => boxed(Body::Polytope(p)),
            Err(e) => {
                fail(body_error_status(&e), e);
                std::ptr::null_mut()
            }
        }
    })
}

/// Builds a body from a JSON spec, e.g. `{"kind":"ball","n":3}`,
/// `{"kind":"simplex","n":2}` or `{"kind":"ellipsoid","semiaxes":[1.25,0.8]}`.
/// The grammar matches catalog files accepted by the `hobody` CLI.  Returns
/// null on error.
///
/// # Safety
/// `spec` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hobody_body_from_json(spec: *const c_char) -> *mut HobodyBody {
    guarded(std::ptr::null_mut(), || {
        if spec.is_null() {
            fail(HobodyStatus::NullArgument, "spec is null");
            return std::ptr::null_mut();
        }
        let text = match unsafe { CStr::from_ptr(spec) }.to_str() {
            Ok(t) => t,
            Err(e) => {
                fail(HobodyStatus::InvalidArgument, format!("spec is not UTF-8: {e}"));
                return std::ptr::null_mut();
            }
        };
        let parsed: BodySpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => {
                fail(HobodyStatus::InvalidArgument, format!("body spec: {e}"));
                return std::ptr::null_mut();
            }
        };
        match parsed.build() {
            Ok(body) => boxed(body),
            Err(e) => {
                fail(body_error_status(&e), e);
                std::ptr::null_mut()
            }
        }
    })
}

/// Ambient dimension of the body, or 0 if `body` is null.
///
/// # Safety
/// `body` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hobody_body_dim(body: *const HobodyBody) -> usize {
    guarded(0, || {
        if body.is_null() {
            return 0;
        }
        unsafe { &*body }.inner.dim()
    })
}

/// Exact volume of the body.
///
/// # Safety
/// `body` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hobody_body_volume(
    body: *const HobodyBody,
    out: *mut f64,
) -> HobodyStatus {
    guarded(HobodyStatus::Panic, || {
        if body.is_null() || out.is_null() {
            return fail(HobodyStatus::NullArgument, "body and out must be non-null");
        }
        unsafe { write_out(out, (*body).inner.volume()) };
        HobodyStatus::Ok
    })
}

/// Support value `h_{Pi^m K}(theta)` of the order-`m` projection body at one
/// direction tuple `theta` of `m * dim(body)` doubles (blocks of length
/// `dim`, listed consecutively).
///
/// # Safety
/// `body` must be a live handle; `theta` must point to `m * dim(body)`
/// readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hobody_proj_support(
    body: *const HobodyBody,
    m: usize,
    theta: *const f64,
    out: *mut f64,
) -> HobodyStatus {
    guarded(HobodyStatus::Panic, || {
        if body.is_null() || theta.is_null() || out.is_null() {
            return fail(
                HobodyStatus::NullArgument,
                "body, theta and out must be non-null",
            );
        }
        let inner = &unsafe { &*body }.inner;
        if let Err(status) = check_order(inner.dim(), m) {
            return status;
        }
        let tuple = match unsafe { read_tuple(inner.dim(), m, theta) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match proj_support(inner, &tuple) {
            Ok(value) => {
                unsafe { write_out(out, value) };
                HobodyStatus::Ok
            }
            Err(e) => fail(body_error_status(&e), e),
        }
    })
}

/// m-covariogram `Vol(K cap (x_1 + K) cap ... cap (x_m + K))` of a polytope
/// at one shift tuple of `m * dim(body)` doubles.  Ellipsoid handles are
/// rejected.
///
/// # Safety
/// `body` must be a live handle; `shifts` must point to `m * dim(body)`
/// readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hobody_covariogram(
    body: *const HobodyBody,
    m: usize,
    shifts: *const f64,
    out: *mut f64,
) -> HobodyStatus {
    guarded(HobodyStatus::Panic, || {
        if body.is_null() || shifts.is_null() || out.is_null() {
            return fail(
                HobodyStatus::NullArgument,
                "body, shifts and out must be non-null",
            );
        }
        let inner = &unsafe { &*body }.inner;
        if let Err(status) = check_order(inner.dim(), m) {
            return status;
        }
        let Body::Polytope(p) = inner else {
            return fail(
                HobodyStatus::InvalidArgument,
                "the m-covariogram needs a polytope handle",
            );
        };
        let tuple = match unsafe { read_tuple(p.dim(), m, shifts) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match m_covariogram(p, &tuple) {
            Ok(value) => {
                unsafe { write_out(out, value) };
                HobodyStatus::Ok
            }
            Err(e) => fail(body_error_status(&e), e),
        }
    })
}

/// Seeded Monte Carlo volume of the order-`m` difference body `D^m K` of a
/// polytope.  Writes the estimate and its standard error (`out_std_error`
/// may be null).  Ellipsoid handles are rejected.
///
/// # Safety
/// `body` must be a live handle; `out_value` must be writable;
/// `out_std_error` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn hobody_diff_body_volume(
    body: *const HobodyBody,
    m: usize,
    samples: u64,
    seed: u64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> HobodyStatus {
    guarded(HobodyStatus::Panic, || {
        if body.is_null() || out_value.is_null() {
            return fail(
                HobodyStatus::NullArgument,
                "body and out_value must be non-null",
            );
        }
        if samples == 0 {
            return fail(HobodyStatus::InvalidArgument, "samples must be positive");
        }
        let inner = &unsafe { &*body }.inner;
        if let Err(status) = check_order(inner.dim(), m) {
            return status;
        }
        let Body::Polytope(p) = inner else {
            return fail(
                HobodyStatus::InvalidArgument,
                "the difference body volume needs a polytope handle",
            );
        };
        match diff_body_volume(p, m, samples, seed) {
            Ok(est) => {
                unsafe { write_out(out_value, est.value) };
                unsafe { write_out(out_std_error, est.std_error) };
                HobodyStatus::Ok
            }
            Err(e) => fail(body_error_status(&e), e),
        }
    })
}

/// Seeded Monte Carlo estimate of the affine-invariant Petty product
/// `Vol(K)^{nm-m} Vol((Pi^m K)^o)`.  Writes the estimate and its standard
/// error (`out_std_error` may be null).
///
/// # Safety
/// `body` must be a live handle; `out_value` must be writable;
/// `out_std_error` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn hobody_petty_product(
    body: *const HobodyBody,
    m: usize,
    samples: u64,
    seed: u64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> HobodyStatus {
    guarded(HobodyStatus::Panic, || {
        if body.is_null() || out_value.is_null() {
            return fail(
                HobodyStatus::NullArgument,
                "body and out_value must be non-null",
            );
        }
        if samples == 0 {
            return fail(HobodyStatus::InvalidArgument, "samples must be positive");
        }
        let inner = &unsafe { &*body }.inner;
        if let Err(status) = check_order(inner.dim(), m) {
            return status;
        }
        match petty_product(inner, m, samples, seed) {
            Ok(est) => {
                unsafe { write_out(out_value, est.value) };
                unsafe { write_out(out_std_error, est.std_error) };
                HobodyStatus::Ok
            }
            Err(e) => fail(body_error_status(&e), e),
        }
    })
}

/// Sharp simplex lower bound `binom(nm+n, n) / n^{nm}` for the Petty
/// product, or NaN for out-of-range arguments.
#[no_mangle]
pub extern "C" fn hobody_simplex_product_bound(n: usize, m: usize) -> f64 {
    guarded(f64::NAN, || {
        if check_dim(n).is_err() || check_order(n, m).is_err() {
            return f64::NAN;
        }
        simplex_product_bound(n, m)
    })
}

/// Radius `m / ((nm+1) kappa_n)` of the ball `Gamma^m (Pi^{o,m} B^n)`, or
/// NaN for out-of-range arguments.
#[no_mangle]
pub extern "C" fn hobody_ball_centroid_radius(n: usize, m: usize) -> f64 {
    guarded(f64::NAN, || {
        if check_dim(n).is_err() || check_order(n, m).is_err() {
            return f64::NAN;
        }
        ball_centroid_radius(n, m)
    })
}

fn suite_names_c() -> &'static [CString] {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    NAMES.get_or_init(|| {
        SUITE_NAMES
            .iter()
            .map(|name| CString::new(*name).expect("suite names are NUL-free"))
            .collect()
    })
}

/// Number of verification suites.
#[no_mangle]
pub extern "C" fn hobody_suite_count() -> usize {
    SUITE_NAMES.len()
}

/// Name of the verification suite at `index`, as a static string (never free
/// it), or null if `index` is out of range.
#[no_mangle]
pub extern "C" fn hobody_suite_name(index: usize) -> *const c_char {
    guarded(std::ptr::null(), || {
        suite_names_c()
            .get(index)
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

fn suite_config(samples: u64, seed: u64) -> SuiteConfig {
    SuiteConfig {
        samples,
        seed,
        ..SuiteConfig::default()
    }
}

unsafe fn run_named_suite(
    name: *const c_char,
    samples: u64,
    seed: u64,
) -> Result<hobody::harness::SuiteReport, HobodyStatus> {
    if name.is_null() {
        return Err(fail(HobodyStatus::NullArgument, "suite name is null"));
    }
    let name = unsafe { CStr::from_ptr(name) }
        .to_str()
        .map_err(|e| fail(HobodyStatus::InvalidArgument, format!("suite name: {e}")))?;
    run_suite(name, &suite_config(samples, seed))
        .map_err(|e| fail(harness_error_status(&e), e))
}

/// Runs one verification suite with the given Monte Carlo budget
/// (`samples >= 1000`) and seed.  On success writes the number of checks to
/// `out_checks` and the number of failed checks to `out_failures` (either
/// may be null); a suite whose checks fail still returns `Ok`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_checks` and `out_failures`
/// must each be writable or null.
#[no_mangle]
pub unsafe extern "C" fn hobody_verify_suite(
    name: *const c_char,
    samples: u64,
    seed: u64,
    out_checks: *mut usize,
    out_failures: *mut usize,
) -> HobodyStatus {
    guarded(HobodyStatus::Panic, || {
        let report = match unsafe { run_named_suite(name, samples, seed) } {
            Ok(r) => r,
            Err(status) => return status,
        };
        if !out_checks.is_null() {
            unsafe { *out_checks = report.rows.len() };
        }
        if !out_failures.is_null() {
            unsafe { *out_failures = report.failures().count() };
        }
        HobodyStatus::Ok
    })
}

/// Runs one verification suite and returns its report as a JSON string owned
/// by the caller (free with `hobody_string_free`), or null on error.  The
/// schema matches `hobody verify --format json`.
///
/// # Safety
/// `name` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hobody_verify_suite_json(
    name: *const c_char,
    samples: u64,
    seed: u64,
) -> *mut c_char {
    guarded(std::ptr::null_mut(), || {
        let report = match unsafe { run_named_suite(name, samples, seed) } {
            Ok(r) => r,
            Err(_) => return std::ptr::null_mut(),
        };
        let text = emit_report(std::slice::from_ref(&report), ReportFormat::Json);
        match CString::new(text) {
            Ok(s) => s.into_raw(),
            Err(e) => {
                fail(HobodyStatus::Numeric, format!("report had interior NUL: {e}"));
                std::ptr::null_mut()
            }
        }
    })
}
