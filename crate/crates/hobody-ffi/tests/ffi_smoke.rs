//! Exercises the C ABI from Rust: handle lifecycle, status codes, error
//! messages, agreement with direct library calls at the same seed, and the
//! committed header staying in sync with the exported surface.

use std::ffi::{CStr, CString};
use std::ptr;

use hobody_ffi::*;

fn last_error_text() -> String {
    let ptr = hobody_last_error();
    assert!(!ptr.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned()
}

#[test]
fn version_and_suite_names_match_the_library() {
    let version = unsafe { CStr::from_ptr(hobody_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));

    let count = hobody_suite_count();
    assert_eq!(count, hobody::harness::SUITE_NAMES.len());
    for (i, expected) in hobody::harness::SUITE_NAMES.iter().enumerate() {
        let name = hobody_suite_name(i);
        assert!(!name.is_null());
        assert_eq!(unsafe { CStr::from_ptr(name) }.to_str().unwrap(), *expected);
    }
    assert!(hobody_suite_name(count).is_null());
}

#[test]
fn simplex_handle_agrees_with_direct_calls() {
    let handle = hobody_body_simplex(2);
    assert!(!handle.is_null());
    assert_eq!(unsafe { hobody_body_dim(handle) }, 2);

    let mut vol = f64::NAN;
    assert_eq!(
        unsafe { hobody_body_volume(handle, &mut vol) },
        HobodyStatus::Ok
    );
    let direct = hobody::Body::Polytope(hobody::Polytope::simplex(2));
    assert_eq!(vol, direct.volume());

    // Same seed and budget must reproduce the direct estimate bit-for-bit.
    let (mut value, mut se) = (f64::NAN, f64::NAN);
    assert_eq!(
        unsafe { hobody_petty_product(handle, 1, 4096, 11, &mut value, &mut se) },
        HobodyStatus::Ok
    );
    let reference = hobody::projection::petty_product(&direct, 1, 4096, 11).unwrap();
    assert_eq!(value, reference.value);
    assert_eq!(se, reference.std_error);

    assert_eq!(hobody_simplex_product_bound(2, 1), 1.5);
    unsafe { hobody_body_free(handle) };
}

#[test]
fn covariogram_and_projection_support_through_the_abi() {
    let square = hobody_body_cube(2);
    assert!(!square.is_null());
    let mut vol = f64::NAN;
    assert_eq!(
        unsafe { hobody_body_volume(square, &mut vol) },
        HobodyStatus::Ok
    );

    // Zero shifts intersect the body with itself m times.
    let zeros = [0.0f64; 4];
    let mut g = f64::NAN;
    assert_eq!(
        unsafe { hobody_covariogram(square, 2, zeros.as_ptr(), &mut g) },
        HobodyStatus::Ok
    );
    assert_eq!(g, vol);

    // A shift past the diameter empties the intersection.
    let far = [5.0f64, 0.0];
    assert_eq!(
        unsafe { hobody_covariogram(square, 1, far.as_ptr(), &mut g) },
        HobodyStatus::Ok
    );
    assert_eq!(g, 0.0);

    // Support values are exact and positively homogeneous.
    let theta = [0.6f64, -0.8];
    let scaled = [1.2f64, -1.6];
    let (mut h1, mut h2) = (f64::NAN, f64::NAN);
    assert_eq!(
        unsafe { hobody_proj_support(square, 1, theta.as_ptr(), &mut h1) },
        HobodyStatus::Ok
    );
    assert_eq!(
        unsafe { hobody_proj_support(square, 1, scaled.as_ptr(), &mut h2) },
        HobodyStatus::Ok
    );
    assert!((h2 - 2.0 * h1).abs() <= 1e-12 * h1.abs());

    let direct = hobody::Body::Polytope(hobody::Polytope::cube(2));
    let tuple = hobody::DirectionTuple::new(2, 1, theta.to_vec()).unwrap();
    assert_eq!(h1, hobody::projection::proj_support(&direct, &tuple).unwrap());

    let (mut dv, mut dse) = (f64::NAN, f64::NAN);
    assert_eq!(
        unsafe { hobody_diff_body_volume(square, 1, 4096, 3, &mut dv, &mut dse) },
        HobodyStatus::Ok
    );
    let dref =
        hobody::covariogram::diff_body_volume(&hobody::Polytope::cube(2), 1, 4096, 3).unwrap();
    assert_eq!(dv, dref.value);
    assert_eq!(dse, dref.std_error);

    unsafe { hobody_body_free(square) };
}

#[test]
fn status_codes_and_error_messages() {
    let mut out = f64::NAN;
    assert_eq!(
        unsafe { hobody_body_volume(ptr::null(), &mut out) },
        HobodyStatus::NullArgument
    );
    assert!(!last_error_text().is_empty());

    assert!(hobody_body_simplex(9).is_null());
    assert!(last_error_text().contains("dimension"));

    assert!(hobody_body_regular_polygon(2).is_null());
    assert!(last_error_text().contains("sides"));

    let ball = hobody_body_ball(2, 1.0);
    assert!(!ball.is_null());
    let shift = [0.1f64, 0.0];
    assert_eq!(
        unsafe { hobody_covariogram(ball, 1, shift.as_ptr(), &mut out) },
        HobodyStatus::InvalidArgument
    );
    assert!(last_error_text().contains("polytope"));
    assert_eq!(
        unsafe { hobody_petty_product(ball, 0, 4096, 1, &mut out, ptr::null_mut()) },
        HobodyStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hobody_petty_product(ball, 9, 4096, 1, &mut out, ptr::null_mut()) },
        HobodyStatus::InvalidArgument
    );
    unsafe { hobody_body_free(ball) };

    // Collinear points have no area.
    let line = [0.0f64, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
    assert!(unsafe { hobody_body_from_vertices(2, 4, line.as_ptr()) }.is_null());
    assert!(last_error_text().contains("degenerate"));

    assert!(hobody_ball_centroid_radius(0, 1).is_nan());
    assert_eq!(
        hobody_ball_centroid_radius(2, 1),
        hobody::centroid::ball_centroid_radius(2, 1)
    );
}

#[test]
fn vertex_and_json_constructors() {
    let coords = [1.0f64, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0, -1.0];
    let square = unsafe { hobody_body_from_vertices(2, 4, coords.as_ptr()) };
    assert!(!square.is_null());
    let mut vol = f64::NAN;
    assert_eq!(
        unsafe { hobody_body_volume(square, &mut vol) },
        HobodyStatus::Ok
    );
    assert_eq!(vol, 4.0);
    unsafe { hobody_body_free(square) };

    let spec = CString::new(r#"{"kind":"ball","n":3}"#).unwrap();
    let ball = unsafe { hobody_body_from_json(spec.as_ptr()) };
    assert!(!ball.is_null());
    assert_eq!(unsafe { hobody_body_dim(ball) }, 3);
    assert_eq!(
        unsafe { hobody_body_volume(ball, &mut vol) },
        HobodyStatus::Ok
    );
    assert_eq!(vol, hobody::Ellipsoid::unit_ball(3).volume());
    unsafe { hobody_body_free(ball) };

    let bad = CString::new(r#"{"kind":"dodecahedron"}"#).unwrap();
    assert!(unsafe { hobody_body_from_json(bad.as_ptr()) }.is_null());
    assert!(!last_error_text().is_empty());
}

#[test]
fn verify_suite_reports_through_the_abi() {
    let name = CString::new("chain").unwrap();
    let (mut checks, mut failures) = (0usize, 0usize);
    assert_eq!(
        unsafe { hobody_verify_suite(name.as_ptr(), 1000, 7, &mut checks, &mut failures) },
        HobodyStatus::Ok
    );
    assert!(checks > 0);
    assert_eq!(failures, 0);

    let json = unsafe { hobody_verify_suite_json(name.as_ptr(), 1000, 7) };
    assert!(!json.is_null());
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { hobody_string_free(json) };
    let reports: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(reports[0]["suite"], "chain");
    assert_eq!(reports[0]["rows"].as_array().unwrap().len(), checks);

    let unknown = CString::new("no-such-suite").unwrap();
    assert_eq!(
        unsafe { hobody_verify_suite(unknown.as_ptr(), 1000, 7, ptr::null_mut(), ptr::null_mut()) },
        HobodyStatus::InvalidArgument
    );
    // Budgets below the harness floor are rejected, not silently clamped.
    assert_eq!(
        unsafe { hobody_verify_suite(name.as_ptr(), 10, 7, ptr::null_mut(), ptr::null_mut()) },
        HobodyStatus::InvalidArgument
    );
}

#[test]
fn committed_header_is_in_sync() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/hobody.h"
    ))
    .expect("include/hobody.h exists");
    for needle in [
        "typedef struct hobody_body hobody_body;",
        "HOBODY_STATUS_OK = 0",
        "hobody_petty_product",
        "hobody_verify_suite_json",
        "hobody_body_from_json",
    ] {
        assert!(header.contains(needle), "header is missing `{needle}`");
    }
    assert!(header.is_ascii(), "header must stay plain ASCII");
}
