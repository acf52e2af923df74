//! Drives the C ABI end to end from Rust: construction, accessors, JSON
//! round trip, solving, centering, the exact oracle, and error paths.

use std::ffi::{CStr, CString};
use std::ptr;

use pathlab_ffi::{
    pathlab_center, pathlab_gap, pathlab_last_error_message, pathlab_lp_cols,
    pathlab_lp_free, pathlab_lp_from_json, pathlab_lp_lw, pathlab_lp_rows, pathlab_lp_to_json,
    pathlab_min_value_oracle, pathlab_solve, pathlab_string_free, PathlabLp, PathlabStatus,
};

fn make_lw(r: u32, t: f64) -> *mut PathlabLp {
    let mut handle: *mut PathlabLp = ptr::null_mut();
    let status = unsafe { pathlab_lp_lw(r, t, &mut handle) };
    assert_eq!(status, PathlabStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn generator_reports_the_right_shape() {
    let lp = make_lw(3, 10.0);
    unsafe {
        assert_eq!(pathlab_lp_cols(lp), 6);
        assert_eq!(pathlab_lp_rows(lp), 10);
        pathlab_lp_free(lp);
    }
}

#[test]
fn json_round_trip_preserves_the_shape() {
    let lp = make_lw(2, 4.0);
    let mut text: *mut std::ffi::c_char = ptr::null_mut();
    unsafe {
        assert_eq!(pathlab_lp_to_json(lp, &mut text), PathlabStatus::Ok);
        let owned = CStr::from_ptr(text).to_str().unwrap().to_owned();
        pathlab_string_free(text);

        let cjson = CString::new(owned).unwrap();
        let mut back: *mut PathlabLp = ptr::null_mut();
        assert_eq!(
            pathlab_lp_from_json(cjson.as_ptr(), &mut back),
            PathlabStatus::Ok
        );
        assert_eq!(pathlab_lp_rows(back), pathlab_lp_rows(lp));
        assert_eq!(pathlab_lp_cols(back), pathlab_lp_cols(lp));
        pathlab_lp_free(back);
        pathlab_lp_free(lp);
    }
}

#[test]
fn solve_reaches_the_known_optimum() {
    let lp = make_lw(2, 10.0);
    unsafe {
        let n = pathlab_lp_cols(lp);
        let mut x = vec![0.0_f64; n];
        let mut value = f64::NAN;
        let status = pathlab_solve(lp, 1e-8, x.as_mut_ptr(), &mut value);
        assert_eq!(status, PathlabStatus::Ok);
        assert!(value.abs() < 1e-6, "value {value} should be ~0");
        assert!(x.iter().all(|v| v.is_finite()));

        let mut gap = f64::NAN;
        assert_eq!(pathlab_gap(lp, x.as_ptr(), &mut gap), PathlabStatus::Ok);
        assert!((0.0..1e-6).contains(&gap));
        pathlab_lp_free(lp);
    }
}

#[test]
fn centering_at_infinite_mu_gives_the_analytic_center() {
    let lp = make_lw(2, 4.0);
    unsafe {
        let n = pathlab_lp_cols(lp);
        let mut x = vec![0.0_f64; n];
        let mut decrement = f64::NAN;
        let status = pathlab_center(
            lp,
            f64::INFINITY,
            1e-10,
            x.as_mut_ptr(),
            &mut decrement,
        );
        assert_eq!(status, PathlabStatus::Ok);
        assert!(decrement <= 1e-10);
        pathlab_lp_free(lp);
    }
}

#[test]
fn exact_oracle_matches_the_recorded_optimum() {
    let lp = make_lw(2, 10.0);
    unsafe {
        let mut value = f64::NAN;
        assert_eq!(
            pathlab_min_value_oracle(lp, 0, &mut value),
            PathlabStatus::Ok
        );
        assert!(value.abs() < 1e-12);
        pathlab_lp_free(lp);
    }
}

#[test]
fn null_arguments_are_rejected_not_dereferenced() {
    unsafe {
        assert_eq!(
            pathlab_lp_from_json(ptr::null(), ptr::null_mut()),
            PathlabStatus::NullPointer
        );
        assert_eq!(pathlab_lp_rows(ptr::null()), 0);
        assert_eq!(pathlab_lp_cols(ptr::null()), 0);
        let mut value = f64::NAN;
        assert_eq!(
            pathlab_min_value_oracle(ptr::null(), 0, &mut value),
            PathlabStatus::NullPointer
        );
        pathlab_lp_free(ptr::null_mut());
        pathlab_string_free(ptr::null_mut());
    }
}

#[test]
fn bad_parameters_set_a_readable_error_message() {
    let mut handle: *mut PathlabLp = ptr::null_mut();
    unsafe {
        let status = pathlab_lp_lw(0, 4.0, &mut handle);
        assert_eq!(status, PathlabStatus::InvalidArgument);
        let msg = CStr::from_ptr(pathlab_last_error_message())
            .to_str()
            .unwrap();
        assert!(!msg.is_empty());

        let garbage = CString::new("{not json").unwrap();
        assert_eq!(
            pathlab_lp_from_json(garbage.as_ptr(), &mut handle),
            PathlabStatus::JsonError
        );
    }
}

#[test]
fn centering_rejects_a_non_positive_mu() {
    let lp = make_lw(2, 4.0);
    unsafe {
        let n = pathlab_lp_cols(lp);
        let mut x = vec![0.0_f64; n];
        let mut decrement = f64::NAN;
        let status = pathlab_center(lp, -1.0, 1e-10, x.as_mut_ptr(), &mut decrement);
        assert_eq!(status, PathlabStatus::InvalidArgument);
        pathlab_lp_free(lp);
    }
}
