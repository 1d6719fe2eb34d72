//! Exercises the C entry points from Rust, including error paths and the
//! generated header.

use std::ffi::{CStr, CString};
use std::ptr;

use ybhom_capi::*;

fn homflypt(m: usize) -> *mut YbhOperator {
    let mut op: *mut YbhOperator = ptr::null_mut();
    let status = unsafe { ybh_operator_homflypt(m, &mut op) };
    assert_eq!(status, YbhStatus::Ok);
    assert!(!op.is_null());
    op
}

fn last_error() -> String {
    let msg = ybh_last_error_message();
    assert!(!msg.is_null());
    unsafe { CStr::from_ptr(msg) }.to_str().unwrap().to_string()
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { ybh_string_free(s) };
    owned
}

#[test]
fn lifecycle_and_ybe() {
    let op = homflypt(3);
    let mut holds = false;
    assert_eq!(unsafe { ybh_verify_ybe(op, &mut holds) }, YbhStatus::Ok);
    assert!(holds);
    let mut unital = false;
    assert_eq!(unsafe { ybh_column_unital(op, &mut unital) }, YbhStatus::Ok);
    assert!(unital);
    unsafe { ybh_operator_free(op) };
}

#[test]
fn inverse_pairing() {
    let op = homflypt(2);
    let mut inv: *mut YbhOperator = ptr::null_mut();
    assert_eq!(
        unsafe { ybh_operator_homflypt_inverse(2, &mut inv) },
        YbhStatus::Ok
    );
    let mut holds = false;
    assert_eq!(
        unsafe { ybh_verify_inverse(op, inv, &mut holds) },
        YbhStatus::Ok
    );
    assert!(holds);
    // An operator is not its own inverse here.
    assert_eq!(
        unsafe { ybh_verify_inverse(op, op, &mut holds) },
        YbhStatus::Ok
    );
    assert!(!holds);
    unsafe { ybh_operator_free(op) };
    unsafe { ybh_operator_free(inv) };
}

#[test]
fn kauffman_is_not_column_unital() {
    let mut op: *mut YbhOperator = ptr::null_mut();
    assert_eq!(unsafe { ybh_operator_kauffman(&mut op) }, YbhStatus::Ok);
    let mut holds = false;
    assert_eq!(unsafe { ybh_verify_ybe(op, &mut holds) }, YbhStatus::Ok);
    assert!(holds);
    let mut unital = true;
    assert_eq!(unsafe { ybh_column_unital(op, &mut unital) }, YbhStatus::Ok);
    assert!(!unital);
    unsafe { ybh_operator_free(op) };
}

#[test]
fn invalid_arguments_set_the_error_message() {
    let mut op: *mut YbhOperator = ptr::null_mut();
    assert_eq!(
        unsafe { ybh_operator_homflypt(0, &mut op) },
        YbhStatus::InvalidArgument
    );
    assert!(op.is_null());
    assert!(!last_error().is_empty());

    let mut holds = false;
    assert_eq!(
        unsafe { ybh_verify_ybe(ptr::null(), &mut holds) },
        YbhStatus::InvalidArgument
    );
    assert_eq!(last_error(), "null pointer");

    unsafe { ybh_operator_free(ptr::null_mut()) };
    unsafe { ybh_string_free(ptr::null_mut()) };
}

#[test]
fn matrix_text_round_trips() {
    let op = homflypt(2);
    let mut text: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { ybh_operator_matrix_text(op, &mut text) },
        YbhStatus::Ok
    );
    let text = take_string(text);
    let parsed = ybhom::ybop::YBOperator::from_matrix_text(2, &text).unwrap();
    assert_eq!(parsed, ybhom::ybop::YBOperator::homflypt(2).unwrap());
    unsafe { ybh_operator_free(op) };
}

#[test]
fn homology_json_reports_and_matches() {
    let op = homflypt(2);
    let label = CString::new("homflypt").unwrap();
    let expect = CString::new("thm").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe {
        ybh_homology_json(
            op,
            label.as_ptr(),
            2,
            ptr::null(),
            expect.as_ptr(),
            ptr::null(),
            &mut json,
        )
    };
    assert_eq!(status, YbhStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(report["m"], 2);
    assert_eq!(report["n"], 2);
    assert_eq!(report["ring"], "Q[y]");
    assert_eq!(report["free_rank"], 2);
    assert_eq!(report["match"], true);
    unsafe { ybh_operator_free(op) };
}

#[test]
fn homology_rejects_bad_tags() {
    let op = homflypt(2);
    let label = CString::new("homflypt").unwrap();
    let bad_ring = CString::new("zz").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe {
        ybh_homology_json(
            op,
            label.as_ptr(),
            2,
            bad_ring.as_ptr(),
            ptr::null(),
            ptr::null(),
            &mut json,
        )
    };
    assert_eq!(status, YbhStatus::InvalidArgument);
    assert!(json.is_null());
    assert!(last_error().contains("zz"));
    unsafe { ybh_operator_free(op) };
}

#[test]
fn broken_chain_status() {
    let mut op: *mut YbhOperator = ptr::null_mut();
    assert_eq!(unsafe { ybh_operator_jones(2, &mut op) }, YbhStatus::Ok);
    let label = CString::new("jones").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe {
        ybh_homology_json(
            op,
            label.as_ptr(),
            2,
            ptr::null(),
            ptr::null(),
            ptr::null(),
            &mut json,
        )
    };
    assert_eq!(status, YbhStatus::BrokenChain);
    assert!(json.is_null());
    assert!(last_error().contains("nonzero"));
    unsafe { ybh_operator_free(op) };
}

#[test]
fn header_is_generated_with_the_full_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ybhom.h"))
        .expect("header exists after build");
    assert!(header.contains("typedef struct YbhOperator YbhOperator;"));
    for symbol in [
        "ybh_operator_homflypt",
        "ybh_operator_homflypt_inverse",
        "ybh_operator_jones",
        "ybh_operator_identity",
        "ybh_operator_kauffman",
        "ybh_operator_free",
        "ybh_verify_ybe",
        "ybh_verify_inverse",
        "ybh_column_unital",
        "ybh_operator_matrix_text",
        "ybh_homology_json",
        "ybh_string_free",
        "ybh_last_error_message",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
