use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dirichlet_lab_ffi::*;

fn last_error() -> String {
    let p = dlab_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn parse(spec: &str) -> *mut DlabFrequency {
    let spec = CString::new(spec).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { dlab_frequency_parse(spec.as_ptr(), &mut f) }, DlabStatus::Ok);
    f
}

#[test]
fn frequency_roundtrip() {
    let f = parse("log(n)");
    let mut v = 0.0;
    assert_eq!(unsafe { dlab_frequency_value(f, 3, &mut v) }, DlabStatus::Ok);
    assert_eq!(v, 3f64.ln());
    let mut r = DlabConditionResult {
        witness: 0.0,
        verdict: DlabVerdict::Inconclusive,
    };
    let status = unsafe { dlab_frequency_check(f, DlabConditionKind::Bohr, 1.0, 0.1, 1000, &mut r) };
    assert_eq!(status, DlabStatus::Ok);
    assert!((r.witness - 2f64.ln()).abs() < 1e-12);
    assert_eq!(r.verdict, DlabVerdict::EvidenceHolds);
    unsafe { dlab_frequency_free(f) };
}

#[test]
fn errors_carry_status_and_message() {
    let bad = CString::new("n^2").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { dlab_frequency_parse(bad.as_ptr(), &mut f) },
        DlabStatus::InvalidFrequency
    );
    assert!(f.is_null());
    assert!(last_error().contains("n^2"));

    assert_eq!(
        unsafe { dlab_frequency_parse(ptr::null(), &mut f) },
        DlabStatus::NullPointer
    );
    assert!(last_error().contains("spec"));

    let values = [0.0, 2.0, 1.0];
    let status = unsafe { dlab_frequency_explicit(values.as_ptr(), values.len(), &mut f) };
    assert_eq!(status, DlabStatus::InvalidFrequency);

    let mut v = 0.0;
    assert_eq!(unsafe { dlab_poisson(0.0, 1.0, &mut v) }, DlabStatus::InvalidParameter);
    assert_eq!(unsafe { dlab_model_dim(ptr::null()) }, 0);
}

#[test]
fn polynomial_eval_and_perron() {
    let values = [1.0, 2.0];
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { dlab_frequency_explicit(values.as_ptr(), 2, &mut f) },
        DlabStatus::Ok
    );
    let re = [1.0, 1.0];
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { dlab_polynomial_new(f, re.as_ptr(), ptr::null(), 2, &mut d) },
        DlabStatus::Ok
    );
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(
        unsafe { dlab_polynomial_eval(d, 0.0, 0.0, &mut a, &mut b) },
        DlabStatus::Ok
    );
    assert_eq!((a, b), (2.0, 0.0));
    assert_eq!(
        unsafe { dlab_perron_transform(d, 1.0, 1.0, 2.0, &mut a, &mut b) },
        DlabStatus::Ok
    );
    assert!((a - (-2f64).exp()).abs() < 1e-15);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { dlab_polynomial_to_json(d, &mut json) }, DlabStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    assert!(
        text.contains("explicit") || text.contains("1.0") || text.contains('1'),
        "{text}"
    );
    unsafe {
        dlab_string_free(json);
        dlab_polynomial_free(d);
        dlab_frequency_free(f);
    }
}

#[test]
fn l2_norm_is_parseval() {
    let f = parse("log(n)");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dlab_model_new(f, 6, 1e-9, false, &mut m) }, DlabStatus::Ok);
    assert_eq!(unsafe { dlab_model_dim(m) }, 3);
    let re = [1.0, 0.5, -1.0, 0.0, 2.0, 1.0];
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { dlab_polynomial_new(f, re.as_ptr(), ptr::null(), 6, &mut d) },
        DlabStatus::Ok
    );
    let mut r = DlabNormResult {
        value: 0.0,
        std_error: 0.0,
    };
    let status = unsafe { dlab_lp_norm(d, m, 2.0, DlabNormMethod::Flow, 0, 1e6, 0.01, 0, &mut r) };
    assert_eq!(status, DlabStatus::Ok);
    // cross terms of the finite flow average are O(1/(T·min gap)) = O(1e-5)
    let exact = re.iter().map(|a| a * a).sum::<f64>().sqrt();
    assert!((r.value - exact).abs() < 1e-4, "{r:?}");
    let status = unsafe { dlab_lp_norm(d, m, 0.5, DlabNormMethod::Haar, 100, 0.0, 0.0, 0, &mut r) };
    assert_eq!(status, DlabStatus::InvalidExponent);
    unsafe {
        dlab_polynomial_free(d);
        dlab_model_free(m);
        dlab_frequency_free(f);
    }
}

#[test]
fn ambiguous_relations_need_the_independence_flag() {
    let f = parse("sqrt(log(n))");
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { dlab_model_new(f, 16, 1e-9, false, &mut m) },
        DlabStatus::AmbiguousRelation
    );
    assert_eq!(unsafe { dlab_model_new(f, 16, 1e-9, true, &mut m) }, DlabStatus::Ok);
    assert_eq!(unsafe { dlab_model_dim(m) }, 15);
    unsafe {
        dlab_model_free(m);
        dlab_frequency_free(f);
    }
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "dirichlet_lab.h"

int main(void) {
    DlabFrequency *f = NULL;
    if (dlab_frequency_parse("log(n)", &f) != DLAB_STATUS_OK) return 1;
    double re[2] = {1.0, 1.0};
    DlabPolynomial *d = NULL;
    if (dlab_polynomial_new(f, re, NULL, 2, &d) != DLAB_STATUS_OK) return 2;
    double a = 0, b = 0;
    if (dlab_polynomial_eval(d, 1.0, 0.0, &a, &b) != DLAB_STATUS_OK) return 3;
    if (fabs(a - 1.5) > 1e-15 || b != 0.0) return 4;
    if (dlab_poisson(-1.0, 0.0, &a) != DLAB_STATUS_INVALID_PARAMETER) return 5;
    printf("%s\n", dlab_last_error_message());
    dlab_polynomial_free(d);
    dlab_frequency_free(f);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libdirichlet_lab_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    let bin = tmp.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("cannot run cc");
    assert!(status.success());
    let output = Command::new(&bin).output().unwrap();
    assert!(output.status.success(), "exit {:?}", output.status.code());
    assert!(String::from_utf8_lossy(&output.stdout).contains("u must be > 0"));
}
