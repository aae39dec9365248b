//! Exercises the C ABI through raw pointers, the way a C caller would.

use blockrace_ffi::*;
use std::ffi::CString;
use std::io::Write;
use std::ptr;

unsafe fn make_params(q: f64) -> *mut BrxParams {
    let mut params = ptr::null_mut();
    assert_eq!(
        brx_params_new(q, 10.0, 2016, 0.0, &mut params),
        BrxStatus::Ok
    );
    assert!(!params.is_null());
    params
}

#[test]
fn params_lifecycle_and_validation() {
    unsafe {
        let params = make_params(0.4);
        brx_params_free(params);
        brx_params_free(ptr::null_mut()); // no-op

        let mut out = ptr::null_mut();
        assert_eq!(
            brx_params_new(1.5, 10.0, 2016, 0.0, &mut out),
            BrxStatus::InvalidArgument
        );
        assert_eq!(
            brx_params_new(0.4, -1.0, 2016, 0.0, &mut out),
            BrxStatus::InvalidArgument
        );
        assert_eq!(
            brx_params_new(0.4, 10.0, 2016, 0.0, ptr::null_mut()),
            BrxStatus::NullPointer
        );
    }
}

#[test]
fn exact_report_matches_closed_form() {
    unsafe {
        let params = make_params(0.5);
        let mut strategy = ptr::null_mut();
        assert_eq!(brx_strategy_one_plus_two(&mut strategy), BrxStatus::Ok);

        let mut report = std::mem::zeroed::<BrxReport>();
        assert_eq!(
            brx_gamma_exact(strategy, params, BRX_VARIANT_STANDARD, &mut report),
            BrxStatus::Ok
        );
        let mut formula = 0.0;
        assert_eq!(
            brx_closed_form_gamma_one_plus_two(0.5, &mut formula),
            BrxStatus::Ok
        );
        assert!((report.gamma - formula).abs() < 1e-12);
        assert!((report.e_g - 0.875).abs() < 1e-12);
        assert_eq!(report.stderr, 0.0);

        assert_eq!(
            brx_gamma_exact(strategy, params, 99, &mut report),
            BrxStatus::InvalidArgument
        );

        brx_strategy_free(strategy);
        brx_params_free(params);
    }
}

#[test]
fn threshold_kinds() {
    unsafe {
        let mut one_plus_two = ptr::null_mut();
        assert_eq!(brx_strategy_one_plus_two(&mut one_plus_two), BrxStatus::Ok);
        let mut kind = -1;
        let mut q = 0.0;
        assert_eq!(
            brx_threshold(one_plus_two, BRX_VARIANT_STANDARD, 0.0, &mut kind, &mut q),
            BrxStatus::Ok
        );
        assert_eq!(kind, BRX_THRESHOLD_ROOT);
        assert!((q - (2.0f64.sqrt() - 1.0)).abs() < 1e-8);

        let mut honest = ptr::null_mut();
        assert_eq!(brx_strategy_honest(&mut honest), BrxStatus::Ok);
        assert_eq!(
            brx_threshold(honest, BRX_VARIANT_STANDARD, 0.0, &mut kind, &mut q),
            BrxStatus::Ok
        );
        assert_eq!(kind, BRX_THRESHOLD_IDENTICALLY_ZERO);

        brx_strategy_free(honest);
        brx_strategy_free(one_plus_two);
    }
}

#[test]
fn strategy_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rules.csv");
    let mut file = std::fs::File::create(&path).unwrap();
    // the honest strategy as a word-rule file
    writeln!(file, "word,off_a,orph_a,orph_pub_a,off_h,orph_h").unwrap();
    writeln!(file, "A,1,0,0,0,0").unwrap();
    writeln!(file, "B,0,0,0,1,0").unwrap();
    drop(file);

    unsafe {
        let c_path = CString::new(path.to_str().unwrap()).unwrap();
        let mut strategy = ptr::null_mut();
        assert_eq!(
            brx_strategy_from_file(c_path.as_ptr(), &mut strategy),
            BrxStatus::Ok
        );
        let params = make_params(0.3);
        let mut report = std::mem::zeroed::<BrxReport>();
        assert_eq!(
            brx_gamma_exact(strategy, params, BRX_VARIANT_STANDARD, &mut report),
            BrxStatus::Ok
        );
        assert!((report.gamma - 0.3).abs() < 1e-12);
        brx_params_free(params);
        brx_strategy_free(strategy);

        let missing = CString::new("/no/such/file.csv").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            brx_strategy_from_file(missing.as_ptr(), &mut out),
            BrxStatus::IoOrParse
        );
    }
}

#[test]
fn simulation_is_deterministic() {
    unsafe {
        let params = make_params(0.4);
        let mut strategy = ptr::null_mut();
        assert_eq!(brx_strategy_one_plus_two(&mut strategy), BrxStatus::Ok);

        let mut a = std::mem::zeroed::<BrxReport>();
        let mut b = std::mem::zeroed::<BrxReport>();
        assert_eq!(
            brx_simulate_cycles(strategy, params, 20_000, 7, BRX_VARIANT_STANDARD, &mut a),
            BrxStatus::Ok
        );
        assert_eq!(
            brx_simulate_cycles(strategy, params, 20_000, 7, BRX_VARIANT_STANDARD, &mut b),
            BrxStatus::Ok
        );
        assert_eq!(a.gamma, b.gamma);
        assert!(a.stderr > 0.0);

        let mut revenue = 0.0;
        let mut stderr = 0.0;
        assert_eq!(
            brx_simulate_longrun(strategy, params, 1, 6, 2, 2, 5, &mut revenue, &mut stderr),
            BrxStatus::Ok
        );
        assert!(revenue > 0.0);
        // bad windows are rejected
        assert_eq!(
            brx_simulate_longrun(strategy, params, 1, 2, 2, 2, 5, &mut revenue, &mut stderr),
            BrxStatus::InvalidArgument
        );

        brx_strategy_free(strategy);
        brx_params_free(params);
    }
}
