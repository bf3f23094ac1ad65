use std::ffi::{CStr, CString};
use std::ptr;

use waiter_client_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { wc_string_free(p) };
    s
}

fn last_error() -> String {
    take_string(wc_last_error_message())
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/waiter_client.h")).unwrap();
    for name in ["wc_game_new", "wc_play_match", "wc_solve", "wc_phi_wc", "wc_last_error_message", "WC_STATUS_CAP_EXCEEDED"] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn game_round_trip_and_rule_errors() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(wc_game_new(6, 1, WcConvention::WaiterClient, &mut g), WcStatus::Ok);
        assert!(!wc_game_is_terminal(g));
        assert_eq!(wc_game_resolve_round(g, [0u32, 1].as_ptr(), 2, 1), WcStatus::Ok);
        let mut owner = WcOwner::Free;
        assert_eq!(wc_game_owner(g, 1, &mut owner), WcStatus::Ok);
        assert_eq!(owner, WcOwner::Client);
        assert_eq!(wc_game_owner(g, 0, &mut owner), WcStatus::Ok);
        assert_eq!(owner, WcOwner::Waiter);
        assert_eq!(wc_game_round(g), 1);
        // wrong offer size in a Waiter-Client round
        assert_eq!(wc_game_resolve_round(g, [2u32].as_ptr(), 1, 2), WcStatus::RuleViolation);
        assert!(!last_error().is_empty());
        assert_eq!(wc_game_owner(g, 99, &mut owner), WcStatus::InvalidArgument);
        wc_game_free(g);
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(wc_game_new(6, 1, WcConvention::WaiterClient, ptr::null_mut()), WcStatus::NullPointer);
        assert!(last_error().contains("out"));
        let mut x = 0.0;
        assert_eq!(wc_phi_wc(ptr::null(), 1, &mut x), WcStatus::NullPointer);
        wc_game_free(ptr::null_mut());
        wc_string_free(ptr::null_mut());
    }
}

#[test]
fn match_and_predicate() {
    let wspec = CString::new("connectivity").unwrap();
    let cspec = CString::new("random").unwrap();
    let pred = CString::new("connected").unwrap();
    let (mut w, mut c, mut json) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(wc_waiter_new(wspec.as_ptr(), 8, 3, &mut w), WcStatus::Ok);
        assert_eq!(wc_client_new(cspec.as_ptr(), 8, &mut c), WcStatus::Ok);
        assert_eq!(wc_play_match(w, c, 8, 3, WcConvention::WaiterClient, 7, &mut json), WcStatus::Ok);
        let t = CString::new(take_string(json)).unwrap();
        let mut holds = false;
        assert_eq!(wc_evaluate_predicate(pred.as_ptr(), t.as_ptr(), &mut holds), WcStatus::Ok);
        assert!(holds);
        wc_waiter_free(w);
        wc_client_free(c);
    }
}

#[test]
fn bad_spec_is_a_parse_or_parameter_error() {
    let spec = CString::new("no-such-waiter").unwrap();
    let mut w = ptr::null_mut();
    let st = unsafe { wc_waiter_new(spec.as_ptr(), 8, 3, &mut w) };
    assert!(matches!(st, WcStatus::ParseError | WcStatus::InvalidArgument), "{st:?}");
    assert!(w.is_null());
    assert!(last_error().contains("no-such-waiter"));
}

#[test]
fn family_potentials_and_solver() {
    let spec = CString::new("cliques(4,3)").unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(wc_family_new(spec.as_ptr(), &mut f), WcStatus::Ok);
        assert_eq!(wc_family_len(f), 4);
        let mut phi = 0.0;
        assert_eq!(wc_phi_wc(f, 1, &mut phi), WcStatus::Ok);
        assert!((phi - 4.0 / 8.0).abs() < 1e-12);
        assert_eq!(wc_phi_cw(f, 1, &mut phi), WcStatus::Ok);
        assert!((phi - 4.0 / 8.0).abs() < 1e-12);
        let mut json = ptr::null_mut();
        assert_eq!(wc_solve(f, false, 1, WcConvention::WaiterClient, &mut json), WcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert!(v.get("winner").is_some());
        wc_family_free(f);
    }
}

#[test]
fn solver_cap_maps_to_cap_code() {
    let spec = CString::new("cliques(6,3)").unwrap();
    let mut f = ptr::null_mut();
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(wc_family_new(spec.as_ptr(), &mut f), WcStatus::Ok);
        assert_eq!(wc_solve(f, false, 1, WcConvention::WaiterClient, &mut json), WcStatus::CapExceeded);
        assert!(json.is_null());
        wc_family_free(f);
    }
}

#[test]
fn experiment_json_round_trip() {
    let cfg = r#"{"n":[6],"q":[1],"eta":[],"convention":"WC","waiter":"random","client":"random",
        "predicate":"connected","trials":4,"seed":3,"timing":false}"#;
    let cfg = CString::new(cfg).unwrap();
    let mut json = ptr::null_mut();
    let st = unsafe { wc_run_experiment(cfg.as_ptr(), &mut json) };
    assert_eq!(st, WcStatus::Ok, "{}", last_error());
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["rows"][0]["trials"], 4);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(wc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compiles tests/c/smoke.c against the header and the cdylib. Skipped when
/// no C compiler or built library is around.
#[test]
fn c_program_links_and_runs() {
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let Some(lib_dir) = exe.parent().and_then(|d| d.parent()) else { return };
    let lib = lib_dir.join(format!("{}waiter_client_ffi{}", std::env::consts::DLL_PREFIX, std::env::consts::DLL_SUFFIX));
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("wc-smoke-{}", std::process::id()));
    let status = std::process::Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(lib_dir)
        .arg("-lwaiter_client_ffi")
        .arg("-o")
        .arg(&out)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C compile failed");
    let run = std::process::Command::new(&out).env("LD_LIBRARY_PATH", lib_dir).output().unwrap();
    std::fs::remove_file(&out).ok();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("no-such"));
}
