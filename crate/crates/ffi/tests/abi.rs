use std::ffi::{c_char, c_int, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use spectral_torsion_ffi::*;

fn fixture(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = st_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    st_string_free(s);
    out
}

#[test]
fn run_a_scenario_through_handles() {
    unsafe {
        let mut scenario = ptr::null_mut();
        let path = fixture("negative_control.json");
        assert_eq!(
            st_scenario_from_file(path.as_ptr(), &mut scenario),
            StStatus::Ok
        );
        assert_eq!(st_scenario_m(scenario), 2);

        let mut report = ptr::null_mut();
        assert_eq!(st_run_report(scenario, 1e-9, &mut report), StStatus::Ok);
        assert_eq!(st_report_pass(report), 0);
        let n = st_report_diff_count(report);
        assert_eq!(n, 12);
        let mut failing = Vec::new();
        for i in 0..n {
            let (mut name, mut pass) = (ptr::null_mut(), -1 as c_int);
            assert_eq!(
                st_report_diff(report, i, &mut name, &mut pass),
                StStatus::Ok
            );
            let name = take(name);
            if pass == 0 {
                failing.push(name);
            }
        }
        assert_eq!(failing, ["terms.l2 - paper.l2"]);

        let (mut name, mut pass) = (ptr::null_mut(), 0);
        assert_eq!(
            st_report_diff(report, n, &mut name, &mut pass),
            StStatus::Usage
        );
        assert!(last_error().contains("out of range"));

        let mut json = ptr::null_mut();
        assert_eq!(st_report_to_json(report, &mut json), StStatus::Ok);
        let json = take(json);
        assert!(json.contains("\"schema\": 1"));

        st_report_free(report);
        st_scenario_free(scenario);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut scenario = ptr::null_mut();
        let path = fixture("zero_field.json");
        assert_eq!(
            st_scenario_from_file(path.as_ptr(), &mut scenario),
            StStatus::InvalidScenario
        );
        assert!(last_error().contains("V.value"));
        assert!(scenario.is_null());

        let missing = CString::new("/nonexistent/scenario.json").unwrap();
        assert_eq!(
            st_scenario_from_file(missing.as_ptr(), &mut scenario),
            StStatus::Io
        );

        let bad = CString::new("{not json").unwrap();
        assert_eq!(
            st_scenario_from_json(bad.as_ptr(), &mut scenario),
            StStatus::Parse
        );
        assert_eq!(
            st_scenario_from_json(ptr::null(), &mut scenario),
            StStatus::NullPointer
        );
        let invalid = [0xffu8, 0];
        assert_eq!(
            st_scenario_from_json(invalid.as_ptr().cast(), &mut scenario),
            StStatus::InvalidUtf8
        );

        let mut report = ptr::null_mut();
        assert_eq!(
            st_run_report(ptr::null(), 1e-9, &mut report),
            StStatus::NullPointer
        );
        assert_eq!(st_report_pass(ptr::null()), -1);

        let (mut out, mut pass) = (ptr::null_mut(), 0);
        assert_eq!(
            st_verify_sweep(2, 0, 0, 0, 1e-9, &mut out, &mut pass),
            StStatus::Usage
        );
        let name = CString::new("bogus").unwrap();
        assert_eq!(
            st_lemma_check(name.as_ptr(), 0, &mut out, &mut pass),
            StStatus::Usage
        );

        st_scenario_free(ptr::null_mut());
        st_report_free(ptr::null_mut());
        st_string_free(ptr::null_mut());
    }
}

#[test]
fn successful_calls_clear_the_error() {
    unsafe {
        let mut scenario = ptr::null_mut();
        assert_eq!(
            st_scenario_from_json(ptr::null(), &mut scenario),
            StStatus::NullPointer
        );
        let path = fixture("constant_field.json");
        assert_eq!(
            st_scenario_from_file(path.as_ptr(), &mut scenario),
            StStatus::Ok
        );
        assert!(st_last_error().is_null());
        st_scenario_free(scenario);
    }
}

#[test]
fn sweeps_and_lemmas_return_json() {
    unsafe {
        let (mut out, mut pass) = (ptr::null_mut(), -1);
        let name = CString::new("sphere").unwrap();
        assert_eq!(
            st_lemma_check(name.as_ptr(), 0, &mut out, &mut pass),
            StStatus::Ok
        );
        assert_eq!(pass, 1);
        let json: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(json["name"], "sphere");

        assert_eq!(
            st_verify_sweep(3, 1, 5, 1, 1e-9, &mut out, &mut pass),
            StStatus::Ok
        );
        let json: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(json["mode"], "float");
        assert_eq!(pass, 0);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let lib = target_dir().join("libspectral_torsion_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!(
            "skipping: no C compiler or static library at {}",
            lib.display()
        );
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe)
        .arg(fixture("constant_field.json").to_str().unwrap())
        .arg(fixture("negative_control.json").to_str().unwrap())
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout.contains("terms.l2 - paper.l2"));
    assert!(stdout.contains("1 failing comparisons"));
}
