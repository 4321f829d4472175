use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use serde_json::Value;
use valivt_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { valivt_string_free(s) };
    out
}

fn last_error() -> String {
    let p = valivt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

struct Handles {
    field: *mut ValivtField,
    poly: *mut ValivtPoly,
}

impl Handles {
    fn new(field: &str, poly: &str) -> Handles {
        let mut f = ptr::null_mut();
        let mut p = ptr::null_mut();
        unsafe {
            assert_eq!(valivt_field_new(cs(field).as_ptr(), &mut f), ValivtStatus::Ok);
            assert_eq!(valivt_poly_parse(f, cs(poly).as_ptr(), &mut p), ValivtStatus::Ok);
        }
        Handles { field: f, poly: p }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            valivt_poly_free(self.poly);
            valivt_field_free(self.field);
        }
    }
}

#[test]
fn polygon_and_phi() {
    let h = Handles::new("puiseux", "X^2 - t");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { valivt_newton_polygon_json(h.field, h.poly, &mut out) }, ValivtStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["slopes"][0]["h"], "1/2");
    assert_eq!(v["slopes"][0]["mult"], 2);
    assert_eq!(unsafe { valivt_phi_eval(h.field, h.poly, cs("1/4").as_ptr(), &mut out) }, ValivtStatus::Ok);
    assert_eq!(take(out), "1/2");
    assert_eq!(unsafe { valivt_phi_eval(h.field, h.poly, cs("inf").as_ptr(), &mut out) }, ValivtStatus::Ok);
    assert_eq!(take(out), "1/1");
}

#[test]
fn ivt_solve_and_errors() {
    let h = Handles::new("puiseux", "X^2 - t");
    let mut out = ptr::null_mut();
    let st = unsafe { valivt_ivt_solve_json(h.field, h.poly, cs("t").as_ptr(), cs("1").as_ptr(), cs("1/2").as_ptr(), &mut out) };
    assert_eq!(st, ValivtStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["c"], "t^(1/4)");
    assert_eq!(v["achieved"], "1/2");
    assert!(valivt_last_error().is_null());

    let l = Handles::new("laurent", "X^2");
    let st = unsafe { valivt_ivt_solve_json(l.field, l.poly, cs("t").as_ptr(), cs("t^-1").as_ptr(), cs("1").as_ptr(), &mut out) };
    assert_eq!(st, ValivtStatus::Witness);
    assert!(last_error().starts_with("DivisibilityError"));
}

#[test]
fn bad_input_and_nulls() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { valivt_field_new(cs("padic:4").as_ptr(), &mut f) }, ValivtStatus::Input);
    assert!(f.is_null());
    assert_eq!(unsafe { valivt_field_new(ptr::null(), &mut f) }, ValivtStatus::NullArgument);
    let h = Handles::new("padic:3", "X - 1");
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { valivt_poly_parse(h.field, cs("X^^2").as_ptr(), &mut p) }, ValivtStatus::Input);
    assert!(last_error().starts_with("SyntaxError"));
    assert_eq!(unsafe { valivt_newton_polygon_json(h.field, ptr::null(), &mut ptr::null_mut()) }, ValivtStatus::NullArgument);
    unsafe {
        valivt_string_free(ptr::null_mut());
        valivt_poly_free(ptr::null_mut());
        valivt_field_free(ptr::null_mut());
    }
}

#[test]
fn version() {
    let v = unsafe { CStr::from_ptr(valivt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_abi() {
    let h = std::fs::read_to_string(header().join("valivt.h")).unwrap();
    for name in [
        "typedef struct ValivtField ValivtField;",
        "typedef struct ValivtPoly ValivtPoly;",
        "VALIVT_STATUS_WITNESS = 2",
        "valivt_field_new(",
        "valivt_poly_parse(",
        "valivt_newton_polygon_json(",
        "valivt_phi_eval(",
        "valivt_ivt_solve_json(",
        "valivt_last_error(void)",
        "valivt_string_free(",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_lib() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // The test binary sits in target/<profile>/deps next to the static library.
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = [deps.join("libvalivt_ffi.a"), deps.parent().unwrap().join("libvalivt_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("libvalivt_ffi.a not built");
    let dir = std::env::temp_dir().join(format!("valivt-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let exe = dir.join("smoke");
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("t^(1/4)"));
    std::fs::remove_dir_all(&dir).ok();
}
