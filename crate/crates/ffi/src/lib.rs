//! C ABI for `valivt`.
//!
//! Fields and polynomials are opaque handles created and freed on this side.
//! Results come back as NUL-terminated JSON strings owned by the caller and
//! released with [`valivt_string_free`]. Every entry point returns a
//! [`ValivtStatus`]; on failure [`valivt_last_error`] describes the error for
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::json;
use valivt::cli::{segments_json, slopes_json, solution_json, SCHEMA};
use valivt::error::Error;
use valivt::field::FieldSpec;
use valivt::ivt::{ivt_solve, IvtQuery};
use valivt::parse::parse_group_value;
use valivt::poly::Poly;
use valivt::tropical::TropicalForm;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValivtStatus {
    Ok = 0,
    /// A hypothesis witness: divisibility or exhausted residues.
    Witness = 2,
    /// Precision exhausted or verification failed.
    Precision = 3,
    /// Bad input: syntax, mismatched field, violated precondition.
    Input = 4,
    NullArgument = 5,
    Internal = 6,
}

/// A field model: `puiseux`, `laurent` or `padic:<p>`.
pub struct ValivtField(FieldSpec);

/// A polynomial over a field model.
pub struct ValivtPoly(Poly);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(kind: &str, message: &str) {
    let text = format!("{kind}: {message}").replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(err: Error) -> ValivtStatus {
    set_error(err.kind(), &err.to_string());
    match err.exit_code() {
        2 => ValivtStatus::Witness,
        3 => ValivtStatus::Precision,
        _ => ValivtStatus::Input,
    }
}

fn null(what: &str) -> ValivtStatus {
    set_error("NullArgument", &format!("{what} is null"));
    ValivtStatus::NullArgument
}

fn guard(f: impl FnOnce() -> ValivtStatus) -> ValivtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("Internal", "panic inside valivt");
        ValivtStatus::Internal
    })
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, ValivtStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("Utf8", &format!("{what} is not UTF-8"));
        ValivtStatus::Input
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> ValivtStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ValivtStatus::Ok
        }
        Err(_) => {
            set_error("Internal", "output contains NUL");
            ValivtStatus::Internal
        }
    }
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn valivt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn valivt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn valivt_field_new(name: *const c_char, out: *mut *mut ValivtField) -> ValivtStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let name = try_ffi!(text(name, "name"));
        match name.parse::<FieldSpec>() {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(ValivtField(spec)));
                ValivtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `field` must come from [`valivt_field_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn valivt_field_free(field: *mut ValivtField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Parses a polynomial in `X` over `field`.
///
/// # Safety
/// `field` must be a live handle, `src` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn valivt_poly_parse(
    field: *const ValivtField,
    src: *const c_char,
    out: *mut *mut ValivtPoly,
) -> ValivtStatus {
    guard(|| {
        if field.is_null() {
            return null("field");
        }
        if out.is_null() {
            return null("out");
        }
        let src = try_ffi!(text(src, "src"));
        match (*field).0.parse_poly(src) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(ValivtPoly(f)));
                ValivtStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `poly` must come from [`valivt_poly_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn valivt_poly_free(poly: *mut ValivtPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Newton polygon and tropical function as JSON:
/// `{"slopes":[{"h","mult"}],"phi":[{"segment","slope","intercept"}]}`.
///
/// # Safety
/// Handles must be live; `out` writable. Free the result with [`valivt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn valivt_newton_polygon_json(
    field: *const ValivtField,
    poly: *const ValivtPoly,
    out: *mut *mut c_char,
) -> ValivtStatus {
    guard(|| {
        if field.is_null() || poly.is_null() || out.is_null() {
            return null("field, poly or out");
        }
        let form = match TropicalForm::new(&(*field).0, &(*poly).0) {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        let v = json!({
            "schema": SCHEMA,
            "slopes": slopes_json(&form.newton_polygon()),
            "phi": segments_json(&form.segments()),
        });
        write_string(out, v.to_string())
    })
}

/// `φ_f(γ)` as text, e.g. `"1/2"` or `"inf"`.
///
/// # Safety
/// Handles must be live, `gamma` NUL-terminated, `out` writable. Free the
/// result with [`valivt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn valivt_phi_eval(
    field: *const ValivtField,
    poly: *const ValivtPoly,
    gamma: *const c_char,
    out: *mut *mut c_char,
) -> ValivtStatus {
    guard(|| {
        if field.is_null() || poly.is_null() || out.is_null() {
            return null("field, poly or out");
        }
        let gamma = try_ffi!(text(gamma, "gamma"));
        let result = parse_group_value(gamma).and_then(|g| valivt::tropical::phi_eval(&(*field).0, &(*poly).0, &g));
        match result {
            Ok(v) => write_string(out, v.to_string()),
            Err(e) => fail(e),
        }
    })
}

/// Solves `v(f(c)) = α` with `v(c)` between `v(a)` and `v(b)`; the solution
/// as JSON with keys `c`, `v_c`, `achieved`, `case`, `retries`.
///
/// # Safety
/// Handles must be live, strings NUL-terminated, `out` writable. Free the
/// result with [`valivt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn valivt_ivt_solve_json(
    field: *const ValivtField,
    poly: *const ValivtPoly,
    a: *const c_char,
    b: *const c_char,
    alpha: *const c_char,
    out: *mut *mut c_char,
) -> ValivtStatus {
    guard(|| {
        if field.is_null() || poly.is_null() || out.is_null() {
            return null("field, poly or out");
        }
        let spec = (*field).0;
        let (a, b, alpha) = (try_ffi!(text(a, "a")), try_ffi!(text(b, "b")), try_ffi!(text(alpha, "alpha")));
        let query = (|| {
            Ok::<_, Error>(IvtQuery {
                spec,
                f: (*poly).0.clone(),
                a: spec.parse_element(a)?,
                b: spec.parse_element(b)?,
                alpha: parse_group_value(alpha)?,
            })
        })();
        match query.and_then(|q| ivt_solve(&q)) {
            Ok(sol) => {
                let mut v = solution_json(&sol);
                v["schema"] = json!(SCHEMA);
                write_string(out, v.to_string())
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn valivt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
