//! C interface to `lcong`.
//!
//! Characters and field elements cross the boundary as opaque handles that
//! the caller releases with the matching `*_free` function. Every fallible
//! call returns an [`LcongStatus`]; on failure a message is available from
//! [`lcong_last_error_message`] on the same thread. Strings returned through
//! out-parameters are owned by the caller and released with
//! [`lcong_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lcong::bernoulli::{bernoulli_number, euler_number, generalized_bernoulli, l_value, script_l};
use lcong::characters::{CharacterKey, DirichletCharacter};
use lcong::cli::config::{Job, SweepConfig};
use lcong::cli::run_sweep;
use lcong::cyclotomic::CyclotomicElement;
use lcong::rational::{format_rational, Valuation};
use lcong::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcongStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The arguments lie outside the hypotheses of the computation.
    Domain = 3,
    /// The requested value is not defined (for example `𝓛` for a trivial character).
    Undefined = 4,
    /// The congruence check ran and at least one verdict failed.
    CongruenceFails = 5,
    Internal = 6,
}

/// A Dirichlet character of prime-power modulus.
pub struct LcongCharacter(DirichletCharacter);

/// An element of a cyclotomic field, stored exactly.
pub struct LcongValue(CyclotomicElement);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg.into()));
}

fn fail(status: LcongStatus, msg: impl Into<String>) -> LcongStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> LcongStatus {
    match e {
        Error::UndefinedScriptL { .. } | Error::DivisionByZero => LcongStatus::Undefined,
        Error::Domain(_) | Error::Parity { .. } => LcongStatus::Domain,
        Error::TableTooLarge { .. } => LcongStatus::Internal,
        _ => LcongStatus::InvalidArgument,
    }
}

fn from_error(e: Error) -> LcongStatus {
    let status = status_of(&e);
    fail(status, e.to_string())
}

/// Runs `f`, turning a panic into [`LcongStatus::Internal`].
fn guard(f: impl FnOnce() -> LcongStatus) -> LcongStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(LcongStatus::Internal, "internal panic"),
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, LcongStatus> {
    if s.is_null() {
        return Err(fail(LcongStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(LcongStatus::InvalidArgument, "string argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> LcongStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            LcongStatus::Ok
        }
        Err(_) => fail(LcongStatus::Internal, "string contains a NUL byte"),
    }
}

unsafe fn write_value(out: *mut *mut LcongValue, r: lcong::Result<CyclotomicElement>) -> LcongStatus {
    match r {
        Ok(v) => {
            *out = Box::into_raw(Box::new(LcongValue(v)));
            LcongStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(LcongStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message describing the last failure on this thread, or null if there was
/// none. Release it with [`lcong_string_free`].
#[no_mangle]
pub extern "C" fn lcong_last_error_message() -> *mut c_char {
    LAST_ERROR
        .with(|e| e.borrow().clone())
        .and_then(|m| CString::new(m).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lcong_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The character mod `p^m` with the given generator exponents.
///
/// # Safety
/// `exponents` must point to `len` readable values (or be null when `len` is 0)
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_character_new(
    p: u64,
    m: u32,
    exponents: *const u64,
    len: usize,
    out: *mut *mut LcongCharacter,
) -> LcongStatus {
    guard(|| {
        non_null!(out);
        if exponents.is_null() && len > 0 {
            return fail(LcongStatus::NullPointer, "null exponents with nonzero length");
        }
        let exps = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(exponents, len).to_vec() };
        match DirichletCharacter::from_key(&CharacterKey { p, m, exponents: exps }) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(LcongCharacter(c)));
                LcongStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses a character key such as `"2^3:0,1"`.
///
/// # Safety
/// `key` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_character_parse(key: *const c_char, out: *mut *mut LcongCharacter) -> LcongStatus {
    guard(|| {
        non_null!(out);
        let key = match str_arg(key) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let parsed: CharacterKey = match key.parse() {
            Ok(k) => k,
            Err(e) => return fail(LcongStatus::InvalidArgument, e),
        };
        match DirichletCharacter::from_key(&parsed) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(LcongCharacter(c)));
                LcongStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `chi` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lcong_character_free(chi: *mut LcongCharacter) {
    if !chi.is_null() {
        drop(Box::from_raw(chi));
    }
}

/// The key `"p^m:e1,e2"` of `chi`.
///
/// # Safety
/// `chi` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_character_key(chi: *const LcongCharacter, out: *mut *mut c_char) -> LcongStatus {
    guard(|| {
        non_null!(chi, out);
        write_string(out, (*chi).0.key().to_string())
    })
}

/// Conductor of `chi`, or 0 for a null handle.
///
/// # Safety
/// `chi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lcong_character_conductor(chi: *const LcongCharacter) -> u64 {
    chi.as_ref().map_or(0, |c| c.0.conductor())
}

/// 1 if `chi` is odd, 0 if even, -1 for a null handle.
///
/// # Safety
/// `chi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lcong_character_is_odd(chi: *const LcongCharacter) -> i32 {
    chi.as_ref().map_or(-1, |c| i32::from(c.0.parity() == lcong::characters::Parity::Odd))
}

/// `B_k` as `"num/den"` (or an integer).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_bernoulli(k: u64, out: *mut *mut c_char) -> LcongStatus {
    guard(|| {
        non_null!(out);
        write_string(out, format_rational(&bernoulli_number(k)))
    })
}

/// The Euler number `E_k` in decimal.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_euler(k: u64, out: *mut *mut c_char) -> LcongStatus {
    guard(|| {
        non_null!(out);
        write_string(out, euler_number(k).to_string())
    })
}

/// `B_{k,χ}`.
///
/// # Safety
/// `chi` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_generalized_bernoulli(
    chi: *const LcongCharacter,
    k: u64,
    out: *mut *mut LcongValue,
) -> LcongStatus {
    guard(|| {
        non_null!(chi, out);
        write_value(out, Ok(generalized_bernoulli(k, &(*chi).0)))
    })
}

/// `L(-k, χ)`.
///
/// # Safety
/// `chi` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_l_value(chi: *const LcongCharacter, k: u64, out: *mut *mut LcongValue) -> LcongStatus {
    guard(|| {
        non_null!(chi, out);
        write_value(out, l_value(k, &(*chi).0))
    })
}

/// The normalized value `𝓛_{k,χ}`; [`LcongStatus::Undefined`] where it is not defined.
///
/// # Safety
/// `chi` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_script_l(chi: *const LcongCharacter, k: u64, out: *mut *mut LcongValue) -> LcongStatus {
    guard(|| {
        non_null!(chi, out);
        write_value(out, script_l(k, &(*chi).0))
    })
}

/// # Safety
/// `v` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lcong_value_free(v: *mut LcongValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Human-readable form, e.g. `"22"` or `"1/2 + 3/2*z4"` (`z4` a primitive 4th root of unity).
///
/// # Safety
/// `v` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_value_to_string(v: *const LcongValue, out: *mut *mut c_char) -> LcongStatus {
    guard(|| {
        non_null!(v, out);
        write_string(out, (*v).0.to_string())
    })
}

/// `{"order": N, "coeffs": ["num/den", ...]}` in the power basis of `Q(ζ_N)`.
///
/// # Safety
/// `v` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_value_to_json(v: *const LcongValue, out: *mut *mut c_char) -> LcongStatus {
    guard(|| {
        non_null!(v, out);
        match serde_json::to_string(&(*v).0) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(LcongStatus::Internal, e.to_string()),
        }
    })
}

/// p-content valuation of `v`. Zero has infinite valuation: `*is_infinite`
/// is set to 1 and `*valuation` to 0.
///
/// # Safety
/// `v` must be a live handle; `valuation` and `is_infinite` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_value_valuation(
    v: *const LcongValue,
    p: u64,
    valuation: *mut i64,
    is_infinite: *mut i32,
) -> LcongStatus {
    guard(|| {
        non_null!(v, valuation, is_infinite);
        if !lcong::arith::is_prime(p) {
            return fail(LcongStatus::InvalidArgument, format!("{p} is not prime"));
        }
        match (*v).0.p_content_valuation(p) {
            Valuation::Finite(n) => {
                *valuation = n;
                *is_infinite = 0;
            }
            Valuation::Infinite => {
                *valuation = 0;
                *is_infinite = 1;
            }
        }
        LcongStatus::Ok
    })
}

/// Runs one job given as JSON, e.g.
/// `{"id": "1.4", "chi": ["2^3:0,1"], "k": 1, "n": 1, "q": 1}`, with the same
/// keys and value syntax as a sweep config job. Writes the report as JSON
/// lines (config, verdicts, skips, summary) to `out`.
///
/// Returns [`LcongStatus::Ok`] when every in-hypothesis verdict holds and
/// [`LcongStatus::CongruenceFails`] otherwise; `out` is written in both cases.
///
/// # Safety
/// `job_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lcong_verify_json(job_json: *const c_char, out: *mut *mut c_char) -> LcongStatus {
    guard(|| {
        non_null!(out);
        let text = match str_arg(job_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let job: Job = match serde_json::from_str(text) {
            Ok(j) => j,
            Err(e) => return fail(LcongStatus::InvalidArgument, format!("bad job: {e}")),
        };
        let config = SweepConfig { jobs: vec![job], parallelism: Some(1), ..SweepConfig::default() };
        let report = match run_sweep(&config) {
            Ok(r) => r,
            Err(e) => return fail(LcongStatus::InvalidArgument, e.to_string()),
        };
        let body = match report.jsonl_body() {
            Ok(b) => b,
            Err(e) => return fail(LcongStatus::Internal, e.to_string()),
        };
        let status = write_string(out, body);
        if status != LcongStatus::Ok {
            return status;
        }
        if report.all_hold() {
            LcongStatus::Ok
        } else {
            fail(LcongStatus::CongruenceFails, format!("{} verdicts fail", report.summary.fails))
        }
    })
}
