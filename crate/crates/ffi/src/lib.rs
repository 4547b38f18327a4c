//! C ABI over the `localorder` engine.
//!
//! Every call returns an [`LoStatus`]; results go through out-pointers.
//! Tournaments are opaque handles released with [`lo_tournament_free`].
//! Big integers are written as NUL-terminated decimal strings. After a
//! failure, [`lo_last_error`] describes it (per thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use localorder::degrees::{big_ramsey_degree, small_ramsey_degree, DegreeError};
use localorder::devlin::{count_devlin_types, default_height_cap, DevlinError};
use localorder::pstruct::PnStructure;
use localorder::tangent::tangent_derivative;
use localorder::tournament::{automorphism_count, circular_tournament, Tournament};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotLocalOrder = 3,
    BufferTooSmall = 4,
    BoundExceeded = 5,
    Internal = 6,
}

/// Opaque tournament handle.
pub struct LoTournament(Tournament);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: LoStatus, message: impl Into<String>) -> LoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn guard(body: impl FnOnce() -> LoStatus) -> LoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == LoStatus::Ok {
                LAST_ERROR.with(|e| e.borrow_mut().clear());
            }
            status
        }
        Err(_) => fail(LoStatus::Internal, "internal panic"),
    }
}

fn degree_status(e: &DegreeError) -> LoStatus {
    match e {
        DegreeError::NotLocalOrder(_) => LoStatus::NotLocalOrder,
        DegreeError::BudgetExceeded { .. } => LoStatus::BoundExceeded,
        _ => LoStatus::InvalidInput,
    }
}

/// Copies `s` and a NUL into `buf`; `written` receives the length without
/// the NUL, or the length needed when the buffer is too small.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, written: *mut usize) -> LoStatus {
    if !written.is_null() {
        *written = s.len();
    }
    if buf.is_null() {
        return fail(LoStatus::NullPointer, "output buffer is null");
    }
    if s.len() + 1 > len {
        return fail(
            LoStatus::BufferTooSmall,
            format!("need {} bytes", s.len() + 1),
        );
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    LoStatus::Ok
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, LoStatus> {
    if p.is_null() {
        return Err(fail(LoStatus::NullPointer, "input string is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(LoStatus::InvalidInput, "input is not UTF-8"))
}

unsafe fn handle<'a>(t: *const LoTournament) -> Result<&'a Tournament, LoStatus> {
    t.as_ref()
        .map(|t| &t.0)
        .ok_or_else(|| fail(LoStatus::NullPointer, "tournament handle is null"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Parses the text format (vertex count, then one 0/1 row per vertex).
///
/// # Safety
/// `src` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lo_tournament_parse(
    src: *const c_char,
    out: *mut *mut LoTournament,
) -> LoStatus {
    guard(|| {
        if out.is_null() {
            return fail(LoStatus::NullPointer, "out is null");
        }
        let s = tri!(text(src));
        match Tournament::parse(s) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(LoTournament(t)));
                LoStatus::Ok
            }
            Err(e) => fail(LoStatus::InvalidInput, e.to_string()),
        }
    })
}

/// The circular tournament on `2n + 1` vertices, `n >= 1`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lo_tournament_circular(n: usize, out: *mut *mut LoTournament) -> LoStatus {
    guard(|| {
        if out.is_null() {
            return fail(LoStatus::NullPointer, "out is null");
        }
        if n == 0 || 2 * n + 1 > localorder::tournament::MAX_VERTICES {
            return fail(LoStatus::InvalidInput, format!("n = {n} out of range"));
        }
        *out = Box::into_raw(Box::new(LoTournament(circular_tournament(n))));
        LoStatus::Ok
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lo_tournament_free(t: *mut LoTournament) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lo_tournament_size(t: *const LoTournament, out: *mut usize) -> LoStatus {
    guard(|| {
        let t = tri!(handle(t));
        if out.is_null() {
            return fail(LoStatus::NullPointer, "out is null");
        }
        *out = t.len();
        LoStatus::Ok
    })
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lo_automorphism_count(t: *const LoTournament, out: *mut u64) -> LoStatus {
    guard(|| {
        let t = tri!(handle(t));
        if out.is_null() {
            return fail(LoStatus::NullPointer, "out is null");
        }
        if t.len() > 9 {
            return fail(
                LoStatus::BoundExceeded,
                "automorphisms are counted up to 9 vertices",
            );
        }
        *out = automorphism_count(t) as u64;
        LoStatus::Ok
    })
}

/// Small Ramsey degree in the class of local orders.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lo_small_degree(t: *const LoTournament, out: *mut u64) -> LoStatus {
    guard(|| {
        let t = tri!(handle(t));
        if out.is_null() {
            return fail(LoStatus::NullPointer, "out is null");
        }
        match small_ramsey_degree(t) {
            Ok(d) => {
                *out = d as u64;
                LoStatus::Ok
            }
            Err(e) => fail(degree_status(&e), e.to_string()),
        }
    })
}

/// Big Ramsey degree as a decimal string.
///
/// # Safety
/// `t` must be a live handle, `buf` writable for `len` bytes, and
/// `written` null or valid.
#[no_mangle]
pub unsafe extern "C" fn lo_big_degree(
    t: *const LoTournament,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> LoStatus {
    guard(|| {
        let t = tri!(handle(t));
        match big_ramsey_degree(t) {
            Ok(d) => write_str(&d.to_string(), buf, len, written),
            Err(e) => fail(degree_status(&e), e.to_string()),
        }
    })
}

/// `tan^(order)(0)` for odd `order`, as a decimal string.
///
/// # Safety
/// `buf` must be writable for `len` bytes and `written` null or valid.
#[no_mangle]
pub unsafe extern "C" fn lo_tangent_derivative(
    order: usize,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> LoStatus {
    guard(|| match tangent_derivative(order) {
        Ok(v) => write_str(&v.to_string(), buf, len, written),
        Err(e) => fail(LoStatus::InvalidInput, e.to_string()),
    })
}

/// Number of Devlin types of the partitioned order `word` (digits `1..=n`).
///
/// # Safety
/// `word` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lo_devlin_count(
    word: *const c_char,
    n_parts: u8,
    out: *mut u64,
) -> LoStatus {
    guard(|| {
        let w = tri!(text(word));
        if out.is_null() {
            return fail(LoStatus::NullPointer, "out is null");
        }
        let x = match PnStructure::parse_word(w, Some(n_parts)) {
            Ok(x) => x,
            Err(e) => return fail(LoStatus::InvalidInput, e.to_string()),
        };
        match count_devlin_types(&x, default_height_cap(&x)) {
            Ok(c) => {
                *out = c.count as u64;
                LoStatus::Ok
            }
            Err(e @ DevlinError::CapReached { .. }) => fail(LoStatus::BoundExceeded, e.to_string()),
            Err(e) => fail(LoStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Copies the message of the last failure on this thread into `buf`
/// (truncated to fit) and returns its full length; `0` when there is none.
///
/// # Safety
/// `buf` must be null or writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn lo_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            std::ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}
