//! C ABI for the spectral-radius laboratory.
//!
//! Conventions: every fallible call returns an [`SrStatus`]; results come
//! back through out-pointers. Handles are opaque and freed with their
//! matching `_free` function. `sr_last_error` retrieves a thread-local
//! message describing the most recent failure on this thread. All functions
//! catch panics and report them as `SR_STATUS_PANIC` instead of unwinding
//! across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use specrad::digraph;
use specrad::dist::EntryDistribution;
use specrad::ensemble::{sample_matrix, MatrixSample, Storage};
use specrad::spectral;
use specrad::Error;

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Unsupported = 4,
    Numerical = 5,
    Parse = 6,
    Capacity = 7,
    Budget = 8,
    Io = 9,
    Panic = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let safe = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = safe);
}

fn status_of(err: &Error) -> SrStatus {
    match err {
        Error::Config(_) => SrStatus::Config,
        Error::Unsupported(_) => SrStatus::Unsupported,
        Error::Numerical { .. } => SrStatus::Numerical,
        Error::Parse { .. } => SrStatus::Parse,
        Error::Capacity(_) => SrStatus::Capacity,
        Error::Budget { .. } => SrStatus::Budget,
        Error::Io(_) => SrStatus::Io,
        Error::Json(_) => SrStatus::Parse,
    }
}

fn fail(err: Error) -> SrStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn guarded(f: impl FnOnce() -> SrStatus) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic across FFI boundary".into());
            set_error(&msg);
            SrStatus::Panic
        }
    }
}

/// Copies the last error message on this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be NULL (then only the
/// length is returned).
#[no_mangle]
pub unsafe extern "C" fn sr_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            // keep the copy terminated even when truncated
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Opaque entry-law descriptor.
pub struct SrDist(EntryDistribution);

/// Opaque matrix realization with provenance.
pub struct SrMatrix(MatrixSample);

unsafe fn write_out<T>(ptr: *mut T, value: T) -> SrStatus {
    if ptr.is_null() {
        set_error("output pointer is NULL");
        return SrStatus::NullArgument;
    }
    ptr.write(value);
    SrStatus::Ok
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SrStatus> {
    if ptr.is_null() {
        set_error("string argument is NULL");
        return Err(SrStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        SrStatus::InvalidUtf8
    })
}

macro_rules! deref {
    ($ptr:expr) => {
        match $ptr.as_ref() {
            Some(r) => r,
            None => {
                set_error("handle is NULL");
                return SrStatus::NullArgument;
            }
        }
    };
}

/// Parses a JSON law descriptor, e.g. `{"kind":"pareto_symmetric","alpha":2.2}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_dist_from_json(
    json: *const c_char,
    out: *mut *mut SrDist,
) -> SrStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match EntryDistribution::from_json(text) {
            Ok(d) => write_out(out, Box::into_raw(Box::new(SrDist(d)))),
            Err(e) => fail(e),
        }
    })
}

/// Serializes the descriptor back to JSON. Free the string with
/// [`sr_string_free`].
///
/// # Safety
/// `dist` must be a live handle from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_dist_to_json(dist: *const SrDist, out: *mut *mut c_char) -> SrStatus {
    guarded(|| {
        let d = deref!(dist);
        let json = CString::new(d.0.to_json()).expect("descriptor JSON has no NUL");
        write_out(out, json.into_raw())
    })
}

/// # Safety
/// `s` must have been returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `dist` must be a live handle from this library (or NULL).
#[no_mangle]
pub unsafe extern "C" fn sr_dist_free(dist: *mut SrDist) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// `E|x|^p` in closed form; `+inf` when the moment diverges.
///
/// # Safety
/// `dist` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_dist_moment(dist: *const SrDist, p: f64, out: *mut f64) -> SrStatus {
    guarded(|| {
        let d = deref!(dist);
        if !(p >= 0.0) {
            set_error("moment order must be >= 0");
            return SrStatus::Config;
        }
        write_out(out, d.0.moment(p).value)
    })
}

/// Scale `c = 1/sqrt(E|x|^2)` plus the descriptor of `c*x`.
///
/// # Safety
/// `dist` must be a live handle; `out_scale` and `out_dist` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_dist_normalize(
    dist: *const SrDist,
    out_scale: *mut f64,
    out_dist: *mut *mut SrDist,
) -> SrStatus {
    guarded(|| {
        let d = deref!(dist);
        match d.0.normalize_to_unit_second_moment() {
            Ok((scale, scaled)) => {
                let st = write_out(out_scale, scale);
                if st != SrStatus::Ok {
                    return st;
                }
                write_out(out_dist, Box::into_raw(Box::new(SrDist(scaled))))
            }
            Err(e) => fail(e),
        }
    })
}

/// Draws an n×n realization. `sparse` nonzero selects triplet storage, which
/// is only supported for laws with an atom at zero.
///
/// # Safety
/// `dist` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_sample(
    dist: *const SrDist,
    n: usize,
    seed: u64,
    sparse: i32,
    out: *mut *mut SrMatrix,
) -> SrStatus {
    guarded(|| {
        let d = deref!(dist);
        if n == 0 {
            set_error("matrix dimension must be >= 1");
            return SrStatus::Config;
        }
        let storage = if sparse != 0 {
            Storage::Sparse
        } else {
            Storage::Dense
        };
        match sample_matrix(&d.0, n, seed, storage) {
            Ok(m) => write_out(out, Box::into_raw(Box::new(SrMatrix(m)))),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `matrix` must be a live handle from this library (or NULL).
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_free(matrix: *mut SrMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Dimension of the realization; 0 for a NULL handle.
///
/// # Safety
/// `matrix` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_n(matrix: *const SrMatrix) -> usize {
    matrix.as_ref().map_or(0, |m| m.0.n())
}

/// Entry (i, j), 0-based.
///
/// # Safety
/// `matrix` must be a live handle; `out_re` and `out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_entry(
    matrix: *const SrMatrix,
    i: usize,
    j: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        if i >= m.0.n() || j >= m.0.n() {
            set_error("entry index out of range");
            return SrStatus::Config;
        }
        let v = m.0.entry(i, j);
        let st = write_out(out_re, v.re);
        if st != SrStatus::Ok {
            return st;
        }
        write_out(out_im, v.im)
    })
}

/// Whether every entry modulus is at most n².
///
/// # Safety
/// `matrix` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_event_b(matrix: *const SrMatrix, out: *mut i32) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        write_out(out, m.0.event_b_holds() as i32)
    })
}

/// Writes the realization to the binary matrix format.
///
/// # Safety
/// `matrix` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_save(matrix: *const SrMatrix, path: *const c_char) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        let p = match read_str(path) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match m.0.save(Path::new(p)) {
            Ok(()) => SrStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Loads a realization from the binary matrix format.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_matrix_load(path: *const c_char, out: *mut *mut SrMatrix) -> SrStatus {
    guarded(|| {
        let p = match read_str(path) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match MatrixSample::load(Path::new(p)) {
            Ok(m) => write_out(out, Box::into_raw(Box::new(SrMatrix(m)))),
            Err(e) => fail(e),
        }
    })
}

/// `max |lambda|` over the full spectrum (dense eigensolve).
///
/// # Safety
/// `matrix` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_spectral_radius(matrix: *const SrMatrix, out: *mut f64) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        match spectral::spectral_radius(&m.0.to_dense()) {
            Ok(r) => write_out(out, r),
            Err(e) => fail(e),
        }
    })
}

/// All n eigenvalues into caller-provided buffers of capacity `cap`.
/// `written` receives n; fails with `SR_STATUS_CAPACITY` when `cap < n`.
///
/// # Safety
/// `out_re` and `out_im` must point to `cap` writable doubles; `written`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_eigenvalues(
    matrix: *const SrMatrix,
    out_re: *mut f64,
    out_im: *mut f64,
    cap: usize,
    written: *mut usize,
) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        if out_re.is_null() || out_im.is_null() {
            set_error("output buffer is NULL");
            return SrStatus::NullArgument;
        }
        let n = m.0.n();
        if cap < n {
            set_error("eigenvalue buffer too small");
            return SrStatus::Capacity;
        }
        match spectral::eigenvalues(&m.0.to_dense()) {
            Ok(spec) => {
                for (i, z) in spec.eigenvalues.iter().enumerate() {
                    out_re.add(i).write(z.re);
                    out_im.add(i).write(z.im);
                }
                write_out(written, n)
            }
            Err(e) => fail(e),
        }
    })
}

/// `(Tr((X*)^{k-1} X^{k-1}))^{1/(2k-2)}`, an upper bound on the radius.
///
/// # Safety
/// `matrix` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_trace_moment_bound(
    matrix: *const SrMatrix,
    k: u32,
    out: *mut f64,
) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        if k < 2 {
            set_error("trace-moment bound needs k >= 2");
            return SrStatus::Config;
        }
        match spectral::trace_moment_bound(&m.0.to_dense(), k) {
            Ok(v) => write_out(out, v),
            Err(e) => fail(e),
        }
    })
}

/// `||X^m||^{1/m}` by certified power iteration.
///
/// # Safety
/// `matrix` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_power_norm_bound(
    matrix: *const SrMatrix,
    m_power: u32,
    out: *mut f64,
) -> SrStatus {
    guarded(|| {
        let m = deref!(matrix);
        if m_power < 1 {
            set_error("power-norm bound needs m >= 1");
            return SrStatus::Config;
        }
        match spectral::power_norm_bound(&m.0.to_dense(), m_power) {
            Ok(v) => write_out(out, v),
            Err(e) => fail(e),
        }
    })
}

/// `(1+delta)^{-2k+2} n^{-k+1} M` with the moment `M` given as `ln M`,
/// evaluated in the log domain.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_markov_tail_bound_ln(
    k: u32,
    n: usize,
    delta: f64,
    ln_moment: f64,
    out: *mut f64,
) -> SrStatus {
    guarded(|| {
        if k < 2 || n < 1 || !(delta >= 0.0) {
            set_error("need k >= 2, n >= 1, delta >= 0");
            return SrStatus::Config;
        }
        write_out(out, spectral::markov_tail_bound_ln(k, n, delta, ln_moment))
    })
}

/// Exact census of labeled rooted even digraphs on `[n]` with 2k edges and l
/// vertices, plus the count bound `n^l k^{2(k-l)+1}`.
///
/// # Safety
/// All out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_even_digraph_census(
    n: u32,
    k: u32,
    l: u32,
    out_labeled: *mut u64,
    out_classes: *mut u64,
    out_bound: *mut f64,
    out_bound_ok: *mut i32,
) -> SrStatus {
    guarded(|| {
        if n < 1 || k < 1 || l < 1 {
            set_error("census needs n, k, l >= 1");
            return SrStatus::Config;
        }
        match digraph::enumerate_even_digraphs(n, k, l) {
            Ok(census) => {
                let st = write_out(out_labeled, census.labeled_rooted_count);
                if st != SrStatus::Ok {
                    return st;
                }
                let st = write_out(out_classes, census.class_count);
                if st != SrStatus::Ok {
                    return st;
                }
                let st = write_out(out_bound, census.bound);
                if st != SrStatus::Ok {
                    return st;
                }
                write_out(out_bound_ok, census.bound_ok as i32)
            }
            Err(e) => fail(e),
        }
    })
}
