//! C ABI for the topsig library.
//!
//! Conventions: every function returns a `TopsigStatus`; results come out
//! through pointer parameters. Objects are opaque handles created and
//! released by matching `_free` functions. Structured inputs (simulation,
//! signature and bootstrap parameters) travel as JSON documents with the
//! same schema the CLI writes into its artifacts. After any non-OK
//! status, `topsig_last_error_message` describes the failure for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use topsig::config::{BootstrapRunConfig, SignatureConfig, SimulateConfig};
use topsig::{
    bottleneck_distance, sublevel_diagram, Error, FunctionalCurve, PersistenceDiagram,
    SignatureEstimate, TimeSeries,
};

/// Result of a C-API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TopsigStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter violated its documented range or invariant.
    InvalidInput = 2,
    /// A JSON or CSV document could not be parsed.
    ParseError = 3,
    /// A numerical procedure failed beyond its tolerances.
    NumericError = 4,
    /// Filesystem failure.
    IoError = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").expect("empty"));
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn status_of(err: &Error) -> TopsigStatus {
    match err {
        Error::InvalidInput(_) => TopsigStatus::InvalidInput,
        Error::Parse { .. } | Error::Json(_) => TopsigStatus::ParseError,
        Error::Numeric(_) => TopsigStatus::NumericError,
        Error::Io(_) => TopsigStatus::IoError,
    }
}

/// Message describing the calling thread's most recent error. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn topsig_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guard<T>(body: impl FnOnce() -> Result<T, TopsigStatus>, out: impl FnOnce(T)) -> TopsigStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            out(value);
            TopsigStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            TopsigStatus::Panic
        }
    }
}

unsafe fn parse_json<'a, T: serde::Deserialize<'a>>(text: *const c_char) -> Result<T, TopsigStatus> {
    if text.is_null() {
        set_error("config JSON pointer is null");
        return Err(TopsigStatus::NullPointer);
    }
    let text = CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("config JSON is not valid UTF-8");
        TopsigStatus::ParseError
    })?;
    serde_json::from_str(text).map_err(|e| {
        set_error(&format!("config JSON: {e}"));
        TopsigStatus::ParseError
    })
}

fn lib_err(err: Error) -> TopsigStatus {
    set_error(&err.to_string());
    status_of(&err)
}

macro_rules! require_nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error(concat!(stringify!($ptr), " is null"));
            return TopsigStatus::NullPointer;
        }
    };
}

/// A sampled signal.
pub struct TopsigSeries {
    inner: TimeSeries,
}

/// A sublevel-set persistence diagram.
pub struct TopsigDiagram {
    inner: PersistenceDiagram,
}

/// A signature curve on an evaluation grid.
pub struct TopsigCurve {
    inner: FunctionalCurve,
}

/// A signature estimate with confidence bands.
pub struct TopsigEstimate {
    inner: SignatureEstimate,
}

/// Builds a series from `len` samples spaced `dt` seconds apart.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` must be a
/// valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn topsig_series_new(
    values: *const f64,
    len: usize,
    dt: f64,
    out: *mut *mut TopsigSeries,
) -> TopsigStatus {
    require_nonnull!(values);
    require_nonnull!(out);
    guard(
        || {
            let slice = std::slice::from_raw_parts(values, len);
            TimeSeries::new(slice.to_vec(), dt)
                .map(|inner| Box::new(TopsigSeries { inner }))
                .map_err(lib_err)
        },
        |series| *out = Box::into_raw(series),
    )
}

/// Runs a simulation described by a JSON document (same schema as the
/// CLI `simulate --config` file).
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn topsig_simulate_json(
    config_json: *const c_char,
    out: *mut *mut TopsigSeries,
) -> TopsigStatus {
    require_nonnull!(out);
    guard(
        || {
            let config: SimulateConfig = parse_json(config_json)?;
            config
                .run()
                .map(|inner| Box::new(TopsigSeries { inner }))
                .map_err(lib_err)
        },
        |series| *out = Box::into_raw(series),
    )
}

/// Number of samples.
///
/// # Safety
/// `series` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn topsig_series_len(series: *const TopsigSeries) -> usize {
    if series.is_null() {
        return 0;
    }
    (*series).inner.len()
}

/// Sample spacing in seconds (0.0 for a null handle).
///
/// # Safety
/// `series` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn topsig_series_dt(series: *const TopsigSeries) -> f64 {
    if series.is_null() {
        return 0.0;
    }
    (*series).inner.dt()
}

/// Copies the samples into `buffer`, which must hold `topsig_series_len`
/// doubles.
///
/// # Safety
/// `series` must be live and `buffer` large enough.
#[no_mangle]
pub unsafe extern "C" fn topsig_series_copy_values(
    series: *const TopsigSeries,
    buffer: *mut f64,
) -> TopsigStatus {
    require_nonnull!(series);
    require_nonnull!(buffer);
    let values = (*series).inner.values();
    std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    TopsigStatus::Ok
}

/// # Safety
/// `series` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn topsig_series_free(series: *mut TopsigSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Sublevel-set persistence diagram of the series.
///
/// # Safety
/// `series` must be live and `out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn topsig_diagram_compute(
    series: *const TopsigSeries,
    out: *mut *mut TopsigDiagram,
) -> TopsigStatus {
    require_nonnull!(series);
    require_nonnull!(out);
    guard(
        || Ok(Box::new(TopsigDiagram { inner: sublevel_diagram(&(*series).inner) })),
        |diagram| *out = Box::into_raw(diagram),
    )
}

/// Number of points in the diagram.
///
/// # Safety
/// `diagram` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn topsig_diagram_len(diagram: *const TopsigDiagram) -> usize {
    if diagram.is_null() {
        return 0;
    }
    (*diagram).inner.len()
}

/// Copies (birth, death) pairs into `buffer`, which must hold
/// `2 * topsig_diagram_len` doubles, ordered lexicographically.
///
/// # Safety
/// `diagram` must be live and `buffer` large enough.
#[no_mangle]
pub unsafe extern "C" fn topsig_diagram_copy_points(
    diagram: *const TopsigDiagram,
    buffer: *mut f64,
) -> TopsigStatus {
    require_nonnull!(diagram);
    require_nonnull!(buffer);
    for (i, p) in (*diagram).inner.points().iter().enumerate() {
        *buffer.add(2 * i) = p.birth;
        *buffer.add(2 * i + 1) = p.death;
    }
    TopsigStatus::Ok
}

/// # Safety
/// `diagram` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn topsig_diagram_free(diagram: *mut TopsigDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// Exact bottleneck distance between two diagrams.
///
/// # Safety
/// Both handles must be live and `out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn topsig_bottleneck_distance(
    d1: *const TopsigDiagram,
    d2: *const TopsigDiagram,
    out: *mut f64,
) -> TopsigStatus {
    require_nonnull!(d1);
    require_nonnull!(d2);
    require_nonnull!(out);
    guard(
        || Ok(bottleneck_distance(&(*d1).inner, &(*d2).inner)),
        |distance| *out = distance,
    )
}

/// Windowed empirical signature of `series` under a JSON signature
/// config (fields: window_len, stride, truncation, kernel, grid?).
///
/// # Safety
/// `series` must be live, `config_json` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn topsig_signature_json(
    series: *const TopsigSeries,
    config_json: *const c_char,
    out: *mut *mut TopsigCurve,
) -> TopsigStatus {
    require_nonnull!(series);
    require_nonnull!(out);
    guard(
        || {
            let config: SignatureConfig = parse_json(config_json)?;
            config
                .run(&(*series).inner)
                .map(|inner| Box::new(TopsigCurve { inner }))
                .map_err(lib_err)
        },
        |curve| *out = Box::into_raw(curve),
    )
}

/// Number of grid nodes in the curve.
///
/// # Safety
/// `curve` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn topsig_curve_len(curve: *const TopsigCurve) -> usize {
    if curve.is_null() {
        return 0;
    }
    (*curve).inner.values.len()
}

/// Copies the node values into `buffer` (`topsig_curve_len` doubles,
/// row-major for two-dimensional grids).
///
/// # Safety
/// `curve` must be live and `buffer` large enough.
#[no_mangle]
pub unsafe extern "C" fn topsig_curve_copy_values(
    curve: *const TopsigCurve,
    buffer: *mut f64,
) -> TopsigStatus {
    require_nonnull!(curve);
    require_nonnull!(buffer);
    let values = &(*curve).inner.values;
    std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    TopsigStatus::Ok
}

/// Serializes the curve as the CLI's `{grid, values}` JSON document.
/// Free the returned string with `topsig_string_free`.
///
/// # Safety
/// `curve` must be live and `out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn topsig_curve_to_json(
    curve: *const TopsigCurve,
    out: *mut *mut c_char,
) -> TopsigStatus {
    require_nonnull!(curve);
    require_nonnull!(out);
    guard(
        || {
            let text = serde_json::to_string(&(*curve).inner).map_err(|e| {
                set_error(&e.to_string());
                TopsigStatus::ParseError
            })?;
            Ok(CString::new(text).expect("serde_json emits no NUL"))
        },
        |text| *out = text.into_raw(),
    )
}

/// # Safety
/// `curve` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn topsig_curve_free(curve: *mut TopsigCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Signature estimate with bootstrap bands under a JSON config (the
/// signature fields plus replicates, block_len?, alpha, band, seed).
///
/// # Safety
/// `series` must be live, `config_json` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn topsig_bootstrap_json(
    series: *const TopsigSeries,
    config_json: *const c_char,
    out: *mut *mut TopsigEstimate,
) -> TopsigStatus {
    require_nonnull!(series);
    require_nonnull!(out);
    guard(
        || {
            let config: BootstrapRunConfig = parse_json(config_json)?;
            config
                .run(&(*series).inner)
                .map(|inner| Box::new(TopsigEstimate { inner }))
                .map_err(lib_err)
        },
        |estimate| *out = Box::into_raw(estimate),
    )
}

/// Number of grid nodes in the estimate.
///
/// # Safety
/// `estimate` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn topsig_estimate_len(estimate: *const TopsigEstimate) -> usize {
    if estimate.is_null() {
        return 0;
    }
    (*estimate).inner.mean.len()
}

/// Copies the mean and band curves; each buffer must hold
/// `topsig_estimate_len` doubles. Null buffers are skipped.
///
/// # Safety
/// `estimate` must be live; non-null buffers must be large enough.
#[no_mangle]
pub unsafe extern "C" fn topsig_estimate_copy_bands(
    estimate: *const TopsigEstimate,
    mean: *mut f64,
    lower: *mut f64,
    upper: *mut f64,
) -> TopsigStatus {
    require_nonnull!(estimate);
    let inner = &(*estimate).inner;
    let n = inner.mean.len();
    if !mean.is_null() {
        std::ptr::copy_nonoverlapping(inner.mean.as_ptr(), mean, n);
    }
    if !lower.is_null() {
        std::ptr::copy_nonoverlapping(inner.lower.as_ptr(), lower, n);
    }
    if !upper.is_null() {
        std::ptr::copy_nonoverlapping(inner.upper.as_ptr(), upper, n);
    }
    TopsigStatus::Ok
}

/// Serializes the estimate as JSON. Free with `topsig_string_free`.
///
/// # Safety
/// `estimate` must be live and `out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn topsig_estimate_to_json(
    estimate: *const TopsigEstimate,
    out: *mut *mut c_char,
) -> TopsigStatus {
    require_nonnull!(estimate);
    require_nonnull!(out);
    guard(
        || {
            let text = serde_json::to_string(&(*estimate).inner).map_err(|e| {
                set_error(&e.to_string());
                TopsigStatus::ParseError
            })?;
            Ok(CString::new(text).expect("serde_json emits no NUL"))
        },
        |text| *out = text.into_raw(),
    )
}

/// # Safety
/// `estimate` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn topsig_estimate_free(estimate: *mut TopsigEstimate) {
    if !estimate.is_null() {
        drop(Box::from_raw(estimate));
    }
}

/// Frees a string returned by the `_to_json` functions.
///
/// # Safety
/// `text` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn topsig_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn error_message_survives_per_thread() {
        set_error("boom");
        let msg = unsafe { CStr::from_ptr(topsig_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
    }

    #[test]
    fn null_series_accessors_are_harmless() {
        unsafe {
            assert_eq!(topsig_series_len(ptr::null()), 0);
            assert_eq!(topsig_series_dt(ptr::null()), 0.0);
            assert_eq!(topsig_diagram_len(ptr::null()), 0);
            assert_eq!(topsig_curve_len(ptr::null()), 0);
            assert_eq!(topsig_estimate_len(ptr::null()), 0);
            topsig_series_free(ptr::null_mut());
            topsig_diagram_free(ptr::null_mut());
            topsig_curve_free(ptr::null_mut());
            topsig_estimate_free(ptr::null_mut());
            topsig_string_free(ptr::null_mut());
        }
    }
}
