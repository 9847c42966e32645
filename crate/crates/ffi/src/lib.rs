//! C interface to `mtspec`.
//!
//! Every fallible call returns an [`MtsStatus`]. On failure the message is kept per thread and can be read
//! with [`mts_last_error`]. Handles are created by `*_new` / `mts_estimate` and must be released with the
//! matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mtspec::estimators::{BgAdaptiveConfig, EstimatorSpec, SpectrumEstimate};
use mtspec::grid::{BandPlan, SamplingGrid, SignalBand, SignalSeries};
use mtspec::inference::f_quantile;
use mtspec::SpecError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotIncreasing = 3,
    NonFinite = 4,
    Conditioning = 5,
    SpectralRange = 6,
    Extrapolation = 7,
    PlanMismatch = 8,
    DegenerateTapers = 9,
    NoConvergence = 10,
    Generation = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtsMethod {
    Mtnufft = 0,
    Mtnufft0 = 1,
    BgFixed = 2,
    BgAdaptive = 3,
    Baseline = 4,
}

/// Band flag bit: center within the boundary margin.
pub const MTS_FLAG_BOUNDARY: u8 = 1;
/// Band flag bit: taper construction failed, power is NaN.
pub const MTS_FLAG_FAILED: u8 = 2;

/// A sampled series.
pub struct MtsSeries(SignalSeries);

/// A power-spectrum estimate.
pub struct MtsSpectrum(SpectrumEstimate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &SpecError) -> MtsStatus {
    match err {
        SpecError::InvalidInput(_) => MtsStatus::InvalidInput,
        SpecError::NotIncreasing { .. } => MtsStatus::NotIncreasing,
        SpecError::NonFinite(_) => MtsStatus::NonFinite,
        SpecError::Conditioning { .. } => MtsStatus::Conditioning,
        SpecError::SpectralRange { .. } => MtsStatus::SpectralRange,
        SpecError::Extrapolation { .. } => MtsStatus::Extrapolation,
        SpecError::PlanMismatch { .. } => MtsStatus::PlanMismatch,
        SpecError::DegenerateTapers(_) => MtsStatus::DegenerateTapers,
        SpecError::NoConvergence(_) => MtsStatus::NoConvergence,
        SpecError::Generation(_) => MtsStatus::Generation,
    }
}

enum Failure {
    Null(&'static str),
    Spec(SpecError),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MtsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MtsStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            MtsStatus::NullPointer
        }
        Ok(Err(Failure::Spec(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".to_string());
            MtsStatus::Panic
        }
    }
}

unsafe fn input<'a>(p: *const f64, n: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

unsafe fn output<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to `len`).
/// Returns the full message length excluding the terminator, or 0 if there is none.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn mts_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mts_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a series from `n` strictly increasing times and their values.
///
/// # Safety
/// `times` and `values` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mts_series_new(
    times: *const f64,
    values: *const f64,
    n: usize,
    out: *mut *mut MtsSeries,
) -> MtsStatus {
    guard(|| {
        let t = input(times, n, "times")?.to_vec();
        let x = input(values, n, "values")?.to_vec();
        let series = SignalSeries::new(SamplingGrid::new(t)?, x)?;
        output(out, Box::into_raw(Box::new(MtsSeries(series))), "out")
    })
}

/// # Safety
/// `series` must come from [`mts_series_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mts_series_free(series: *mut MtsSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Estimates power at bands of half-width `f_w` spaced `spacing` apart over `[0, f_max]`.
/// `k_tapers` and `epsilon` are ignored by methods that do not use them; the adaptive method starts
/// from its default schedule at `f_w`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mts_estimate(
    series: *const MtsSeries,
    method: MtsMethod,
    f_max: f64,
    f_w: f64,
    spacing: f64,
    k_tapers: usize,
    epsilon: f64,
    out: *mut *mut MtsSpectrum,
) -> MtsStatus {
    guard(|| {
        let series = series.as_ref().ok_or(Failure::Null("series"))?;
        let plan = BandPlan::new(f_max, f_w, spacing)?;
        let spec = match method {
            MtsMethod::Mtnufft => EstimatorSpec::Mtnufft { k_tapers, epsilon },
            MtsMethod::Mtnufft0 => EstimatorSpec::Mtnufft0 { k_tapers, epsilon },
            MtsMethod::BgFixed => EstimatorSpec::BgFixed { k_tapers },
            MtsMethod::BgAdaptive => EstimatorSpec::BgAdaptive(BgAdaptiveConfig::defaults(f_max, f_w)),
            MtsMethod::Baseline => EstimatorSpec::Baseline,
        };
        let est = spec.estimate(&series.0, &SignalBand::new(f_max)?, &plan)?;
        output(out, Box::into_raw(Box::new(MtsSpectrum(est))), "out")
    })
}

/// # Safety
/// `spectrum` must come from [`mts_estimate`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_free(spectrum: *mut MtsSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of bands, or 0 for a null handle.
///
/// # Safety
/// `spectrum` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_len(spectrum: *const MtsSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.len())
}

unsafe fn copy_out<T: Copy>(
    spectrum: *const MtsSpectrum,
    dst: *mut T,
    len: usize,
    pick: impl Fn(&SpectrumEstimate, usize) -> T,
) -> MtsStatus {
    guard(|| {
        let s = &spectrum.as_ref().ok_or(Failure::Null("spectrum"))?.0;
        if len < s.len() {
            return Err(SpecError::InvalidInput(format!("buffer holds {len} entries, spectrum has {}", s.len())).into());
        }
        if dst.is_null() {
            return Err(Failure::Null("dst"));
        }
        for i in 0..s.len() {
            dst.add(i).write(pick(s, i));
        }
        Ok(())
    })
}

/// Copies band centers into `dst`, which must hold at least [`mts_spectrum_len`] entries.
///
/// # Safety
/// `dst` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_centers(spectrum: *const MtsSpectrum, dst: *mut f64, len: usize) -> MtsStatus {
    copy_out(spectrum, dst, len, |s, i| s.plan.centers()[i])
}

/// Copies band powers into `dst`. Failed bands are NaN.
///
/// # Safety
/// `dst` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_power(spectrum: *const MtsSpectrum, dst: *mut f64, len: usize) -> MtsStatus {
    copy_out(spectrum, dst, len, |s, i| s.power[i])
}

/// Copies the half-width actually used per band.
///
/// # Safety
/// `dst` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_f_w_used(spectrum: *const MtsSpectrum, dst: *mut f64, len: usize) -> MtsStatus {
    copy_out(spectrum, dst, len, |s, i| s.f_w_used[i])
}

/// Copies the taper count actually used per band.
///
/// # Safety
/// `dst` must be valid for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_k_used(spectrum: *const MtsSpectrum, dst: *mut usize, len: usize) -> MtsStatus {
    copy_out(spectrum, dst, len, |s, i| s.k_used[i])
}

/// Copies per-band flag bits (`MTS_FLAG_BOUNDARY`, `MTS_FLAG_FAILED`).
///
/// # Safety
/// `dst` must be valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mts_spectrum_flags(spectrum: *const MtsSpectrum, dst: *mut u8, len: usize) -> MtsStatus {
    copy_out(spectrum, dst, len, |s, i| {
        let f = &s.flags[i];
        (f.boundary as u8 * MTS_FLAG_BOUNDARY) | (f.failed as u8 * MTS_FLAG_FAILED)
    })
}

/// Upper-tail quantile of the F(d1, d2) distribution: the `x` with `P(F > x) = p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mts_f_quantile(p: f64, d1: usize, d2: usize, out: *mut f64) -> MtsStatus {
    guard(|| output(out, f_quantile(p, d1, d2)?, "out"))
}
