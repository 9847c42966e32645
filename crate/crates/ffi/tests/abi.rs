use std::ffi::CStr;
use std::ptr;

use mtspec::estimators::{estimate_mtnufft, TaperMode};
use mtspec::grid::{BandPlan, SamplingGrid, SignalBand, SignalSeries};
use mtspec_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { mts_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn sample() -> (Vec<f64>, Vec<f64>) {
    let t: Vec<f64> = (0..60).map(|i| i as f64 + 0.3 * ((i * 7 % 11) as f64 / 11.0 - 0.5)).collect();
    let x: Vec<f64> = t.iter().map(|t| (2.0 * std::f64::consts::PI * 0.21 * t).cos() + 0.1 * (t * 1.7).sin()).collect();
    (t, x)
}

#[test]
fn estimate_through_handles_matches_library() {
    let (t, x) = sample();
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { mts_series_new(t.as_ptr(), x.as_ptr(), t.len(), &mut series) }, MtsStatus::Ok);
    let mut spec = ptr::null_mut();
    let status = unsafe { mts_estimate(series, MtsMethod::Mtnufft, 0.5, 0.05, 0.01, 4, 1e-10, &mut spec) };
    assert_eq!(status, MtsStatus::Ok);
    let n = unsafe { mts_spectrum_len(spec) };
    assert_eq!(n, 51);

    let mut power = vec![0.0; n];
    let mut centers = vec![0.0; n];
    let mut k = vec![0usize; n];
    let mut flags = vec![0u8; n];
    unsafe {
        assert_eq!(mts_spectrum_power(spec, power.as_mut_ptr(), n), MtsStatus::Ok);
        assert_eq!(mts_spectrum_centers(spec, centers.as_mut_ptr(), n), MtsStatus::Ok);
        assert_eq!(mts_spectrum_k_used(spec, k.as_mut_ptr(), n), MtsStatus::Ok);
        assert_eq!(mts_spectrum_flags(spec, flags.as_mut_ptr(), n), MtsStatus::Ok);
    }

    let lib = estimate_mtnufft(
        &SignalSeries::new(SamplingGrid::new(t).unwrap(), x).unwrap(),
        &SignalBand::new(0.5).unwrap(),
        &BandPlan::new(0.5, 0.05, 0.01).unwrap(),
        4,
        1e-10,
        TaperMode::Interpolated,
    )
    .unwrap();
    assert_eq!(power, lib.power);
    assert_eq!(centers, lib.plan.centers());
    assert!(k.iter().all(|&k| k == 4));
    assert_eq!(flags[0] & MTS_FLAG_BOUNDARY, MTS_FLAG_BOUNDARY);
    assert_eq!(flags[25], 0);

    let mut short = vec![0.0; n - 1];
    assert_eq!(unsafe { mts_spectrum_power(spec, short.as_mut_ptr(), n - 1) }, MtsStatus::InvalidInput);
    assert!(last_error().contains("buffer"));

    unsafe {
        mts_spectrum_free(spec);
        mts_series_free(series);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let t = [0.0, 2.0, 1.0];
    let x = [1.0, 2.0, 3.0];
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { mts_series_new(t.as_ptr(), x.as_ptr(), 3, &mut series) }, MtsStatus::NotIncreasing);
    assert!(series.is_null());
    assert!(last_error().contains("increasing"));

    assert_eq!(unsafe { mts_series_new(ptr::null(), x.as_ptr(), 3, &mut series) }, MtsStatus::NullPointer);
    let nan = [0.0, 1.0, f64::NAN];
    assert_eq!(unsafe { mts_series_new(nan.as_ptr(), x.as_ptr(), 3, &mut series) }, MtsStatus::NonFinite);

    let good = [0.0, 1.0, 2.0];
    assert_eq!(unsafe { mts_series_new(good.as_ptr(), x.as_ptr(), 3, &mut series) }, MtsStatus::Ok);
    let mut spec = ptr::null_mut();
    let status = unsafe { mts_estimate(series, MtsMethod::BgFixed, 0.5, -0.1, 0.01, 4, 1e-8, &mut spec) };
    assert_eq!(status, MtsStatus::InvalidInput);
    assert!(spec.is_null());
    assert_eq!(
        unsafe { mts_estimate(ptr::null(), MtsMethod::Baseline, 0.5, 0.05, 0.05, 1, 1e-8, &mut spec) },
        MtsStatus::NullPointer
    );
    unsafe { mts_series_free(series) };

    assert_eq!(unsafe { mts_spectrum_len(ptr::null()) }, 0);
    unsafe {
        mts_series_free(ptr::null_mut());
        mts_spectrum_free(ptr::null_mut());
    }
}

#[test]
fn quantile_and_version() {
    let mut q = 0.0;
    assert_eq!(unsafe { mts_f_quantile(0.05, 2, 6, &mut q) }, MtsStatus::Ok);
    // F(2, d2) has the closed form d2/2 * (p^(-2/d2) - 1)
    assert!((q - 3.0 * (0.05f64.powf(-1.0 / 3.0) - 1.0)).abs() < 1e-9);
    assert_eq!(unsafe { mts_f_quantile(1.5, 2, 6, &mut q) }, MtsStatus::InvalidInput);
    let v = unsafe { CStr::from_ptr(mts_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn error_message_truncates_to_buffer() {
    let mut q = 0.0;
    unsafe { mts_f_quantile(-1.0, 2, 6, &mut q) };
    let mut buf = [1 as std::ffi::c_char; 8];
    let full = unsafe { mts_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(full > 7);
    assert_eq!(buf[7], 0);
    assert_eq!(unsafe { mts_last_error(ptr::null_mut(), 0) }, full);
}
