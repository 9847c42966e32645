//! Kernel matrices `R(B)` and `R(A)` and the frequency-shift operator.
//!
//! `R(n, m)` is the integral of `exp(j 2 pi f (t_n - t_m))` over the band.

use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;

use crate::eig::SquareMatrix;
use crate::grid::{AnalysisBand, SamplingGrid, SignalBand};

/// Lags below this fraction of the mean spacing use the zero-lag limit.
pub const NEAR_ZERO_LAG: f64 = 1e-12;

/// Which band a kernel integrates over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandTag {
    Signal(SignalBand),
    Analysis(AnalysisBand),
}

/// Hermitian kernel matrix with its band.
#[derive(Debug, Clone)]
pub struct KernelMatrix<T> {
    pub entries: SquareMatrix<T>,
    pub band_tag: BandTag,
}

impl<T> Deref for KernelMatrix<T> {
    type Target = SquareMatrix<T>;
    fn deref(&self) -> &SquareMatrix<T> {
        &self.entries
    }
}

/// `sin(2 pi w d) / (pi d)`, with the limit `2 w` at `|d| < tiny`.
#[inline]
pub fn sinc_lag(w: f64, d: f64, tiny: f64) -> f64 {
    if d.abs() < tiny {
        2.0 * w
    } else {
        (2.0 * PI * w * d).sin() / (PI * d)
    }
}

/// Real symmetric kernel of a band `[-w, w]`.
pub fn lowpass_kernel(grid: &SamplingGrid, w: f64) -> SquareMatrix<f64> {
    let t = grid.times();
    let tiny = NEAR_ZERO_LAG * grid.mean_dt();
    SquareMatrix::hermitian_from_lower(t.len(), |i, j| sinc_lag(w, t[i] - t[j], tiny))
}

/// `R(B)` for `B = [-f_max, f_max]`.
pub fn signal_band_kernel(grid: &SamplingGrid, band: &SignalBand) -> KernelMatrix<f64> {
    KernelMatrix { entries: lowpass_kernel(grid, band.f_max()), band_tag: BandTag::Signal(*band) }
}

/// `R(A)` for `A = [f_c - f_w, f_c + f_w]`; the imaginary part is exactly zero at `f_c = 0`.
pub fn analysis_band_kernel(grid: &SamplingGrid, band: &AnalysisBand) -> KernelMatrix<Complex64> {
    let t = grid.times();
    let tiny = NEAR_ZERO_LAG * grid.mean_dt();
    let (fc, fw) = (band.f_center(), band.half_width());
    let entries = SquareMatrix::hermitian_from_lower(t.len(), |i, j| {
        let d = t[i] - t[j];
        let s = sinc_lag(fw, d, tiny);
        if fc == 0.0 {
            Complex64::new(s, 0.0)
        } else {
            Complex64::from_polar(s, 2.0 * PI * fc * d)
        }
    });
    KernelMatrix { entries, band_tag: BandTag::Analysis(*band) }
}

/// `R(A_0)` for the nominal band, stored real.
pub fn nominal_band_kernel(grid: &SamplingGrid, half_width: f64) -> SquareMatrix<f64> {
    lowpass_kernel(grid, half_width)
}

/// Diagonal of the shift operator, `exp(j 2 pi f_c t_n)`.
pub fn shift_phases(grid: &SamplingGrid, f_c: f64) -> Vec<Complex64> {
    grid.times().iter().map(|&t| Complex64::from_polar(1.0, 2.0 * PI * f_c * t)).collect()
}
