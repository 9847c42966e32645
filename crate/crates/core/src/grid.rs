//! Sampling grids, signal bands and analysis-band planning.
//!
//! Every estimator in the crate consumes the same small set of value types:
//! a strictly increasing [`SamplingGrid`], the [`SignalBand`] `[-f_max, f_max]`
//! the process is assumed to live in, and a [`BandPlan`] of equally wide
//! [`AnalysisBand`]s whose centers tile `[0, f_max]`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Result, SpecError};

/// Strictly increasing sample instants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    times: Vec<f64>,
}

impl SamplingGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(SpecError::InvalidInput(format!(
                "a sampling grid needs at least 2 samples, got {}",
                times.len()
            )));
        }
        ensure_finite("times", &times)?;
        for (i, pair) in times.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(SpecError::NotIncreasing { index: i + 1, prev: pair[0], next: pair[1] });
            }
        }
        Ok(Self { times })
    }

    /// `t_n = start + n * dt` for `n = 0..n`.
    pub fn uniform(n: usize, start: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(SpecError::InvalidInput(format!("uniform spacing must be positive, got {dt}")));
        }
        Self::new((0..n).map(|i| start + i as f64 * dt).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.times[0]
    }

    pub fn last(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Average inter-sample interval `(t_N - t_1) / N`.
    ///
    /// The divisor is `N`, not `N - 1`, so `N * mean_dt` equals the span.
    pub fn mean_dt(&self) -> f64 {
        (self.last() - self.first()) / self.len() as f64
    }

    pub fn span(&self) -> f64 {
        self.last() - self.first()
    }

    /// True when every spacing equals the first one to `rel_tol`.
    pub fn is_uniform(&self, rel_tol: f64) -> bool {
        let d0 = self.times[1] - self.times[0];
        self.times.windows(2).all(|w| ((w[1] - w[0]) - d0).abs() <= rel_tol * d0.abs())
    }
}

/// Real samples attached to a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSeries {
    grid: SamplingGrid,
    values: Vec<f64>,
}

impl SignalSeries {
    pub fn new(grid: SamplingGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SpecError::InvalidInput(format!(
                "series has {} values for {} sample times",
                values.len(),
                grid.len()
            )));
        }
        ensure_finite("values", &values)?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, values multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| alpha * v).collect() }
    }

    pub fn into_parts(self) -> (SamplingGrid, Vec<f64>) {
        (self.grid, self.values)
    }
}

/// The two-sided signal band `[-f_max, f_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalBand {
    f_max: f64,
}

impl SignalBand {
    pub fn new(f_max: f64) -> Result<Self> {
        if !(f_max > 0.0) || !f_max.is_finite() {
            return Err(SpecError::InvalidInput(format!("f_max must be positive, got {f_max}")));
        }
        Ok(Self { f_max })
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }
}

/// `{f : |f - f_center| <= half_width}`; its resolution is `2 * half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBand {
    f_center: f64,
    half_width: f64,
}

impl AnalysisBand {
    pub fn new(f_center: f64, half_width: f64) -> Result<Self> {
        if !f_center.is_finite() {
            return Err(SpecError::NonFinite(format!("band center {f_center}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(SpecError::InvalidInput(format!("half width must be positive, got {half_width}")));
        }
        Ok(Self { f_center, half_width })
    }

    /// The nominal band centered at zero.
    pub fn nominal(half_width: f64) -> Result<Self> {
        Self::new(0.0, half_width)
    }

    pub fn f_center(&self) -> f64 {
        self.f_center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn resolution(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn lower(&self) -> f64 {
        self.f_center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.f_center + self.half_width
    }

    /// Intersection with the signal band, re-expressed as center and half width.
    ///
    /// Returns `None` when the two do not overlap.
    pub fn clipped_to(&self, signal: &SignalBand) -> Option<AnalysisBand> {
        if self.lower() >= -signal.f_max() && self.upper() <= signal.f_max() {
            return Some(*self);
        }
        let lo = self.lower().max(-signal.f_max());
        let hi = self.upper().min(signal.f_max());
        if hi <= lo {
            return None;
        }
        Some(AnalysisBand { f_center: 0.5 * (lo + hi), half_width: 0.5 * (hi - lo) })
    }

    pub fn is_within(&self, signal: &SignalBand) -> bool {
        let tol = 1e-12 * signal.f_max();
        self.lower() >= -signal.f_max() - tol && self.upper() <= signal.f_max() + tol
    }
}

/// An ordered set of analysis bands sharing one half width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandPlan {
    f_max: f64,
    half_width: f64,
    centers: Vec<f64>,
    boundary_margin: f64,
}

impl BandPlan {
    /// Centers at `0, spacing, 2 * spacing, ...` up to `f_max`, with the
    /// boundary margin defaulting to `2 * f_w`.
    pub fn new(f_max: f64, f_w: f64, spacing: f64) -> Result<Self> {
        for (name, v) in [("f_max", f_max), ("f_w", f_w), ("spacing", spacing)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SpecError::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if f_w > 0.5 * f_max * (1.0 + 1e-12) {
            return Err(SpecError::InvalidInput(format!("f_w = {f_w} exceeds f_max / 2 = {}", 0.5 * f_max)));
        }
        if spacing > 2.0 * f_w * (1.0 + 1e-12) {
            return Err(SpecError::InvalidInput(format!(
                "band spacing {spacing} leaves gaps between bands of width {}",
                2.0 * f_w
            )));
        }
        let count = (f_max / spacing + 1e-9).floor() as usize + 1;
        let centers = (0..count).map(|i| (i as f64 * spacing).min(f_max)).collect();
        Ok(Self { f_max, half_width: f_w, centers, boundary_margin: 2.0 * f_w })
    }

    /// Band spacing defaults to a fifth of the half width.
    pub fn with_default_spacing(f_max: f64, f_w: f64) -> Result<Self> {
        Self::new(f_max, f_w, f_w / 5.0)
    }

    /// A plan over arbitrary, strictly increasing centers in `[0, f_max]`.
    pub fn from_centers(f_max: f64, f_w: f64, centers: Vec<f64>) -> Result<Self> {
        SignalBand::new(f_max)?;
        AnalysisBand::nominal(f_w)?;
        if centers.is_empty() {
            return Err(SpecError::InvalidInput("a band plan needs at least one center".into()));
        }
        ensure_finite("centers", &centers)?;
        if centers.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SpecError::InvalidInput("band centers must be strictly increasing".into()));
        }
        Ok(Self { f_max, half_width: f_w, centers, boundary_margin: 2.0 * f_w })
    }

    pub fn with_boundary_margin(mut self, margin: f64) -> Result<Self> {
        if !(margin >= 0.0) || !margin.is_finite() {
            return Err(SpecError::InvalidInput(format!("boundary margin must be non-negative, got {margin}")));
        }
        self.boundary_margin = margin;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    pub fn signal_band(&self) -> SignalBand {
        SignalBand { f_max: self.f_max }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn boundary_margin(&self) -> f64 {
        self.boundary_margin
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn band(&self, i: usize) -> AnalysisBand {
        AnalysisBand { f_center: self.centers[i], half_width: self.half_width }
    }

    pub fn bands(&self) -> impl Iterator<Item = AnalysisBand> + '_ {
        self.centers.iter().map(move |&c| AnalysisBand { f_center: c, half_width: self.half_width })
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        boundary_flag(self.centers[i], self.f_max, self.boundary_margin)
    }

    pub fn boundary_flags(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.is_boundary(i)).collect()
    }

    /// Center spacing when the centers are uniform (to 1e-9 relative), else `None`.
    pub fn uniform_spacing(&self) -> Option<f64> {
        if self.centers.len() < 2 {
            return Some(1.0);
        }
        let d = self.centers[1] - self.centers[0];
        let ok = self.centers.windows(2).all(|w| ((w[1] - w[0]) - d).abs() <= 1e-9 * d.abs().max(f64::MIN_POSITIVE));
        ok.then_some(d)
    }
}

/// A band is unreliable when its center lies within `margin` of 0 or `f_max`.
pub fn boundary_flag(f_center: f64, f_max: f64, margin: f64) -> bool {
    let tol = 1e-9 * f_max;
    f_center < margin - tol || f_max - f_center < margin - tol
}

/// Shorthand for [`BandPlan::new`].
pub fn make_band_plan(f_max: f64, f_w: f64, spacing: f64) -> Result<BandPlan> {
    BandPlan::new(f_max, f_w, spacing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_rejects_bad_input() {
        assert!(SamplingGrid::new(vec![1.0]).is_err());
        assert!(matches!(SamplingGrid::new(vec![0.0, 1.0, 1.0]), Err(SpecError::NotIncreasing { index: 2, .. })));
        assert!(SamplingGrid::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn mean_dt_divides_by_count() {
        let g = SamplingGrid::uniform(50, 1.0, 1.0).unwrap();
        assert_eq!(g.mean_dt(), 49.0 / 50.0);
        assert!(g.is_uniform(1e-12));
    }

    #[test]
    fn plan_half_hertz() {
        let p = make_band_plan(0.5, 0.05, 0.01).unwrap();
        assert_eq!(p.len(), 51);
        assert_eq!(p.centers()[0], 0.0);
        assert!((p.centers()[50] - 0.5).abs() < 1e-15);
        for (i, &c) in p.centers().iter().enumerate() {
            let expect = !(0.1 - 1e-12..=0.4 + 1e-12).contains(&c);
            assert_eq!(p.is_boundary(i), expect, "center {c}");
        }
        assert_eq!(p.boundary_flags().iter().filter(|f| !**f).count(), 31);
    }

    #[test]
    fn plan_everything_flagged() {
        let p = make_band_plan(0.5, 0.25, 0.25).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.boundary_flags().iter().all(|&f| f));
    }

    #[test]
    fn plan_cycles_per_day() {
        let p = make_band_plan(12.0, 0.175, 0.05).unwrap();
        assert_eq!(p.len(), 241);
        assert!((p.band(0).resolution() - 0.35).abs() < 1e-15);
    }

    #[test]
    fn plan_rejects_bad_parameters() {
        assert!(make_band_plan(0.0, 0.05, 0.01).is_err());
        assert!(make_band_plan(0.5, -0.05, 0.01).is_err());
        assert!(make_band_plan(0.5, 0.05, 0.0).is_err());
        assert!(make_band_plan(0.5, 0.3, 0.01).is_err());
        assert!(make_band_plan(0.5, 0.05, 0.2).is_err());
    }

    #[test]
    fn clipping_to_signal_band() {
        let sb = SignalBand::new(0.5).unwrap();
        let b = AnalysisBand::new(0.5, 0.05).unwrap().clipped_to(&sb).unwrap();
        assert!((b.f_center() - 0.475).abs() < 1e-15);
        assert!((b.half_width() - 0.025).abs() < 1e-15);
        let inner = AnalysisBand::new(0.2, 0.05).unwrap();
        assert_eq!(inner.clipped_to(&sb).unwrap(), inner);
    }

    proptest! {
        #[test]
        fn plan_count_and_spacing(f_max in 0.1f64..50.0, fw_frac in 0.01f64..0.5, sp_frac in 0.05f64..1.0) {
            let f_w = fw_frac * f_max;
            let spacing = sp_frac * 2.0 * f_w;
            let p = make_band_plan(f_max, f_w, spacing).unwrap();
            prop_assert_eq!(p.len(), (f_max / spacing + 1e-9).floor() as usize + 1);
            for w in p.centers().windows(2) {
                prop_assert!(((w[1] - w[0]) - spacing).abs() <= 1e-12 * f_max.max(1.0));
            }
        }
    }
}
