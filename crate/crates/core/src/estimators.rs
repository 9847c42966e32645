//! Spectrum estimators: the fast shifted-taper estimator, exact per-band
//! GPSS estimators with fixed or adaptive bandwidth, and a single-taper
//! baseline.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpecError};
use crate::grid::{AnalysisBand, BandPlan, SamplingGrid, SignalBand, SignalSeries};
use crate::kernels::signal_band_kernel;
use crate::nufft::{eigencoefficients_values, NufftPlan, TransformPath};
use crate::tapers::{gpss_interpolated_with_kernel, leakage_db, rectangular_taper, GpssSolver, TaperSet};

pub const DEFAULT_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mtnufft,
    Mtnufft0,
    BgFixed,
    BgAdaptive,
    Baseline,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Mtnufft, Method::Mtnufft0, Method::BgFixed, Method::BgAdaptive, Method::Baseline];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mtnufft => "mtnufft",
            Method::Mtnufft0 => "mtnufft0",
            Method::BgFixed => "bg_fixed",
            Method::BgAdaptive => "bg_adaptive",
            Method::Baseline => "baseline",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| SpecError::InvalidInput(format!("unknown method {s:?}")))
    }
}

/// Nominal-band tapers for the fast estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaperMode {
    Interpolated,
    ExactNominal,
}

/// Per-band status markers.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BandFlags {
    /// Center within the boundary margin of 0 or `f_max`.
    pub boundary: bool,
    /// Taper construction failed; the power is NaN.
    pub failed: bool,
}

impl BandFlags {
    pub fn label(&self) -> &'static str {
        match (self.boundary, self.failed) {
            (false, false) => "ok",
            (true, false) => "boundary",
            (false, true) => "failed",
            (true, true) => "boundary|failed",
        }
    }
}

/// Per-band power with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    pub plan: BandPlan,
    pub power: Vec<f64>,
    pub method: Method,
    pub k_used: Vec<usize>,
    pub f_w_used: Vec<f64>,
    pub flags: Vec<BandFlags>,
}

impl SpectrumEstimate {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn power_db(&self) -> Vec<f64> {
        self.power.iter().map(|p| 10.0 * p.log10()).collect()
    }

    /// Indices of bands neither boundary-flagged nor failed.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.flags[i].boundary && !self.flags[i].failed).collect()
    }
}

/// Settings of the adaptive estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgAdaptiveConfig {
    pub k_init: usize,
    pub k_max: usize,
    pub f_w_init: f64,
    pub f_w_step: f64,
    pub leakage_db: f64,
}

impl BgAdaptiveConfig {
    /// `K` from 4 to 8, `f_w` growing by `0.01 * (f_max / 0.5)`, -30 dB.
    pub fn defaults(f_max: f64, f_w_init: f64) -> Self {
        Self { k_init: 4, k_max: 8, f_w_init, f_w_step: 0.01 * (f_max / 0.5), leakage_db: -30.0 }
    }

    fn validate(&self, f_max: f64) -> Result<()> {
        if self.k_init == 0 || self.k_init > self.k_max {
            return Err(SpecError::InvalidInput(format!(
                "need 1 <= k_init ({}) <= k_max ({})",
                self.k_init, self.k_max
            )));
        }
        if !(self.f_w_init > 0.0 && self.f_w_init <= f_max) {
            return Err(SpecError::InvalidInput(format!("f_w_init {} must lie in (0, f_max]", self.f_w_init)));
        }
        if !(self.f_w_step > 0.0) || !self.leakage_db.is_finite() {
            return Err(SpecError::InvalidInput("f_w_step must be positive and leakage_db finite".into()));
        }
        Ok(())
    }
}

/// An estimator with its grid-dependent work done; `apply` only needs sample values.
pub trait PreparedEstimator: Send + Sync {
    fn method(&self) -> Method;
    fn apply(&self, values: &[f64]) -> Result<SpectrumEstimate>;
}

/// Serializable description of an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum EstimatorSpec {
    Mtnufft { k_tapers: usize, epsilon: f64 },
    Mtnufft0 { k_tapers: usize, epsilon: f64 },
    BgFixed { k_tapers: usize },
    BgAdaptive(BgAdaptiveConfig),
    Baseline,
}

impl EstimatorSpec {
    pub fn method(&self) -> Method {
        match self {
            Self::Mtnufft { .. } => Method::Mtnufft,
            Self::Mtnufft0 { .. } => Method::Mtnufft0,
            Self::BgFixed { .. } => Method::BgFixed,
            Self::BgAdaptive(_) => Method::BgAdaptive,
            Self::Baseline => Method::Baseline,
        }
    }

    /// The setting used by the error analysis for `method`.
    pub fn standard(method: Method, plan: &BandPlan, k_tapers: usize) -> Self {
        match method {
            Method::Mtnufft => Self::Mtnufft { k_tapers, epsilon: DEFAULT_EPSILON },
            Method::Mtnufft0 => Self::Mtnufft0 { k_tapers, epsilon: DEFAULT_EPSILON },
            Method::BgFixed => Self::BgFixed { k_tapers },
            Method::BgAdaptive => Self::BgAdaptive(BgAdaptiveConfig::defaults(plan.f_max(), plan.half_width())),
            Method::Baseline => Self::Baseline,
        }
    }

    pub fn prepare(
        &self,
        grid: &SamplingGrid,
        signal_band: &SignalBand,
        plan: &BandPlan,
    ) -> Result<Box<dyn PreparedEstimator>> {
        Ok(match *self {
            Self::Mtnufft { k_tapers, epsilon } => {
                Box::new(PreparedMtnufft::new(grid, signal_band, plan, k_tapers, epsilon, TaperMode::Interpolated)?)
            }
            Self::Mtnufft0 { k_tapers, epsilon } => {
                Box::new(PreparedMtnufft::new(grid, signal_band, plan, k_tapers, epsilon, TaperMode::ExactNominal)?)
            }
            Self::BgFixed { k_tapers } => Box::new(PreparedBands::bg_fixed(grid, signal_band, plan, k_tapers)?),
            Self::BgAdaptive(cfg) => Box::new(PreparedBands::bg_adaptive(grid, signal_band, plan, &cfg)?),
            Self::Baseline => Box::new(PreparedMtnufft::baseline(grid, signal_band, plan)?),
        })
    }

    pub fn estimate(
        &self,
        series: &SignalSeries,
        signal_band: &SignalBand,
        plan: &BandPlan,
    ) -> Result<SpectrumEstimate> {
        self.prepare(series.grid(), signal_band, plan)?.apply(series.values())
    }
}

fn check_plan(signal_band: &SignalBand, plan: &BandPlan) -> Result<()> {
    if (plan.f_max() - signal_band.f_max()).abs() > 1e-12 * signal_band.f_max() {
        return Err(SpecError::InvalidInput(format!(
            "band plan covers [0, {}] but the signal band is [0, {}]",
            plan.f_max(),
            signal_band.f_max()
        )));
    }
    Ok(())
}

fn check_values(expected: usize, values: &[f64]) -> Result<()> {
    if expected != values.len() {
        return Err(SpecError::PlanMismatch { expected, got: values.len() });
    }
    crate::error::ensure_finite("x", values)
}

fn mean_square(j: impl Iterator<Item = Complex64>, k: usize) -> f64 {
    j.map(|z| z.norm_sqr()).sum::<f64>() / k as f64
}

/// One nominal taper set shifted to every band through a shared transform.
pub struct PreparedMtnufft {
    plan: BandPlan,
    method: Method,
    tapers: TaperSet,
    nufft: NufftPlan,
}

impl PreparedMtnufft {
    pub fn new(
        grid: &SamplingGrid,
        signal_band: &SignalBand,
        plan: &BandPlan,
        k_tapers: usize,
        epsilon: f64,
        mode: TaperMode,
    ) -> Result<Self> {
        check_plan(signal_band, plan)?;
        let f_w = plan.half_width();
        let (tapers, method) = match mode {
            TaperMode::Interpolated => {
                let rb = signal_band_kernel(grid, signal_band).entries;
                (gpss_interpolated_with_kernel(grid, &rb, f_w, k_tapers)?, Method::Mtnufft)
            }
            TaperMode::ExactNominal => {
                let solver = GpssSolver::new(grid, signal_band)?;
                (solver.tapers(&AnalysisBand::nominal(f_w)?, k_tapers)?, Method::Mtnufft0)
            }
        };
        let nufft = NufftPlan::new(grid, plan.centers(), epsilon)?;
        Ok(Self { plan: plan.clone(), method, tapers, nufft })
    }

    /// Force a transform path (testing and benchmarking).
    pub fn with_path(mut self, path: TransformPath) -> Result<Self> {
        self.nufft = NufftPlan::with_path(self.nufft.grid(), self.plan.centers(), self.nufft.epsilon(), path)?;
        Ok(self)
    }

    fn baseline(grid: &SamplingGrid, signal_band: &SignalBand, plan: &BandPlan) -> Result<Self> {
        check_plan(signal_band, plan)?;
        let rb = signal_band_kernel(grid, signal_band).entries;
        let tapers = rectangular_taper(grid, &rb, plan.half_width())?;
        let nufft = NufftPlan::new(grid, plan.centers(), DEFAULT_EPSILON)?;
        Ok(Self { plan: plan.clone(), method: Method::Baseline, tapers, nufft })
    }

    pub fn tapers(&self) -> &TaperSet {
        &self.tapers
    }

    pub fn transform_path(&self) -> TransformPath {
        self.nufft.path()
    }

    /// `K x I` eigencoefficients.
    pub fn eigencoefficients(&self, values: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        check_values(self.tapers.grid().len(), values)?;
        eigencoefficients_values(&self.tapers, values, &self.nufft)
    }
}

impl PreparedEstimator for PreparedMtnufft {
    fn method(&self) -> Method {
        self.method
    }

    fn apply(&self, values: &[f64]) -> Result<SpectrumEstimate> {
        let j = self.eigencoefficients(values)?;
        let k = self.tapers.k_tapers();
        let bands = self.plan.len();
        let power = (0..bands).map(|i| mean_square(j.iter().map(|row| row[i]), k)).collect();
        Ok(SpectrumEstimate {
            plan: self.plan.clone(),
            power,
            method: self.method,
            k_used: vec![k; bands],
            f_w_used: vec![self.plan.half_width(); bands],
            flags: self
                .plan
                .boundary_flags()
                .into_iter()
                .map(|boundary| BandFlags { boundary, failed: false })
                .collect(),
        })
    }
}

/// Separate exact tapers per band; `None` marks a failed band.
pub struct PreparedBands {
    plan: BandPlan,
    method: Method,
    n: usize,
    tapers: Vec<Option<TaperSet>>,
}

impl PreparedBands {
    pub fn bg_fixed(grid: &SamplingGrid, signal_band: &SignalBand, plan: &BandPlan, k_tapers: usize) -> Result<Self> {
        check_plan(signal_band, plan)?;
        let solver = GpssSolver::new(grid, signal_band)?;
        let f_w = plan.half_width();
        let tapers = per_band(plan, |i, fc| {
            solver.tapers(&AnalysisBand::new(fc, f_w)?, k_tapers).map_err(|e| band_error(i, fc, e))
        });
        Ok(Self { plan: plan.clone(), method: Method::BgFixed, n: grid.len(), tapers })
    }

    pub fn bg_adaptive(
        grid: &SamplingGrid,
        signal_band: &SignalBand,
        plan: &BandPlan,
        cfg: &BgAdaptiveConfig,
    ) -> Result<Self> {
        check_plan(signal_band, plan)?;
        cfg.validate(signal_band.f_max())?;
        if cfg.k_max > grid.len() {
            return Err(SpecError::InvalidInput(format!("k_max {} exceeds the sample count", cfg.k_max)));
        }
        let solver = GpssSolver::new(grid, signal_band)?;
        let tapers = per_band(plan, |i, fc| adaptive_band(&solver, fc, cfg).map_err(|e| band_error(i, fc, e)));
        Ok(Self { plan: plan.clone(), method: Method::BgAdaptive, n: grid.len(), tapers })
    }

    pub fn tapers(&self) -> &[Option<TaperSet>] {
        &self.tapers
    }
}

fn band_error(i: usize, fc: f64, e: SpecError) -> SpecError {
    log::warn!("band {i} (f_c = {fc}) failed: {e}");
    e
}

fn per_band(plan: &BandPlan, f: impl Fn(usize, f64) -> Result<TaperSet> + Sync) -> Vec<Option<TaperSet>> {
    plan.centers().par_iter().enumerate().map(|(i, &fc)| f(i, fc).ok()).collect()
}

/// Smallest `(f_w, K)` in loop order whose worst leakage is below the threshold;
/// the widest band with `k_max` tapers when none is.
fn adaptive_band(solver: &GpssSolver, fc: f64, cfg: &BgAdaptiveConfig) -> Result<TaperSet> {
    let f_max = solver.signal_band().f_max();
    let mut last = None;
    for step in 0.. {
        let f_w = cfg.f_w_init + step as f64 * cfg.f_w_step;
        if f_w > f_max * (1.0 + 1e-12) {
            break;
        }
        let set = solver.tapers(&AnalysisBand::new(fc, f_w)?, cfg.k_max)?;
        let lambdas = set.eigenvalues().unwrap_or(&[]);
        if let Some(k) = (cfg.k_init..=cfg.k_max).find(|&k| leakage_db(lambdas[k - 1]) < cfg.leakage_db) {
            return Ok(set.truncated(k));
        }
        last = Some(set);
    }
    last.ok_or_else(|| SpecError::InvalidInput("adaptive loop evaluated no bandwidth".into()))
}

impl PreparedEstimator for PreparedBands {
    fn method(&self) -> Method {
        self.method
    }

    fn apply(&self, values: &[f64]) -> Result<SpectrumEstimate> {
        check_values(self.n, values)?;
        let bands = self.plan.len();
        let mut power = Vec::with_capacity(bands);
        let mut k_used = Vec::with_capacity(bands);
        let mut f_w_used = Vec::with_capacity(bands);
        let mut flags = Vec::with_capacity(bands);
        for (i, t) in self.tapers.iter().enumerate() {
            let boundary = self.plan.is_boundary(i);
            match t {
                Some(ts) => {
                    let j = ts.project(values);
                    power.push(mean_square(j.into_iter(), ts.k_tapers()));
                    k_used.push(ts.k_tapers());
                    f_w_used.push(ts.band().half_width());
                    flags.push(BandFlags { boundary, failed: false });
                }
                None => {
                    power.push(f64::NAN);
                    k_used.push(0);
                    f_w_used.push(f64::NAN);
                    flags.push(BandFlags { boundary, failed: true });
                }
            }
        }
        Ok(SpectrumEstimate { plan: self.plan.clone(), power, method: self.method, k_used, f_w_used, flags })
    }
}

/// Shifted nominal tapers with NUFFT eigencoefficients.
pub fn estimate_mtnufft(
    series: &SignalSeries,
    signal_band: &SignalBand,
    plan: &BandPlan,
    k_tapers: usize,
    epsilon: f64,
    taper_mode: TaperMode,
) -> Result<SpectrumEstimate> {
    PreparedMtnufft::new(series.grid(), signal_band, plan, k_tapers, epsilon, taper_mode)?.apply(series.values())
}

/// Exact tapers per band at the plan's half-width.
pub fn estimate_bg_fixed(
    series: &SignalSeries,
    signal_band: &SignalBand,
    plan: &BandPlan,
    k_tapers: usize,
) -> Result<SpectrumEstimate> {
    PreparedBands::bg_fixed(series.grid(), signal_band, plan, k_tapers)?.apply(series.values())
}

/// Exact tapers per band with the taper count and half-width grown until the leakage target is met.
pub fn estimate_bg_adaptive(
    series: &SignalSeries,
    signal_band: &SignalBand,
    plan: &BandPlan,
    cfg: &BgAdaptiveConfig,
) -> Result<SpectrumEstimate> {
    PreparedBands::bg_adaptive(series.grid(), signal_band, plan, cfg)?.apply(series.values())
}

/// Single constant taper.
pub fn estimate_baseline(series: &SignalSeries, plan: &BandPlan) -> Result<SpectrumEstimate> {
    let sb = plan.signal_band();
    PreparedMtnufft::baseline(series.grid(), &sb, plan)?.apply(series.values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nufft::ndft_direct;
    use crate::tapers::dpss_uniform;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn jitter(n: usize, seed: u64) -> SamplingGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SamplingGrid::new(
            (1..=n)
                .map(|i| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    i as f64 + 0.1 * z
                })
                .collect(),
        )
        .unwrap()
    }

    fn setup() -> (SignalBand, BandPlan) {
        (SignalBand::new(0.5).unwrap(), BandPlan::new(0.5, 0.05, 0.01).unwrap())
    }

    #[test]
    fn zero_input_gives_zero_power() {
        let (sb, plan) = setup();
        let g = jitter(50, 1);
        let s = SignalSeries::new(g, vec![0.0; 50]).unwrap();
        for spec in [
            EstimatorSpec::Mtnufft { k_tapers: 4, epsilon: 1e-8 },
            EstimatorSpec::Mtnufft0 { k_tapers: 4, epsilon: 1e-8 },
            EstimatorSpec::BgFixed { k_tapers: 4 },
            EstimatorSpec::Baseline,
        ] {
            let e = spec.estimate(&s, &sb, &plan).unwrap();
            assert!(e.power.iter().all(|&p| p == 0.0), "{}", spec.method());
            assert_eq!(e.len(), 51);
        }
    }

    #[test]
    fn scale_equivariance_and_nonnegativity() {
        let (sb, plan) = setup();
        let g = jitter(50, 2);
        let x = noise(50, 3);
        let s = SignalSeries::new(g, x).unwrap();
        for spec in [
            EstimatorSpec::Mtnufft { k_tapers: 4, epsilon: 1e-8 },
            EstimatorSpec::BgFixed { k_tapers: 4 },
            EstimatorSpec::Baseline,
        ] {
            let a = spec.estimate(&s, &sb, &plan).unwrap();
            let b = spec.estimate(&s.scaled(3.0), &sb, &plan).unwrap();
            for (i, (p, q)) in a.power.iter().zip(&b.power).enumerate() {
                assert!(*p >= 0.0, "{} band {i}: {p} {:?}", spec.method(), a.flags[i]);
                assert!((q - 9.0 * p).abs() <= 1e-12 * q.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn nominal_band_agreement() {
        let (sb, plan) = setup();
        let g = jitter(50, 4);
        let s = SignalSeries::new(g, noise(50, 5)).unwrap();
        let a = estimate_bg_fixed(&s, &sb, &plan, 4).unwrap();
        let b = estimate_mtnufft(&s, &sb, &plan, 4, 1e-8, TaperMode::ExactNominal).unwrap();
        assert!((a.power[0] - b.power[0]).abs() <= 1e-12 * a.power[0]);
        assert_eq!(b.method, Method::Mtnufft0);
    }

    #[test]
    fn uniform_grid_matches_classical_multitaper() {
        let (sb, plan) = setup();
        let g = SamplingGrid::uniform(50, 1.0, 1.0).unwrap();
        let x = noise(50, 6);
        let s = SignalSeries::new(g.clone(), x.clone()).unwrap();
        let est = estimate_mtnufft(&s, &sb, &plan, 4, 1e-10, TaperMode::Interpolated).unwrap();
        let d = dpss_uniform(50, 2.5, 4).unwrap();
        let mut oracle = vec![0.0; 51];
        for v in &d.vectors {
            let y: Vec<Complex64> =
                v.iter().zip(&x).map(|(w, xi)| Complex64::new(0.1f64.sqrt() * w * xi, 0.0)).collect();
            for (o, j) in oracle.iter_mut().zip(ndft_direct(&g, &y, plan.centers()).unwrap()) {
                *o += j.norm_sqr() / 4.0;
            }
        }
        for (p, o) in est.power.iter().zip(&oracle) {
            assert!((p - o).abs() <= 1e-8 * o, "{p} vs {o}");
        }
    }

    #[test]
    fn adaptive_vacuous_threshold_is_fixed() {
        let (sb, plan) = setup();
        let g = jitter(40, 7);
        let s = SignalSeries::new(g, noise(40, 8)).unwrap();
        let mut cfg = BgAdaptiveConfig::defaults(0.5, 0.05);
        cfg.leakage_db = 10.0;
        let a = estimate_bg_adaptive(&s, &sb, &plan, &cfg).unwrap();
        let b = estimate_bg_fixed(&s, &sb, &plan, 4).unwrap();
        for i in 0..plan.len() {
            assert!((a.power[i] - b.power[i]).abs() <= 1e-12 * b.power[i].max(1e-300));
            assert_eq!(a.k_used[i], 4);
        }
    }

    #[test]
    fn adaptive_loop_matches_hand_enumeration() {
        let (sb, plan) = setup();
        let g = SamplingGrid::uniform(50, 1.0, 1.0).unwrap();
        let s = SignalSeries::new(g.clone(), noise(50, 9)).unwrap();
        let cfg = BgAdaptiveConfig::defaults(0.5, 0.05);
        let est = estimate_bg_adaptive(&s, &sb, &plan, &cfg).unwrap();
        let solver = GpssSolver::new(&g, &sb).unwrap();
        let fc = 0.25;
        let i = 25;
        let mut expected = None;
        'outer: for step in 0..46 {
            let fw = 0.05 + 0.01 * step as f64;
            let lam = solver.eigenvalues(&AnalysisBand::new(fc, fw).unwrap(), 8).unwrap();
            for k in 4..=8 {
                if 10.0 * (1.0 - lam[k - 1]).log10() < -30.0 {
                    expected = Some((k, fw));
                    break 'outer;
                }
            }
        }
        let (k, fw) = expected.unwrap();
        assert_eq!(est.k_used[i], k);
        assert!((est.f_w_used[i] - fw).abs() < 1e-12);
        let again = estimate_bg_adaptive(&s, &sb, &plan, &cfg).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn baseline_finds_a_sinusoid() {
        let (_, plan) = setup();
        let g = SamplingGrid::uniform(200, 1.0, 1.0).unwrap();
        let x: Vec<f64> = g.times().iter().map(|t| (2.0 * std::f64::consts::PI * 0.3 * t).cos()).collect();
        let e = estimate_baseline(&SignalSeries::new(g, x).unwrap(), &plan).unwrap();
        let peak = (0..e.len()).max_by(|&a, &b| e.power[a].total_cmp(&e.power[b])).unwrap();
        assert_eq!(peak, 30);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let (sb, plan) = setup();
        let g = jitter(50, 1);
        let p = PreparedMtnufft::new(&g, &sb, &plan, 4, 1e-8, TaperMode::Interpolated).unwrap();
        assert!(matches!(p.apply(&[0.0; 10]), Err(SpecError::PlanMismatch { .. })));
        let other = SignalBand::new(1.0).unwrap();
        assert!(PreparedMtnufft::new(&g, &other, &plan, 4, 1e-8, TaperMode::Interpolated).is_err());
        assert_eq!("bg_fixed".parse::<Method>().unwrap(), Method::BgFixed);
        assert!("mtls".parse::<Method>().is_err());
    }

    #[test]
    fn forced_fast_path_agrees_with_direct() {
        let (sb, plan) = setup();
        let g = jitter(50, 10);
        let x = noise(50, 11);
        let p = PreparedMtnufft::new(&g, &sb, &plan, 4, 1e-10, TaperMode::Interpolated).unwrap();
        assert_eq!(p.transform_path(), TransformPath::Direct);
        let a = p.apply(&x).unwrap();
        let q = PreparedMtnufft::new(&g, &sb, &plan, 4, 1e-10, TaperMode::Interpolated)
            .unwrap()
            .with_path(TransformPath::Fast)
            .unwrap();
        assert_eq!(q.transform_path(), TransformPath::Fast);
        let b = q.apply(&x).unwrap();
        for (u, v) in a.power.iter().zip(&b.power) {
            assert!((u - v).abs() < 1e-7 * u.max(1e-3));
        }
    }
}
