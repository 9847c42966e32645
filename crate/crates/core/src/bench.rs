//! Monte Carlo error analysis and throughput measurement across estimators
//! and sampling schemes.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpecError};
use crate::estimators::{EstimatorSpec, Method, PreparedEstimator, SpectrumEstimate};
use crate::grid::{BandPlan, SamplingGrid, SignalBand, SignalSeries};
use crate::simkit::{derive_seed, generate_grid, NoiseModel, NoiseSource, Scheme, SimConfig};

/// Seed stream tags passed to [`derive_seed`].
const GRID_STREAM: u64 = 0x6772_6964;
const NOISE_STREAM: u64 = 0x6e6f_6973;

/// Methods compared by the standard protocol.
pub const PROTOCOL_METHODS: [Method; 4] = [Method::Mtnufft, Method::BgFixed, Method::BgAdaptive, Method::Baseline];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub f_max: f64,
    pub f_w: f64,
    pub spacing: f64,
    pub k_tapers: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub noise: NoiseModel,
    pub noise_variance: f64,
}

impl Default for BenchConfig {
    /// `f_max = 0.5`, `f_w = 0.05`, 51 bands, `K = 4`, 1000 trials.
    fn default() -> Self {
        Self {
            f_max: 0.5,
            f_w: 0.05,
            spacing: 0.01,
            k_tapers: 4,
            trials: 1000,
            base_seed: 20_240_601,
            noise: NoiseModel::BandLimited,
            noise_variance: 1.0,
        }
    }
}

impl BenchConfig {
    pub fn plan(&self) -> Result<BandPlan> {
        BandPlan::new(self.f_max, self.f_w, self.spacing)
    }

    pub fn signal_band(&self) -> Result<SignalBand> {
        SignalBand::new(self.f_max)
    }

    /// The fixed grid of `scheme` used for every trial.
    pub fn grid(&self, scheme: Scheme) -> Result<SamplingGrid> {
        generate_grid(&SimConfig::standard(scheme, derive_seed(self.base_seed, GRID_STREAM, scheme_index(scheme))))
    }

    /// Noise seed of trial `t`; shared by all methods on a scheme.
    pub fn trial_seed(&self, scheme: Scheme, t: usize) -> u64 {
        derive_seed(self.base_seed, NOISE_STREAM + scheme_index(scheme), t as u64)
    }
}

fn scheme_index(scheme: Scheme) -> u64 {
    Scheme::ALL.iter().position(|&s| s == scheme).unwrap_or(0) as u64
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSem {
    pub mean: f64,
    pub sem: f64,
}

/// Mean, standard error and unbiased variance by two passes.
pub fn summarize(values: &[f64]) -> (MeanSem, f64) {
    let m = values.len();
    if m == 0 {
        return (MeanSem { mean: f64::NAN, sem: f64::NAN }, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m < 2 {
        return (MeanSem { mean, sem: f64::NAN }, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (MeanSem { mean, sem: (var / m as f64).sqrt() }, var)
}

/// Per-band Monte Carlo summary of one method on one scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub scheme: Scheme,
    pub method: Method,
    pub centers: Vec<f64>,
    /// Bands kept in summaries: not boundary-flagged and never failed.
    pub included: Vec<bool>,
    /// `[10 log10(P / (2 f_w))]^2`.
    pub mse_db: Vec<MeanSem>,
    /// `P / (2 f_w)`, one for a unit flat spectrum.
    pub normalized_power: Vec<MeanSem>,
    pub power_variance: Vec<f64>,
    pub k_used: Vec<usize>,
    pub f_w_used: Vec<f64>,
    pub trials: usize,
    pub failed_trials: usize,
    pub config: BenchConfig,
}

impl ErrorReport {
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.centers.len()).filter(|&i| self.included[i])
    }
}

/// Fold per-trial estimates into an [`ErrorReport`].
pub fn aggregate(
    scheme: Scheme,
    method: Method,
    plan: &BandPlan,
    estimates: &[Result<SpectrumEstimate>],
    config: &BenchConfig,
) -> Result<ErrorReport> {
    let ok: Vec<&SpectrumEstimate> = estimates.iter().filter_map(|e| e.as_ref().ok()).collect();
    if ok.len() < 2 {
        return Err(SpecError::InvalidInput(format!(
            "{method} on {scheme}: only {} of {} trials succeeded",
            ok.len(),
            estimates.len()
        )));
    }
    let bands = plan.len();
    let mut included = vec![true; bands];
    let mut mse_db = Vec::with_capacity(bands);
    let mut normalized_power = Vec::with_capacity(bands);
    let mut power_variance = Vec::with_capacity(bands);
    for i in 0..bands {
        if ok.iter().any(|e| e.flags[i].boundary || e.flags[i].failed) {
            included[i] = false;
        }
        let norm: Vec<f64> = ok.iter().map(|e| e.power[i] / (2.0 * e.f_w_used[i])).collect();
        let sq: Vec<f64> = norm.iter().map(|v| (10.0 * v.log10()).powi(2)).collect();
        let power: Vec<f64> = ok.iter().map(|e| e.power[i]).collect();
        mse_db.push(summarize(&sq).0);
        normalized_power.push(summarize(&norm).0);
        power_variance.push(summarize(&power).1);
    }
    Ok(ErrorReport {
        scheme,
        method,
        centers: plan.centers().to_vec(),
        included,
        mse_db,
        normalized_power,
        power_variance,
        k_used: ok[0].k_used.clone(),
        f_w_used: ok[0].f_w_used.clone(),
        trials: estimates.len(),
        failed_trials: estimates.len() - ok.len(),
        config: *config,
    })
}

/// Run a prepared estimator over `trials` noise draws from `source`.
pub fn monte_carlo(
    estimator: &dyn PreparedEstimator,
    source: &(dyn Fn(usize) -> SignalSeries + Sync),
    trials: usize,
) -> Vec<Result<SpectrumEstimate>> {
    (0..trials).into_par_iter().map(|t| estimator.apply(source(t).values())).collect()
}

/// Error analysis of every method on every scheme with shared noise draws.
pub fn run_error_analysis(methods: &[Method], schemes: &[Scheme], config: &BenchConfig) -> Result<Vec<ErrorReport>> {
    if config.trials < 2 {
        return Err(SpecError::InvalidInput(format!("need at least 2 trials, got {}", config.trials)));
    }
    let plan = config.plan()?;
    let sb = config.signal_band()?;
    let mut reports = Vec::with_capacity(methods.len() * schemes.len());
    for &scheme in schemes {
        let grid = config.grid(scheme)?;
        let noise = NoiseSource::new(config.noise, &grid, config.f_max, config.noise_variance)?;
        let source = |t: usize| noise.sample(config.trial_seed(scheme, t));
        for &method in methods {
            let est = EstimatorSpec::standard(method, &plan, config.k_tapers).prepare(&grid, &sb, &plan)?;
            let estimates = monte_carlo(est.as_ref(), &source, config.trials);
            let failed = estimates.iter().filter(|e| e.is_err()).count();
            if failed > 0 {
                log::warn!("{method} on {scheme}: {failed} of {} trials failed", config.trials);
            }
            reports.push(aggregate(scheme, method, &plan, &estimates, config)?);
        }
    }
    Ok(reports)
}

/// Throughput of one method on one scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedReport {
    pub method: Method,
    pub scheme: Scheme,
    pub n_samples: usize,
    pub n_bands: usize,
    pub spectra_per_second: f64,
    pub spectra_per_second_std: f64,
    pub batch_size: usize,
    pub reps: usize,
    pub host: String,
    pub timestamp_unix: u64,
}

pub const MIN_BATCH_SECONDS: f64 = 0.05;

pub fn host_fingerprint() -> String {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    format!("{}-{} threads={threads}", std::env::consts::OS, std::env::consts::ARCH)
}

/// Time `work` (one spectrum per call) in batches of at least 50 ms.
/// Returns `(batch_size, per-batch spectra per second)`; the warm-up batch is dropped.
pub fn time_batches(reps: usize, mut work: impl FnMut(usize) -> Result<()>) -> Result<(usize, Vec<f64>)> {
    if reps < 10 {
        return Err(SpecError::InvalidInput(format!("need at least 10 repetitions, got {reps}")));
    }
    let mut run = |count: usize, offset: usize| -> Result<f64> {
        let start = Instant::now();
        for i in 0..count {
            work(offset + i)?;
        }
        Ok(start.elapsed().as_secs_f64())
    };
    let mut batch = 1;
    loop {
        let dt = run(batch, 0)?;
        if dt >= MIN_BATCH_SECONDS {
            break;
        }
        let grow = (MIN_BATCH_SECONDS / dt.max(1e-9) * 1.2).ceil() as usize;
        batch = (batch * grow.clamp(2, 100)).max(batch + 1);
    }
    let mut rates = Vec::with_capacity(reps);
    for r in 0..reps {
        let dt = run(batch, (r + 1) * batch)?;
        rates.push(batch as f64 / dt);
    }
    Ok((batch, rates))
}

/// Spectra per second, counting grid preparation and application per spectrum.
pub fn run_speed_analysis(
    methods: &[Method],
    schemes: &[Scheme],
    reps: usize,
    config: &BenchConfig,
) -> Result<Vec<SpeedReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| SpecError::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| {
        let plan = config.plan()?;
        let sb = config.signal_band()?;
        let mut out = Vec::new();
        for &scheme in schemes {
            let grid = config.grid(scheme)?;
            let noise = NoiseSource::new(NoiseModel::Iid, &grid, config.f_max, 1.0)?;
            let pool: Vec<SignalSeries> = (0..16).map(|t| noise.sample(config.trial_seed(scheme, t))).collect();
            for &method in methods {
                let spec = EstimatorSpec::standard(method, &plan, config.k_tapers);
                let (batch, rates) = time_batches(reps, |i| {
                    let s = &pool[i % pool.len()];
                    std::hint::black_box(spec.estimate(s, &sb, &plan)?);
                    Ok(())
                })?;
                let (stats, var) = summarize(&rates);
                out.push(SpeedReport {
                    method,
                    scheme,
                    n_samples: grid.len(),
                    n_bands: plan.len(),
                    spectra_per_second: stats.mean,
                    spectra_per_second_std: var.sqrt(),
                    batch_size: batch,
                    reps,
                    host: host_fingerprint(),
                    timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
                });
            }
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::BandFlags;

    struct ConstantOracle(BandPlan);

    impl PreparedEstimator for ConstantOracle {
        fn method(&self) -> Method {
            Method::Baseline
        }
        fn apply(&self, _: &[f64]) -> Result<SpectrumEstimate> {
            let p = &self.0;
            Ok(SpectrumEstimate {
                plan: p.clone(),
                power: vec![2.0 * p.half_width(); p.len()],
                method: Method::Baseline,
                k_used: vec![1; p.len()],
                f_w_used: vec![p.half_width(); p.len()],
                flags: p.boundary_flags().into_iter().map(|b| BandFlags { boundary: b, failed: false }).collect(),
            })
        }
    }

    #[test]
    fn constant_oracle_has_zero_error() {
        let cfg = BenchConfig { trials: 20, ..Default::default() };
        let plan = cfg.plan().unwrap();
        let grid = cfg.grid(Scheme::Uniform).unwrap();
        let noise = NoiseSource::new(NoiseModel::Iid, &grid, 0.5, 1.0).unwrap();
        let src = |t: usize| noise.sample(t as u64);
        let est = monte_carlo(&ConstantOracle(plan.clone()), &src, cfg.trials);
        let r = aggregate(Scheme::Uniform, Method::Baseline, &plan, &est, &cfg).unwrap();
        assert!(r.mse_db.iter().all(|m| m.mean == 0.0 && m.sem == 0.0));
        assert!(r.normalized_power.iter().all(|m| m.mean == 1.0));
        assert_eq!(r.interior().count(), 31);
    }

    #[test]
    fn sem_matches_welford() {
        let v: Vec<f64> = (0..97).map(|i| ((i * 37) % 11) as f64 * 0.3 - 1.0).collect();
        let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
        for &x in &v {
            n += 1.0;
            let d = x - mean;
            mean += d / n;
            m2 += d * (x - mean);
        }
        let (s, var) = summarize(&v);
        assert!((s.mean - mean).abs() < 1e-14);
        assert!((var - m2 / (n - 1.0)).abs() < 1e-13);
        assert!((s.sem - (m2 / (n - 1.0) / n).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn error_analysis_is_reproducible() {
        let cfg = BenchConfig { trials: 8, ..Default::default() };
        let a = run_error_analysis(&[Method::Mtnufft, Method::Baseline], &[Scheme::Jitter], &cfg).unwrap();
        let b = run_error_analysis(&[Method::Mtnufft, Method::Baseline], &[Scheme::Jitter], &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        for r in &a {
            assert!(r.mse_db.iter().all(|m| m.mean >= 0.0 && m.sem >= 0.0));
            assert_eq!(r.failed_trials, 0);
        }
        assert!(run_error_analysis(&[Method::Mtnufft], &[Scheme::Uniform], &BenchConfig { trials: 1, ..cfg }).is_err());
    }

    #[test]
    fn batch_timer() {
        let (batch, rates) = time_batches(10, |_| {
            std::hint::black_box((0..2000).map(|i| (i as f64).sqrt()).sum::<f64>());
            Ok(())
        })
        .unwrap();
        assert!(batch >= 1 && rates.len() == 10 && rates.iter().all(|&r| r > 0.0));
        assert!(time_batches(9, |_| Ok(())).is_err());
    }
}
