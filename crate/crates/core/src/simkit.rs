//! Sampling schemes, test signals and uniform resampling.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::eig::{CholeskyFactor, SquareMatrix};
use crate::error::{Result, SpecError};
use crate::grid::{SamplingGrid, SignalSeries};
use crate::kernels::lowpass_kernel;

/// Redraws allowed before a jittered grid that is not increasing is an error.
pub const JITTER_REDRAW_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Uniform,
    Jitter,
    Missing,
    Arithmetic,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Uniform, Scheme::Jitter, Scheme::Missing, Scheme::Arithmetic];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Uniform => "uniform",
            Scheme::Jitter => "jitter",
            Scheme::Missing => "missing",
            Scheme::Arithmetic => "arithmetic",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| SpecError::InvalidInput(format!("unknown sampling scheme {s:?}")))
    }
}

/// Parameters of a sampling scheme. Nominal times are `t_n = n / intensity`,
/// `n = 1..=n`, except for the arithmetic scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub n: usize,
    pub jitter_sigma: f64,
    pub intensity: f64,
    /// One-based indices dropped by the missing-data scheme.
    pub missing_indices: Vec<usize>,
    pub arith_a: f64,
    pub arith_b: f64,
    pub seed: u64,
}

impl SimConfig {
    /// The benchmark configuration of each scheme (50 samples).
    pub fn standard(scheme: Scheme, seed: u64) -> Self {
        let a = 2.0 / 3.0;
        let base = Self {
            scheme,
            n: 50,
            jitter_sigma: 0.0,
            intensity: 1.0,
            missing_indices: Vec::new(),
            arith_a: a,
            arith_b: a / 48.0,
            seed,
        };
        match scheme {
            Scheme::Uniform | Scheme::Arithmetic => base,
            Scheme::Jitter => Self { jitter_sigma: 0.1, ..base },
            Scheme::Missing => {
                Self { n: 60, intensity: 1.2, missing_indices: vec![1, 5, 17, 18, 19, 23, 27, 32, 53, 56], ..base }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(SpecError::InvalidInput(format!("need at least 2 samples, got {}", self.n)));
        }
        if !(self.jitter_sigma >= 0.0) || !self.jitter_sigma.is_finite() {
            return Err(SpecError::InvalidInput(format!("jitter sigma {} must be >= 0", self.jitter_sigma)));
        }
        if !(self.intensity > 0.0) || !self.intensity.is_finite() {
            return Err(SpecError::InvalidInput(format!("intensity {} must be > 0", self.intensity)));
        }
        if let Some(&bad) = self.missing_indices.iter().find(|&&i| i == 0 || i > self.n) {
            return Err(SpecError::InvalidInput(format!("missing index {bad} outside 1..={}", self.n)));
        }
        if !self.arith_a.is_finite() || !self.arith_b.is_finite() {
            return Err(SpecError::InvalidInput("arithmetic coefficients must be finite".into()));
        }
        Ok(())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 mix of a base seed with a stream tag and an index.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn generate_grid(config: &SimConfig) -> Result<SamplingGrid> {
    config.validate()?;
    let nominal = |i: usize| i as f64 / config.intensity;
    match config.scheme {
        Scheme::Uniform => SamplingGrid::new((1..=config.n).map(nominal).collect()),
        Scheme::Missing => {
            let times = (1..=config.n).filter(|i| !config.missing_indices.contains(i)).map(nominal).collect();
            SamplingGrid::new(times)
        }
        Scheme::Arithmetic => {
            let (a, b) = (config.arith_a, config.arith_b);
            let times = (0..config.n).map(|i| 1.0 + a * i as f64 + b * i as f64 * (i as f64 - 1.0) / 2.0).collect();
            SamplingGrid::new(times).map_err(|e| SpecError::Generation(e.to_string()))
        }
        Scheme::Jitter => {
            let dist = Normal::new(0.0, config.jitter_sigma).map_err(|e| SpecError::Generation(e.to_string()))?;
            let mut r = rng(config.seed);
            for attempt in 0..JITTER_REDRAW_BUDGET {
                let times: Vec<f64> = (1..=config.n).map(|i| nominal(i) + dist.sample(&mut r)).collect();
                if times.windows(2).all(|w| w[1] > w[0]) {
                    if attempt > 0 {
                        log::info!("jittered grid accepted after {attempt} redraws");
                    }
                    return SamplingGrid::new(times);
                }
            }
            Err(SpecError::Generation(format!(
                "no increasing jittered grid within {JITTER_REDRAW_BUDGET} draws (sigma = {})",
                config.jitter_sigma
            )))
        }
    }
}

/// Independent zero-mean Gaussian samples.
pub fn generate_white_noise(grid: &SamplingGrid, variance: f64, seed: u64) -> Result<SignalSeries> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(SpecError::InvalidInput(format!("variance {variance} must be positive")));
    }
    let sd = variance.sqrt();
    let mut r = rng(seed);
    let values = (0..grid.len())
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut r);
            sd * z
        })
        .collect();
    SignalSeries::new(grid.clone(), values)
}

/// Exact samples of a Gaussian process with flat spectrum on `[-f_max, f_max]`,
/// i.e. covariance `variance / (2 f_max) * R(B)`.
pub struct BandLimitedNoise {
    grid: SamplingGrid,
    factor: SquareMatrix<f64>,
}

impl BandLimitedNoise {
    pub fn new(grid: &SamplingGrid, f_max: f64, variance: f64) -> Result<Self> {
        if !(variance > 0.0) || !(f_max > 0.0) {
            return Err(SpecError::InvalidInput("variance and f_max must be positive".into()));
        }
        let mut cov = lowpass_kernel(grid, f_max);
        let scale = variance / (2.0 * f_max);
        cov.as_mut_slice().iter_mut().for_each(|v| *v *= scale);
        let chol = CholeskyFactor::new(&cov)?;
        Ok(Self { grid: grid.clone(), factor: chol.lower().clone() })
    }

    pub fn sample(&self, seed: u64) -> SignalSeries {
        let mut r = rng(seed);
        let z: Vec<f64> = (0..self.grid.len()).map(|_| StandardNormal.sample(&mut r)).collect();
        let values = (0..z.len()).map(|i| self.factor.row(i)[..=i].iter().zip(&z).map(|(l, z)| l * z).sum()).collect();
        SignalSeries::new(self.grid.clone(), values).expect("lengths match")
    }
}

/// How white noise is realized on a nonuniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// Independent samples.
    Iid,
    /// Samples of a band-limited process with flat spectrum on the signal band.
    BandLimited,
}

impl std::str::FromStr for NoiseModel {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(Self::Iid),
            "band_limited" => Ok(Self::BandLimited),
            _ => Err(SpecError::InvalidInput(format!("unknown noise model {s:?}"))),
        }
    }
}

/// Draws repeated white-noise realizations on one grid.
pub enum NoiseSource {
    Iid { grid: SamplingGrid, variance: f64 },
    BandLimited(BandLimitedNoise),
}

impl NoiseSource {
    pub fn new(model: NoiseModel, grid: &SamplingGrid, f_max: f64, variance: f64) -> Result<Self> {
        Ok(match model {
            NoiseModel::Iid => Self::Iid { grid: grid.clone(), variance },
            NoiseModel::BandLimited => Self::BandLimited(BandLimitedNoise::new(grid, f_max, variance)?),
        })
    }

    pub fn sample(&self, seed: u64) -> SignalSeries {
        match self {
            Self::Iid { grid, variance } => generate_white_noise(grid, *variance, seed).expect("validated variance"),
            Self::BandLimited(b) => b.sample(seed),
        }
    }
}

/// `amplitude * cos(2 pi freq t + phase)` plus independent noise.
pub fn generate_line_plus_noise(
    grid: &SamplingGrid,
    freq: f64,
    amplitude: f64,
    phase: f64,
    noise_var: f64,
    seed: u64,
) -> Result<SignalSeries> {
    if !(noise_var >= 0.0) {
        return Err(SpecError::InvalidInput(format!("noise variance {noise_var} must be >= 0")));
    }
    let line = grid.times().iter().map(|&t| amplitude * (2.0 * PI * freq * t + phase).cos());
    let values: Vec<f64> = if noise_var > 0.0 {
        let noise = generate_white_noise(grid, noise_var, seed)?;
        line.zip(noise.values()).map(|(a, b)| a + b).collect()
    } else {
        line.collect()
    };
    SignalSeries::new(grid.clone(), values)
}

/// Linear interpolation onto `t_1, t_1 + 1/rate, ...` up to `t_N`.
pub fn resample_uniform(series: &SignalSeries, rate: f64) -> Result<SignalSeries> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(SpecError::InvalidInput(format!("rate {rate} must be positive")));
    }
    let t = series.grid().times();
    let x = series.values();
    let (t0, t_end) = (series.grid().first(), series.grid().last());
    let count = ((t_end - t0) * rate * (1.0 + 1e-12)).floor() as usize + 1;
    let mut times = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count);
    let mut j = 0;
    for k in 0..count {
        let tk = (t0 + k as f64 / rate).min(t_end);
        while j + 2 < t.len() && t[j + 1] <= tk {
            j += 1;
        }
        let u = ((tk - t[j]) / (t[j + 1] - t[j])).clamp(0.0, 1.0);
        times.push(tk);
        values.push(x[j] + u * (x[j + 1] - x[j]));
    }
    SignalSeries::new(SamplingGrid::new(times)?, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_grids() {
        let u = generate_grid(&SimConfig::standard(Scheme::Uniform, 0)).unwrap();
        assert_eq!(u.times(), (1..=50).map(|i| i as f64).collect::<Vec<_>>().as_slice());
        assert!((u.mean_dt() - 49.0 / 50.0).abs() < 1e-15);

        let mut cfg = SimConfig::standard(Scheme::Arithmetic, 0);
        cfg.n = 2;
        let a = generate_grid(&cfg).unwrap();
        assert_eq!(a.times()[0], 1.0);
        assert!((a.times()[1] - (1.0 + 2.0 / 3.0)).abs() < 1e-15);

        let m = generate_grid(&SimConfig::standard(Scheme::Missing, 0)).unwrap();
        assert_eq!(m.len(), 50);
        assert!((m.first() - 2.0 * 5.0 / 6.0).abs() < 1e-12);

        let j = generate_grid(&SimConfig::standard(Scheme::Jitter, 4)).unwrap();
        assert_eq!(j.len(), 50);
        assert_eq!(j, generate_grid(&SimConfig::standard(Scheme::Jitter, 4)).unwrap());
    }

    #[test]
    fn jitter_spacing_mean() {
        let mut cfg = SimConfig::standard(Scheme::Jitter, 1);
        cfg.n = 10_001;
        let g = generate_grid(&cfg).unwrap();
        let d: Vec<f64> = g.times().windows(2).map(|w| w[1] - w[0]).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        let sd = (d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (d.len() - 1) as f64).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * sd / (d.len() as f64).sqrt());
    }

    #[test]
    fn impossible_jitter_is_a_generation_error() {
        let mut cfg = SimConfig::standard(Scheme::Jitter, 1);
        cfg.jitter_sigma = 50.0;
        assert!(matches!(generate_grid(&cfg), Err(SpecError::Generation(_))));
        cfg.missing_indices = vec![99];
        assert!(generate_grid(&cfg).is_err());
    }

    #[test]
    fn white_noise_moments_and_determinism() {
        let g = SamplingGrid::uniform(1_000_000, 0.0, 1.0).unwrap();
        let s = generate_white_noise(&g, 2.0, 17).unwrap();
        let v = s.values();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        assert!(mean.abs() <= 4.0 * 2f64.sqrt() / 1e3);
        assert!((var / 2.0 - 1.0).abs() <= 0.02);
        let small = SamplingGrid::uniform(20, 0.0, 1.0).unwrap();
        assert_eq!(generate_white_noise(&small, 1.0, 3).unwrap(), generate_white_noise(&small, 1.0, 3).unwrap());
    }

    #[test]
    fn band_limited_noise_is_white_on_the_integer_grid() {
        let g = SamplingGrid::uniform(30, 1.0, 1.0).unwrap();
        let b = BandLimitedNoise::new(&g, 0.5, 1.0).unwrap();
        // R(B) is the identity here, so the factor is too
        for i in 0..30 {
            for j in 0..30 {
                assert!((b.factor[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn line_plus_noise_cases() {
        let g = SamplingGrid::uniform(10, 0.0, 0.5).unwrap();
        let s = generate_line_plus_noise(&g, 0.2, 2.0, 0.3, 0.0, 1).unwrap();
        for (t, x) in g.times().iter().zip(s.values()) {
            assert_eq!(*x, 2.0 * (2.0 * PI * 0.2 * t + 0.3).cos());
        }
        let z = generate_line_plus_noise(&g, 0.2, 0.0, 0.3, 1.5, 9).unwrap();
        assert_eq!(z.values(), generate_white_noise(&g, 1.5, 9).unwrap().values());
    }

    #[test]
    fn resampling_cases() {
        let g = SamplingGrid::new(vec![0.0, 1.0]).unwrap();
        let s = SignalSeries::new(g, vec![0.0, 1.0]).unwrap();
        let r = resample_uniform(&s, 2.0).unwrap();
        assert_eq!(r.grid().times(), &[0.0, 0.5, 1.0]);
        assert_eq!(r.values(), &[0.0, 0.5, 1.0]);

        let u = SamplingGrid::uniform(25, 3.0, 0.25).unwrap();
        let x = generate_white_noise(&u, 1.0, 2).unwrap();
        let same = resample_uniform(&x, 4.0).unwrap();
        assert_eq!(same.len(), 25);
        for (a, b) in same.values().iter().zip(x.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_distinct() {
        let a = derive_seed(1, 2, 3);
        assert_ne!(a, derive_seed(1, 2, 4));
        assert_ne!(a, derive_seed(1, 3, 3));
        assert_eq!(a, derive_seed(1, 2, 3));
    }
}
