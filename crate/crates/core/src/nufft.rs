//! Fourier sums `J(f) = sum_n y_n exp(-j 2 pi f t_n)` at uniformly spaced
//! frequencies: direct summation, or Gaussian gridding onto an oversampled
//! FFT grid.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpecError};
use crate::grid::{SamplingGrid, SignalSeries};
use crate::tapers::TaperSet;

/// Below this many `N * I` terms the direct sum is used.
pub const DIRECT_THRESHOLD: usize = 1 << 14;
pub const OVERSAMPLING: usize = 2;
/// Spreading half-width per unit of `-ln(eps)`.
const SPREAD_PER_NEPER: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformPath {
    Direct,
    Fast,
}

/// Reusable transform from one sampling grid to a set of frequencies.
pub struct NufftPlan {
    grid: SamplingGrid,
    freq_centers: Vec<f64>,
    epsilon: f64,
    spread_width: usize,
    path: TransformPath,
    engine: Engine,
}

enum Engine {
    /// Row-major `I x N` matrix of `exp(-j 2 pi f_i t_n)`.
    Direct(Vec<Complex64>),
    Fast(Gridding),
}

struct Gridding {
    modes: usize,
    fine: usize,
    prephase: Vec<Complex64>,
    /// First fine-grid index touched by each sample.
    start: Vec<usize>,
    /// `2 * spread_width` Gaussian weights per sample.
    kernel: Vec<f64>,
    deconv: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for NufftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NufftPlan")
            .field("n", &self.grid.len())
            .field("centers", &self.freq_centers.len())
            .field("epsilon", &self.epsilon)
            .field("spread_width", &self.spread_width)
            .field("path", &self.path)
            .finish()
    }
}

/// Spreading half-width (fine-grid points on each side) for precision `eps`.
pub fn spread_width(epsilon: f64) -> usize {
    ((-epsilon.ln()) * SPREAD_PER_NEPER).ceil() as usize + 1
}

fn uniform_step(freqs: &[f64]) -> Option<f64> {
    if freqs.len() < 2 {
        return None;
    }
    let df = (freqs[freqs.len() - 1] - freqs[0]) / (freqs.len() - 1) as f64;
    if !(df > 0.0) {
        return None;
    }
    let ok = freqs.iter().enumerate().all(|(i, &f)| (f - (freqs[0] + i as f64 * df)).abs() <= 1e-9 * df);
    ok.then_some(df)
}

impl NufftPlan {
    /// Chooses the direct sum for small problems or non-uniform frequencies.
    pub fn new(grid: &SamplingGrid, freq_centers: &[f64], epsilon: f64) -> Result<Self> {
        let path = if grid.len() * freq_centers.len() < DIRECT_THRESHOLD {
            TransformPath::Direct
        } else {
            TransformPath::Fast
        };
        Self::with_path(grid, freq_centers, epsilon, path)
    }

    /// Request a path; `Fast` falls back to `Direct` for non-uniform frequencies.
    pub fn with_path(grid: &SamplingGrid, freq_centers: &[f64], epsilon: f64, path: TransformPath) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1e-2) {
            return Err(SpecError::InvalidInput(format!("precision {epsilon} must lie in (0, 1e-2]")));
        }
        if freq_centers.is_empty() {
            return Err(SpecError::InvalidInput("no frequencies requested".into()));
        }
        crate::error::ensure_finite("freq_centers", freq_centers)?;
        let msp = spread_width(epsilon);
        let mut path = path;
        let step = uniform_step(freq_centers);
        if path == TransformPath::Fast && step.is_none() {
            log::warn!("frequencies are not uniformly spaced; using direct summation");
            path = TransformPath::Direct;
        }
        let engine = match path {
            TransformPath::Direct => Engine::Direct(direct_matrix(grid.times(), freq_centers)),
            TransformPath::Fast => {
                Engine::Fast(Gridding::new(grid.times(), freq_centers[0], step.unwrap_or(1.0), freq_centers.len(), msp))
            }
        };
        Ok(Self { grid: grid.clone(), freq_centers: freq_centers.to_vec(), epsilon, spread_width: msp, path, engine })
    }

    pub fn path(&self) -> TransformPath {
        self.path
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn spread_width(&self) -> usize {
        self.spread_width
    }

    pub fn oversampling(&self) -> usize {
        OVERSAMPLING
    }

    pub fn freq_centers(&self) -> &[f64] {
        &self.freq_centers
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn execute(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.grid.len();
        if values.len() != n {
            return Err(SpecError::PlanMismatch { expected: n, got: values.len() });
        }
        Ok(match &self.engine {
            Engine::Direct(m) => m
                .chunks_exact(n)
                .map(|row| row.iter().zip(values).fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b))
                .collect(),
            Engine::Fast(g) => g.execute(values, self.spread_width, self.freq_centers.len()),
        })
    }
}

/// Steps between exact re-evaluations of the phase recurrence.
const PHASE_REANCHOR: usize = 32;

fn direct_matrix(t: &[f64], freqs: &[f64]) -> Vec<Complex64> {
    let n = t.len();
    let fmax = freqs.iter().fold(0.0f64, |a, f| a.max(f.abs()));
    let exact_step = uniform_step(freqs).filter(|&df| {
        freqs.iter().enumerate().all(|(i, &f)| (f - (freqs[0] + i as f64 * df)).abs() <= 4.0 * f64::EPSILON * fmax)
    });
    let Some(df) = exact_step else {
        let mut m = Vec::with_capacity(n * freqs.len());
        for &f in freqs {
            m.extend(t.iter().map(|&tn| Complex64::from_polar(1.0, -2.0 * PI * f * tn)));
        }
        return m;
    };
    // e^{-j 2 pi (f_0 + i df) t} by repeated multiplication, re-anchored periodically
    let mut m = vec![Complex64::new(0.0, 0.0); n * freqs.len()];
    for (col, &tn) in t.iter().enumerate() {
        let step = Complex64::from_polar(1.0, -2.0 * PI * df * tn);
        let mut z = Complex64::new(1.0, 0.0);
        for (i, &f) in freqs.iter().enumerate() {
            z = if i % PHASE_REANCHOR == 0 { Complex64::from_polar(1.0, -2.0 * PI * f * tn) } else { z * step };
            m[i * n + col] = z;
        }
    }
    m
}

impl Gridding {
    fn new(t: &[f64], f0: f64, df: f64, count: usize, msp: usize) -> Self {
        let modes = count + count % 2;
        let mut fine = (OVERSAMPLING * modes).max(2 * (2 * msp + 1));
        fine += fine % 2;
        let r = fine as f64 / modes as f64;
        let tau = PI * msp as f64 / ((modes * modes) as f64 * r * (r - 0.5));
        let half = (modes / 2) as f64;
        let h = 2.0 * PI / fine as f64;

        let mut prephase = Vec::with_capacity(t.len());
        let mut start = Vec::with_capacity(t.len());
        let mut kernel = Vec::with_capacity(t.len() * 2 * msp);
        for &tn in t {
            prephase.push(Complex64::from_polar(1.0, -2.0 * PI * (f0 + half * df) * tn));
            let x = (2.0 * PI * (df * tn).rem_euclid(1.0)).rem_euclid(2.0 * PI);
            let l0 = (x / h).floor() as i64;
            let first = l0 - msp as i64 + 1;
            start.push(first.rem_euclid(fine as i64) as usize);
            for l in first..first + 2 * msp as i64 {
                let d = l as f64 * h - x;
                kernel.push((-d * d / (4.0 * tau)).exp());
            }
        }
        let scale = (PI / tau).sqrt() / fine as f64;
        let deconv = (0..modes)
            .map(|m| {
                let k = m as f64 - half;
                scale * (k * k * tau).exp()
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(fine);
        Self { modes, fine, prephase, start, kernel, deconv, fft }
    }

    fn execute(&self, values: &[Complex64], msp: usize, count: usize) -> Vec<Complex64> {
        let width = 2 * msp;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fine];
        for (n, &y) in values.iter().enumerate() {
            let c = y * self.prephase[n];
            let g = &self.kernel[n * width..(n + 1) * width];
            let s = self.start[n];
            if s + width <= self.fine {
                for (b, &w) in buf[s..s + width].iter_mut().zip(g) {
                    *b += c * w;
                }
            } else {
                for (j, &w) in g.iter().enumerate() {
                    buf[(s + j) % self.fine] += c * w;
                }
            }
        }
        self.fft.process(&mut buf);
        let half = self.modes / 2;
        (0..count)
            .map(|m| {
                let k = m as i64 - half as i64;
                let idx = k.rem_euclid(self.fine as i64) as usize;
                buf[idx] * self.deconv[m]
            })
            .collect()
    }
}

/// Exact Fourier sums by direct summation.
pub fn ndft_direct(grid: &SamplingGrid, values: &[Complex64], freq_centers: &[f64]) -> Result<Vec<Complex64>> {
    if values.len() != grid.len() {
        return Err(SpecError::PlanMismatch { expected: grid.len(), got: values.len() });
    }
    let t = grid.times();
    Ok(freq_centers
        .iter()
        .map(|&f| {
            t.iter().zip(values).fold(Complex64::new(0.0, 0.0), |acc, (&tn, &y)| {
                acc + y * Complex64::from_polar(1.0, -2.0 * PI * f * tn)
            })
        })
        .collect())
}

/// `J_k(f_i) = sum_n conj(w_k[n]) x[n] exp(-j 2 pi f_i t_n)`, one row per taper.
pub fn eigencoefficients(tapers: &TaperSet, series: &SignalSeries, plan: &NufftPlan) -> Result<Vec<Vec<Complex64>>> {
    let n = plan.grid().len();
    if tapers.grid().len() != n {
        return Err(SpecError::PlanMismatch { expected: n, got: tapers.grid().len() });
    }
    if series.len() != n {
        return Err(SpecError::PlanMismatch { expected: n, got: series.len() });
    }
    eigencoefficients_values(tapers, series.values(), plan)
}

pub(crate) fn eigencoefficients_values(tapers: &TaperSet, x: &[f64], plan: &NufftPlan) -> Result<Vec<Vec<Complex64>>> {
    (0..tapers.k_tapers())
        .map(|k| {
            let y: Vec<Complex64> = tapers.weights().complex(k).iter().zip(x).map(|(w, &v)| w.conj() * v).collect();
            plan.execute(&y)
        })
        .collect()
}
