//! Harmonic F-test on eigencoefficients, F quantiles, and the suboptimality
//! measure of shifted nominal tapers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::checked_beta_reg;

use crate::error::{Result, SpecError};
use crate::grid::{AnalysisBand, BandPlan, SamplingGrid, SignalBand};
use crate::tapers::{GpssSolver, TaperSet};

pub const DEFAULT_F_CAP: f64 = 1e12;
/// Residual below this fraction of the regression term saturates the statistic.
pub const SATURATION_RATIO: f64 = 1e-12;

/// Upper-tail probability of `F(d1, d2)` at `x`.
pub fn f_survival(x: f64, d1: f64, d2: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    checked_beta_reg(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)).unwrap_or(f64::NAN)
}

/// `x` with `P(F > x) = p` for `F ~ F(d1, d2)`.
pub fn f_quantile(p: f64, d1: usize, d2: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SpecError::InvalidInput(format!("p = {p} must lie in (0, 1)")));
    }
    if d1 == 0 || d2 == 0 {
        return Err(SpecError::InvalidInput("degrees of freedom must be positive".into()));
    }
    let (a, b) = (d1 as f64, d2 as f64);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f_survival(hi, a, b) > p {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(SpecError::NoConvergence(0));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_survival(mid, a, b) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub label: String,
    pub p: f64,
    pub value: f64,
}

/// Per-band harmonic F statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FTestResult {
    pub plan: BandPlan,
    pub f_stat: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub dof: (usize, usize),
    /// Ordered by decreasing `p`, hence increasing value.
    pub critical_values: Vec<CriticalValue>,
    /// Residual vanished; the statistic is the cap.
    pub saturated: Vec<bool>,
    /// `2 f_c <= f_w`, outside the test's stated validity.
    pub invalid: Vec<bool>,
}

impl FTestResult {
    pub fn critical(&self, label: &str) -> Option<f64> {
        self.critical_values.iter().find(|c| c.label == label).map(|c| c.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTestOptions {
    pub cap: f64,
}

impl Default for FTestOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_F_CAP }
    }
}

/// Critical values at `p = 0.05, 0.01` and the Rayleigh level `1 / n`.
pub fn critical_values(k: usize, n: usize) -> Result<Vec<CriticalValue>> {
    let d2 = 2 * k - 2;
    let mut levels =
        vec![("p05".to_string(), 0.05), ("p01".to_string(), 0.01), ("rayleigh".to_string(), 1.0 / n as f64)];
    levels.sort_by(|a, b| b.1.total_cmp(&a.1));
    levels.into_iter().map(|(label, p)| Ok(CriticalValue { label, p, value: f_quantile(p, 2, d2)? })).collect()
}

/// Regress the `K x I` eigencoefficients on the tapers' zero-frequency responses.
pub fn f_test(eigencoeffs: &[Vec<Complex64>], tapers: &TaperSet, plan: &BandPlan) -> Result<FTestResult> {
    f_test_with(eigencoeffs, tapers, plan, &FTestOptions::default())
}

pub fn f_test_with(
    eigencoeffs: &[Vec<Complex64>],
    tapers: &TaperSet,
    plan: &BandPlan,
    opts: &FTestOptions,
) -> Result<FTestResult> {
    let k = tapers.k_tapers();
    let n = tapers.grid().len();
    if k < 2 {
        return Err(SpecError::InvalidInput("the F-test needs at least 2 tapers".into()));
    }
    if eigencoeffs.len() != k {
        return Err(SpecError::PlanMismatch { expected: k, got: eigencoeffs.len() });
    }
    if let Some(row) = eigencoeffs.iter().find(|r| r.len() != plan.len()) {
        return Err(SpecError::PlanMismatch { expected: plan.len(), got: row.len() });
    }
    let w0 = tapers.zero_frequency_response();
    let w_energy: f64 = w0.iter().map(|w| w.norm_sqr()).sum();
    if w_energy <= 1e-14 * (k * n) as f64 {
        return Err(SpecError::DegenerateTapers(w_energy));
    }

    let bands = plan.len();
    let mut f_stat = Vec::with_capacity(bands);
    let mut amplitude = Vec::with_capacity(bands);
    let mut saturated = Vec::with_capacity(bands);
    for i in 0..bands {
        let c = (0..k).map(|kk| eigencoeffs[kk][i] * w0[kk].conj()).sum::<Complex64>() / w_energy;
        let num = c.norm_sqr() * (k - 1) as f64 * w_energy;
        let den: f64 = (0..k).map(|kk| (eigencoeffs[kk][i] - c * w0[kk]).norm_sqr()).sum();
        let (f, sat) = if num == 0.0 {
            (0.0, false)
        } else if den < SATURATION_RATIO * num {
            (opts.cap, true)
        } else {
            ((num / den).min(opts.cap), false)
        };
        f_stat.push(f);
        amplitude.push(c);
        saturated.push(sat);
    }
    let fw = plan.half_width();
    Ok(FTestResult {
        plan: plan.clone(),
        f_stat,
        amplitude,
        dof: (2, 2 * k - 2),
        critical_values: critical_values(k, n)?,
        saturated,
        invalid: plan.centers().iter().map(|&fc| 2.0 * fc <= fw).collect(),
    })
}

/// Per-band mean eigenvalue gap between each band and the nominal band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuboptimalityReport {
    pub plan: BandPlan,
    /// NaN where the band's eigensolve failed.
    pub epsilon_measure: Vec<f64>,
    pub nominal_eigenvalues: Vec<f64>,
    pub failed: Vec<bool>,
}

pub fn suboptimality(
    grid: &SamplingGrid,
    signal_band: &SignalBand,
    plan: &BandPlan,
    k_tapers: usize,
) -> Result<SuboptimalityReport> {
    let solver = GpssSolver::new(grid, signal_band)?;
    suboptimality_with(&solver, plan, k_tapers)
}

pub fn suboptimality_with(solver: &GpssSolver, plan: &BandPlan, k_tapers: usize) -> Result<SuboptimalityReport> {
    let f_w = plan.half_width();
    let nominal = solver.eigenvalues(&AnalysisBand::nominal(f_w)?, k_tapers)?;
    let per_band: Vec<Option<f64>> = plan
        .centers()
        .par_iter()
        .map(|&fc| {
            let lam = if fc == 0.0 {
                Ok(nominal.clone())
            } else {
                AnalysisBand::new(fc, f_w).and_then(|b| solver.eigenvalues(&b, k_tapers))
            };
            match lam {
                Ok(l) => Some(l.iter().zip(&nominal).map(|(a, b)| (a - b).abs()).sum::<f64>() / k_tapers as f64),
                Err(e) => {
                    log::warn!("suboptimality at f_c = {fc} failed: {e}");
                    None
                }
            }
        })
        .collect();
    Ok(SuboptimalityReport {
        plan: plan.clone(),
        epsilon_measure: per_band.iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
        failed: per_band.iter().map(Option::is_none).collect(),
        nominal_eigenvalues: nominal,
    })
}
