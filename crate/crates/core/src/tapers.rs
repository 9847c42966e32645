//! Taper sets: Slepian sequences on uniform grids, exact GPSS tapers from the
//! generalized eigenproblem, and spline-interpolated Slepians, all scaled so
//! that `w^* R(B) w = 2 f_w`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::{tridiagonal_eigen, CholeskyFactor, CubicSpline, EigenPairs, GepOptions, SquareMatrix};
use crate::error::{Result, SpecError};
use crate::grid::{AnalysisBand, SamplingGrid, SignalBand};
use crate::kernels::{analysis_band_kernel, lowpass_kernel, signal_band_kernel};

/// Floor for `1 - lambda` before taking decibels.
const LEAKAGE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub enum TaperWeights {
    Real(Vec<Vec<f64>>),
    Complex(Vec<Vec<Complex64>>),
}

impl TaperWeights {
    pub fn count(&self) -> usize {
        match self {
            Self::Real(w) => w.len(),
            Self::Complex(w) => w.len(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Self::Real(_))
    }

    pub fn complex(&self, k: usize) -> Vec<Complex64> {
        match self {
            Self::Real(w) => w[k].iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            Self::Complex(w) => w[k].clone(),
        }
    }

    pub fn real(&self) -> Option<&[Vec<f64>]> {
        match self {
            Self::Real(w) => Some(w),
            Self::Complex(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaperKind {
    /// Generalized eigenvectors for the band.
    Exact,
    /// Slepians interpolated from the uniform grid with the same endpoints.
    Interpolated,
    /// A single constant taper.
    Rectangular,
}

/// `K` tapers on one grid for one analysis band, scaled in the `R(B)` metric.
#[derive(Debug, Clone)]
pub struct TaperSet {
    weights: TaperWeights,
    eigenvalues: Option<Vec<f64>>,
    band: AnalysisBand,
    grid: SamplingGrid,
    kind: TaperKind,
}

impl TaperSet {
    pub fn weights(&self) -> &TaperWeights {
        &self.weights
    }

    pub fn k_tapers(&self) -> usize {
        self.weights.count()
    }

    pub fn eigenvalues(&self) -> Option<&[f64]> {
        self.eigenvalues.as_deref()
    }

    pub fn band(&self) -> AnalysisBand {
        self.band
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn kind(&self) -> TaperKind {
        self.kind
    }

    /// Keep the first `k` tapers.
    pub fn truncated(&self, k: usize) -> Self {
        let mut out = self.clone();
        match &mut out.weights {
            TaperWeights::Real(w) => w.truncate(k),
            TaperWeights::Complex(w) => w.truncate(k),
        }
        if let Some(l) = &mut out.eigenvalues {
            l.truncate(k);
        }
        out
    }

    /// `J_k = sum_n conj(w_k[n]) x[n]`.
    pub fn project(&self, x: &[f64]) -> Vec<Complex64> {
        match &self.weights {
            TaperWeights::Real(w) => {
                w.iter().map(|wk| Complex64::new(wk.iter().zip(x).map(|(a, b)| a * b).sum(), 0.0)).collect()
            }
            TaperWeights::Complex(w) => w
                .iter()
                .map(|wk| wk.iter().zip(x).fold(Complex64::new(0.0, 0.0), |acc, (a, &b)| acc + a.conj() * b))
                .collect(),
        }
    }

    /// Response of the projection to a unit complex line at the band center:
    /// `sum_n conj(w_k[n]) exp(j 2 pi f_c t_n)`, the weight sum for a nominal taper.
    pub fn zero_frequency_response(&self) -> Vec<Complex64> {
        let fc = self.band.f_center();
        let t = self.grid.times();
        (0..self.k_tapers())
            .map(|k| {
                self.weights.complex(k).iter().zip(t).fold(Complex64::new(0.0, 0.0), |acc, (w, &tn)| {
                    acc + w.conj() * Complex64::from_polar(1.0, 2.0 * PI * fc * tn)
                })
            })
            .collect()
    }
}

/// Bound factors and worst-case leakage of a taper set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaperDiagnostics {
    pub variance_bound_factor: f64,
    pub bias_bound_factor: f64,
    pub max_leakage_db: f64,
}

/// Unit-norm Slepian sequences with their concentration ratios.
#[derive(Debug, Clone)]
pub struct Dpss {
    pub vectors: Vec<Vec<f64>>,
    pub concentrations: Vec<f64>,
}

/// Default taper count `round(2 TW) - 1`, at least 1.
pub fn default_taper_count(time_half_bandwidth: f64) -> usize {
    ((2.0 * time_half_bandwidth).round() as usize).saturating_sub(1).max(1)
}

/// First `k_tapers` Slepian sequences of length `n` and time-half-bandwidth `tw`.
pub fn dpss_uniform(n: usize, tw: f64, k_tapers: usize) -> Result<Dpss> {
    if n < 2 {
        return Err(SpecError::InvalidInput(format!("sequence length {n} is too short")));
    }
    if k_tapers == 0 || k_tapers > n {
        return Err(SpecError::InvalidInput(format!("taper count {k_tapers} must be in 1..={n}")));
    }
    if !(tw > 0.0 && tw < n as f64 / 2.0) {
        return Err(SpecError::InvalidInput(format!("time-half-bandwidth {tw} must lie in (0, {})", n as f64 / 2.0)));
    }
    if k_tapers as f64 > 2.0 * tw {
        log::warn!("{k_tapers} tapers exceed 2TW = {}; the trailing ones leak badly", 2.0 * tw);
    }
    let w = tw / n as f64;
    let c = (2.0 * PI * w).cos();
    let diag: Vec<f64> = (0..n)
        .map(|m| {
            let a = (n as f64 - 1.0 - 2.0 * m as f64) / 2.0;
            a * a * c
        })
        .collect();
    let off: Vec<f64> = (1..n).map(|m| m as f64 * (n - m) as f64 / 2.0).collect();
    let eig = tridiagonal_eigen(&diag, &off, k_tapers)?;
    let concentrations = eig.vectors.iter().map(|v| uniform_concentration(v, w)).collect();
    Ok(Dpss { vectors: eig.vectors, concentrations })
}

/// `v^T S v` with `S[n][m] = sin(2 pi w (n - m)) / (pi (n - m))` on the integer grid.
pub fn uniform_concentration(v: &[f64], w: f64) -> f64 {
    let n = v.len();
    let mut acc = 2.0 * w * v.iter().map(|x| x * x).sum::<f64>();
    for d in 1..n {
        let r: f64 = v[..n - d].iter().zip(&v[d..]).map(|(a, b)| a * b).sum();
        acc += 2.0 * r * (2.0 * PI * w * d as f64).sin() / (PI * d as f64);
    }
    acc
}

/// Exact GPSS tapers for many bands on one grid; the Cholesky factor of
/// `R(B)` is shared.
pub struct GpssSolver {
    grid: SamplingGrid,
    signal_band: SignalBand,
    rb: SquareMatrix<f64>,
    chol: CholeskyFactor<f64>,
    chol_complex: OnceLock<CholeskyFactor<Complex64>>,
}

impl GpssSolver {
    pub fn new(grid: &SamplingGrid, signal_band: &SignalBand) -> Result<Self> {
        let rb = signal_band_kernel(grid, signal_band).entries;
        let chol = CholeskyFactor::new(&rb)?;
        Ok(Self { grid: grid.clone(), signal_band: *signal_band, rb, chol, chol_complex: OnceLock::new() })
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn signal_band(&self) -> SignalBand {
        self.signal_band
    }

    pub fn signal_kernel(&self) -> &SquareMatrix<f64> {
        &self.rb
    }

    /// Diagonal ridge the factorization needed.
    pub fn ridge(&self) -> f64 {
        self.chol.ridge()
    }

    fn effective_band(&self, band: &AnalysisBand) -> Result<AnalysisBand> {
        let eff = band.clipped_to(&self.signal_band).ok_or_else(|| {
            SpecError::InvalidInput(format!(
                "band [{}, {}] does not overlap the signal band",
                band.lower(),
                band.upper()
            ))
        })?;
        if eff != *band {
            log::debug!("band at {} clipped to half-width {}", band.f_center(), eff.half_width());
        }
        Ok(eff)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.grid.len() {
            return Err(SpecError::InvalidInput(format!("taper count {k} must be in 1..={}", self.grid.len())));
        }
        Ok(())
    }

    /// Top-`k` generalized eigenvalues of `R(A) w = lambda R(B) w`, with `A`
    /// intersected with the signal band.
    pub fn eigenvalues(&self, band: &AnalysisBand, k: usize) -> Result<Vec<f64>> {
        self.check_k(k)?;
        let eff = self.effective_band(band)?;
        let opts = GepOptions { unit_interval: true, want_vectors: false };
        if eff.f_center() == 0.0 {
            let ra = lowpass_kernel(&self.grid, eff.half_width());
            Ok(self.chol.solve(&ra, k, &opts)?.values)
        } else {
            let ra = analysis_band_kernel(&self.grid, &eff).entries;
            Ok(self.complex_factor().solve(&ra, k, &opts)?.values)
        }
    }

    /// Exact tapers for `band`; its half-width is reduced where it sticks out of the signal band.
    pub fn tapers(&self, band: &AnalysisBand, k: usize) -> Result<TaperSet> {
        self.check_k(k)?;
        let eff = self.effective_band(band)?;
        let opts = GepOptions::default();
        let two_fw = 2.0 * eff.half_width();
        let (weights, values) = if eff.f_center() == 0.0 {
            let ra = lowpass_kernel(&self.grid, eff.half_width());
            let EigenPairs { values, mut vectors, .. } = self.chol.solve(&ra, k, &opts)?;
            for w in &mut vectors {
                let q = self.rb.quadratic(w);
                let s = (two_fw / q).sqrt();
                w.iter_mut().for_each(|v| *v *= s);
            }
            (TaperWeights::Real(vectors), values)
        } else {
            let ra = analysis_band_kernel(&self.grid, &eff).entries;
            let EigenPairs { values, mut vectors, .. } = self.complex_factor().solve(&ra, k, &opts)?;
            for w in &mut vectors {
                let q = real_kernel_quadratic(&self.rb, w);
                let s = (two_fw / q).sqrt();
                w.iter_mut().for_each(|v| *v *= s);
            }
            (TaperWeights::Complex(vectors), values)
        };
        Ok(TaperSet { weights, eigenvalues: Some(values), band: eff, grid: self.grid.clone(), kind: TaperKind::Exact })
    }

    fn complex_factor(&self) -> &CholeskyFactor<Complex64> {
        self.chol_complex.get_or_init(|| self.chol.to_complex())
    }
}

/// `w^* R w` for real symmetric `R` and complex `w`.
pub fn real_kernel_quadratic(r: &SquareMatrix<f64>, w: &[Complex64]) -> f64 {
    let n = w.len();
    let mut acc = 0.0;
    for i in 0..n {
        let row = r.row(i);
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..n {
            re += row[j] * w[j].re;
            im += row[j] * w[j].im;
        }
        acc += w[i].re * re + w[i].im * im;
    }
    acc
}

/// Exact GPSS tapers for one band.
pub fn gpss_exact(
    grid: &SamplingGrid,
    signal_band: &SignalBand,
    band: &AnalysisBand,
    k_tapers: usize,
) -> Result<TaperSet> {
    GpssSolver::new(grid, signal_band)?.tapers(band, k_tapers)
}

/// Uniform knots sharing the grid's endpoints, and their spacing.
pub fn interpolation_knots(grid: &SamplingGrid) -> (Vec<f64>, f64) {
    let n = grid.len();
    let h = grid.span() / (n - 1) as f64;
    let t0 = grid.first();
    let mut knots: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
    knots[n - 1] = grid.last();
    (knots, h)
}

/// Slepians on the uniform knots, spline-interpolated to the sample times,
/// for the nominal band `[-f_w, f_w]`.
pub fn gpss_interpolated(grid: &SamplingGrid, signal_band: &SignalBand, f_w: f64, k_tapers: usize) -> Result<TaperSet> {
    let rb = signal_band_kernel(grid, signal_band).entries;
    gpss_interpolated_with_kernel(grid, &rb, f_w, k_tapers)
}

/// As [`gpss_interpolated`] with a precomputed `R(B)`.
pub fn gpss_interpolated_with_kernel(
    grid: &SamplingGrid,
    rb: &SquareMatrix<f64>,
    f_w: f64,
    k_tapers: usize,
) -> Result<TaperSet> {
    let n = grid.len();
    if n < 8 {
        return Err(SpecError::InvalidInput(format!("interpolated tapers need at least 8 samples, got {n}")));
    }
    if rb.dim() != n {
        return Err(SpecError::PlanMismatch { expected: n, got: rb.dim() });
    }
    let band = AnalysisBand::nominal(f_w)?;
    let (knots, h) = interpolation_knots(grid);
    let tw = f_w * n as f64 * h;
    let dpss = dpss_uniform(n, tw, k_tapers)?;
    let mut weights = Vec::with_capacity(k_tapers);
    for v in &dpss.vectors {
        let spline = CubicSpline::new(&knots, v)?;
        let mut w = spline.eval_many(grid.times())?;
        let q = rb.quadratic(&w);
        if !(q > 0.0) {
            return Err(SpecError::DegenerateTapers(q));
        }
        let s = (2.0 * f_w / q).sqrt();
        w.iter_mut().for_each(|x| *x *= s);
        weights.push(w);
    }
    Ok(TaperSet {
        weights: TaperWeights::Real(weights),
        eigenvalues: None,
        band,
        grid: grid.clone(),
        kind: TaperKind::Interpolated,
    })
}

/// One constant taper with `w^* R(B) w = 2 f_w`.
pub fn rectangular_taper(grid: &SamplingGrid, rb: &SquareMatrix<f64>, f_w: f64) -> Result<TaperSet> {
    let n = grid.len();
    if rb.dim() != n {
        return Err(SpecError::PlanMismatch { expected: n, got: rb.dim() });
    }
    let q: f64 = rb.as_slice().iter().sum();
    if !(q > 0.0) {
        return Err(SpecError::DegenerateTapers(q));
    }
    let c = (2.0 * f_w / q).sqrt();
    Ok(TaperSet {
        weights: TaperWeights::Real(vec![vec![c; n]]),
        eigenvalues: None,
        band: AnalysisBand::nominal(f_w)?,
        grid: grid.clone(),
        kind: TaperKind::Rectangular,
    })
}

/// Variance bound factor, bias bound factor and worst leakage.
pub fn taper_diagnostics(tapers: &TaperSet, signal_band: &SignalBand) -> TaperDiagnostics {
    let rb = signal_band_kernel(tapers.grid(), signal_band).entries;
    taper_diagnostics_with_kernel(tapers, &rb)
}

pub fn taper_diagnostics_with_kernel(tapers: &TaperSet, rb: &SquareMatrix<f64>) -> TaperDiagnostics {
    let k = tapers.k_tapers();
    let ra = analysis_band_kernel(tapers.grid(), &tapers.band()).entries;
    let rbc = rb.to_complex();
    let ws: Vec<Vec<Complex64>> = (0..k).map(|i| tapers.weights().complex(i)).collect();
    let rbw: Vec<Vec<Complex64>> = ws.iter().map(|w| rbc.mul_vec(w)).collect();

    let mut v = 0.0;
    for wk in &ws {
        for rl in &rbw {
            v += crate::eig::dot_c(wk, rl).norm_sqr();
        }
    }
    v /= (k * k) as f64;

    let mut b = 0.0;
    let mut worst_ratio = f64::INFINITY;
    for (w, rw) in ws.iter().zip(&rbw) {
        let qb = crate::eig::dot_c(w, rw).re;
        let qa = ra.quadratic(w);
        b += qb - qa;
        worst_ratio = worst_ratio.min(qa / qb);
    }
    b = (b / k as f64).max(0.0);

    let lambda_k = match tapers.eigenvalues() {
        Some(l) => *l.last().unwrap_or(&0.0),
        None => worst_ratio,
    };
    TaperDiagnostics { variance_bound_factor: v, bias_bound_factor: b, max_leakage_db: leakage_db(lambda_k) }
}

/// `10 log10(1 - lambda)`, floored.
pub fn leakage_db(lambda: f64) -> f64 {
    10.0 * (1.0 - lambda).max(LEAKAGE_FLOOR).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jitter_grid(n: usize, sigma: f64, seed: u64) -> SamplingGrid {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let nd = Normal::new(0.0, sigma).unwrap();
        SamplingGrid::new((1..=n).map(|i| i as f64 + nd.sample(&mut rng)).collect()).unwrap()
    }

    fn dense_symmetric_eigen(a: &SquareMatrix<f64>) -> Vec<f64> {
        // cyclic Jacobi oracle
        let n = a.dim();
        let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[i][j].powi(2))
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if m[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (mkp, mkq) = (m[k][p], m[k][q]);
                        m[k][p] = c * mkp - s * mkq;
                        m[k][q] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let (mpk, mqk) = (m[p][k], m[q][k]);
                        m[p][k] = c * mpk - s * mqk;
                        m[q][k] = s * mpk + c * mqk;
                    }
                }
            }
        }
        let mut d: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
        d.sort_by(|a, b| b.total_cmp(a));
        d
    }

    #[test]
    fn dpss_concentrations_and_parity() {
        let d = dpss_uniform(50, 2.5, 4).unwrap();
        assert!(d.concentrations[0] > 0.999);
        assert!(d.concentrations.iter().all(|&l| l > 0.9));
        assert!(d.concentrations.windows(2).all(|w| w[0] > w[1]));
        let v0 = &d.vectors[0];
        let v1 = &d.vectors[1];
        for i in 0..50 {
            assert!((v0[i] - v0[49 - i]).abs() < 1e-10);
            assert!((v1[i] + v1[49 - i]).abs() < 1e-10);
        }
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = d.vectors[i].iter().zip(&d.vectors[j]).map(|(a, b)| a * b).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dpss_concentrations_match_dense_oracle() {
        // the concentrations are the top eigenvalues of the sinc matrix itself
        let n = 30;
        let w = 2.0 / n as f64;
        let s = SquareMatrix::<f64>::hermitian_from_lower(n, |i, j| {
            let d = i as f64 - j as f64;
            if i == j {
                2.0 * w
            } else {
                (2.0 * PI * w * d).sin() / (PI * d)
            }
        });
        let oracle = dense_symmetric_eigen(&s);
        let d = dpss_uniform(n, 2.0, 3).unwrap();
        for (a, b) in d.concentrations.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn dpss_rejects_bad_arguments() {
        assert!(dpss_uniform(10, 2.0, 11).is_err());
        assert!(dpss_uniform(10, 5.0, 2).is_err());
        assert!(dpss_uniform(10, 2.0, 0).is_err());
    }

    #[test]
    fn exact_tapers_reduce_to_dpss_on_the_integer_grid() {
        let g = SamplingGrid::uniform(50, 1.0, 1.0).unwrap();
        let sb = SignalBand::new(0.5).unwrap();
        let ts = gpss_exact(&g, &sb, &AnalysisBand::nominal(0.05).unwrap(), 4).unwrap();
        let d = dpss_uniform(50, 2.5, 4).unwrap();
        let TaperWeights::Real(w) = ts.weights() else { panic!("nominal tapers must be real") };
        let scale = 0.1f64.sqrt();
        for k in 0..4 {
            let dot: f64 = w[k].iter().zip(&d.vectors[k]).map(|(a, b)| a * b).sum();
            let sign = dot.signum();
            let worst = w[k].iter().zip(&d.vectors[k]).map(|(a, b)| (a - sign * scale * b).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-6, "taper {k}: {worst}");
            assert!((ts.eigenvalues().unwrap()[k] - d.concentrations[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn normalization_and_orthogonality_on_jitter() {
        let g = jitter_grid(50, 0.1, 3);
        let sb = SignalBand::new(0.5).unwrap();
        let solver = GpssSolver::new(&g, &sb).unwrap();
        for fc in [0.0, 0.2] {
            let ts = solver.tapers(&AnalysisBand::new(fc, 0.05).unwrap(), 4).unwrap();
            let ws: Vec<_> = (0..4).map(|k| ts.weights().complex(k)).collect();
            for k in 0..4 {
                let qk = real_kernel_quadratic(solver.signal_kernel(), &ws[k]);
                assert!((qk / 0.1 - 1.0).abs() < 1e-8);
                for l in 0..k {
                    let rbl = solver.signal_kernel().to_complex().mul_vec(&ws[l]);
                    assert!(crate::eig::dot_c(&ws[k], &rbl).norm() < 1e-8 * 0.1);
                }
            }
            let lam = ts.eigenvalues().unwrap();
            assert!(lam.iter().all(|&l| (0.0..=1.0).contains(&l)));
            let diag = taper_diagnostics_with_kernel(&ts, solver.signal_kernel());
            assert!((diag.variance_bound_factor - 0.0025).abs() < 1e-10);
            let bias: f64 = 0.1 / 4.0 * lam.iter().map(|l| 1.0 - l).sum::<f64>();
            assert!(
                (diag.bias_bound_factor - bias).abs() <= 1e-8 * bias.max(1e-12) + 1e-15,
                "{} {bias}",
                diag.bias_bound_factor
            );
        }
    }

    #[test]
    fn full_band_has_no_bias_bound() {
        let g = jitter_grid(20, 0.1, 1);
        let sb = SignalBand::new(0.5).unwrap();
        let ts = gpss_exact(&g, &sb, &AnalysisBand::nominal(0.5).unwrap(), 2).unwrap();
        let d = taper_diagnostics(&ts, &sb);
        assert!(d.bias_bound_factor.abs() < 1e-12);
    }

    #[test]
    fn uniform_leakage_matches_concentration() {
        let g = SamplingGrid::uniform(50, 1.0, 1.0).unwrap();
        let sb = SignalBand::new(0.5).unwrap();
        let ts = gpss_exact(&g, &sb, &AnalysisBand::nominal(0.05).unwrap(), 4).unwrap();
        let d = taper_diagnostics(&ts, &sb);
        let oracle = dpss_uniform(50, 2.5, 4).unwrap().concentrations[3];
        assert!((d.max_leakage_db - 10.0 * (1.0 - oracle).log10()).abs() < 1e-4);
    }

    #[test]
    fn shifted_band_shares_eigenvalues_on_uniform_grid() {
        let g = SamplingGrid::uniform(40, 1.0, 1.0).unwrap();
        let solver = GpssSolver::new(&g, &SignalBand::new(0.5).unwrap()).unwrap();
        let l0 = solver.eigenvalues(&AnalysisBand::nominal(0.05).unwrap(), 5).unwrap();
        let l1 = solver.eigenvalues(&AnalysisBand::new(0.23, 0.05).unwrap(), 5).unwrap();
        for (a, b) in l0.iter().zip(&l1) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn interpolation_is_identity_on_uniform_grids() {
        let g = SamplingGrid::uniform(50, 1.0, 1.0).unwrap();
        let sb = SignalBand::new(0.5).unwrap();
        let ts = gpss_interpolated(&g, &sb, 0.05, 4).unwrap();
        let d = dpss_uniform(50, 2.5, 4).unwrap();
        let w = ts.weights().real().unwrap();
        for k in 0..4 {
            let worst = w[k].iter().zip(&d.vectors[k]).map(|(a, b)| (a - 0.1f64.sqrt() * b).abs()).fold(0.0, f64::max);
            assert!(worst <= 1e-10, "{worst}");
        }
        assert!(ts.eigenvalues().is_none());
    }

    fn cosine(a: &[f64], b: &[f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        (dot / (na * nb)).abs()
    }

    #[test]
    fn interpolated_tapers_track_exact_ones_on_small_jitter() {
        // At sigma = 0.1 the exact tapers already depart from the Slepians
        // (mean cosine ~0.7-0.98 per taper, cross-checked with scipy); at
        // sigma = 0.01 they agree closely.
        let sb = SignalBand::new(0.5).unwrap();
        let mut acc = [0.0; 4];
        for seed in 0..20 {
            let g = jitter_grid(50, 0.01, 500 + seed);
            let approx = gpss_interpolated(&g, &sb, 0.05, 4).unwrap();
            let exact = gpss_exact(&g, &sb, &AnalysisBand::nominal(0.05).unwrap(), 4).unwrap();
            let rb = signal_band_kernel(&g, &sb);
            for k in 0..4 {
                let a = &approx.weights().real().unwrap()[k];
                acc[k] += cosine(a, &exact.weights().real().unwrap()[k]) / 20.0;
                assert!((rb.quadratic(a) / 0.1 - 1.0).abs() < 1e-8);
            }
        }
        assert!(acc.iter().all(|&c| c >= 0.99), "{acc:?}");
    }

    #[test]
    fn interpolation_quality_improves_as_jitter_shrinks() {
        let sb = SignalBand::new(0.5).unwrap();
        let mut prev = 0.0;
        for sigma in [0.2, 0.1, 0.05, 0.01] {
            let mut acc = 0.0;
            for seed in 0..20 {
                let g = jitter_grid(50, sigma, 100 + seed);
                let approx = gpss_interpolated(&g, &sb, 0.05, 4).unwrap();
                let exact = gpss_exact(&g, &sb, &AnalysisBand::nominal(0.05).unwrap(), 4).unwrap();
                for k in 0..4 {
                    acc += cosine(&approx.weights().real().unwrap()[k], &exact.weights().real().unwrap()[k]);
                }
            }
            let mean = acc / 80.0;
            assert!(mean >= prev - 1e-12, "sigma {sigma}: {mean} < {prev}");
            prev = mean;
        }
    }
}
