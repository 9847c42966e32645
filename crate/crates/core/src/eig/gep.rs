//! Generalized Hermitian eigenproblem `A w = lambda M w` by Cholesky reduction.

use super::dense::SquareMatrix;
use super::hermitian::{fix_phase, hermitian_eigen};
use super::scalar::Scalar;
use super::{EigenPairs, Metric};
use crate::error::{Result, SpecError};

/// Relative ridges (times `trace(M) / N`) tried in order before giving up.
pub const RIDGE_SCHEDULE: [f64; 2] = [1e-12, 1e-9];
/// Eigenvalues within this distance outside `[0, 1]` are clipped silently.
pub const CLIP_TOLERANCE: f64 = 1e-8;
/// Eigenvalues further than this outside `[0, 1]` are an error.
pub const RANGE_TOLERANCE: f64 = 1e-6;

/// Lower-triangular `L` with `M + ridge I = L L^*`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor<T> {
    l: SquareMatrix<T>,
    ridge: f64,
}

impl<T: Scalar> CholeskyFactor<T> {
    /// Factor with the ridge schedule: each ridge is scaled by `trace / N`.
    pub fn new(m: &SquareMatrix<T>) -> Result<Self> {
        let n = m.dim();
        let scale = m.trace_re() / n as f64;
        let mut last_pivot = 0;
        for rel in RIDGE_SCHEDULE {
            match Self::with_ridge(m, rel * scale) {
                Ok(f) => return Ok(f),
                Err(pivot) => {
                    log::debug!("cholesky failed at pivot {pivot} with relative ridge {rel:e}");
                    last_pivot = pivot;
                }
            }
        }
        Err(SpecError::Conditioning { pivot: last_pivot })
    }

    /// Plain factorization of `M + ridge I`; returns the failing pivot index.
    pub fn with_ridge(m: &SquareMatrix<T>, ridge: f64) -> std::result::Result<Self, usize> {
        let n = m.dim();
        let mut l = SquareMatrix::<T>::zeros(n);
        for j in 0..n {
            let lj: Vec<T> = l.row(j)[..j].to_vec();
            let d = m[(j, j)].re() + ridge - lj.iter().map(|v| v.abs2()).sum::<f64>();
            if !(d > 0.0) || !d.is_finite() {
                return Err(j);
            }
            let djj = d.sqrt();
            l[(j, j)] = T::from_re(djj);
            for i in j + 1..n {
                let li = &l.row(i)[..j];
                let s = li.iter().zip(&lj).fold(T::zero(), |acc, (&a, &b)| acc + a * b.conj());
                l[(i, j)] = (m[(i, j)] - s).scale(1.0 / djj);
            }
        }
        Ok(Self { l, ridge })
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }

    pub fn lower(&self) -> &SquareMatrix<T> {
        &self.l
    }

    /// Solve `L X = B` for a full right-hand side, row by row.
    fn forward_rows(&self, b: &mut SquareMatrix<T>) {
        let n = self.dim();
        let data = b.as_mut_slice();
        for i in 0..n {
            let (prev, rest) = data.split_at_mut(i * n);
            let row_i = &mut rest[..n];
            for (k, &lik) in self.l.row(i)[..i].iter().enumerate() {
                if lik == T::zero() {
                    continue;
                }
                let row_k = &prev[k * n..(k + 1) * n];
                for (x, &y) in row_i.iter_mut().zip(row_k) {
                    *x -= lik * y;
                }
            }
            let inv = 1.0 / self.l[(i, i)].re();
            for x in row_i.iter_mut() {
                *x = x.scale(inv);
            }
        }
    }

    /// `L^{-1} A L^{-*}`, hermitized.
    pub fn reduce(&self, a: &SquareMatrix<T>) -> SquareMatrix<T> {
        let n = self.dim();
        let mut y = a.clone();
        self.forward_rows(&mut y);
        // C = L^{-1} Y^* since C is Hermitian
        let mut c = SquareMatrix::from_fn(n, |i, j| y[(j, i)].conj());
        self.forward_rows(&mut c);
        for i in 0..n {
            for j in 0..i {
                let avg = (c[(i, j)] + c[(j, i)].conj()).scale(0.5);
                c[(i, j)] = avg;
                c[(j, i)] = avg.conj();
            }
            c[(i, i)] = T::from_re(c[(i, i)].re());
        }
        c
    }

    /// Solve `L^* w = y`.
    pub fn back_solve(&self, y: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut w = y.to_vec();
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s -= self.l[(j, i)].conj() * w[j];
            }
            w[i] = s.scale(1.0 / self.l[(i, i)].re());
        }
        w
    }

    /// Top-`k_top` eigenpairs of `A w = lambda (M + ridge I) w`.
    pub fn solve(&self, a: &SquareMatrix<T>, k_top: usize, opts: &GepOptions) -> Result<EigenPairs<T>> {
        if a.dim() != self.dim() {
            return Err(SpecError::InvalidInput(format!("matrix dimensions differ: {} vs {}", a.dim(), self.dim())));
        }
        let c = self.reduce(a);
        let (mut values, ys) = hermitian_eigen(&c, k_top, opts.want_vectors)?;
        if opts.unit_interval {
            for v in &mut values {
                *v = clip_unit_interval(*v)?;
            }
        }
        let vectors = match ys {
            Some(ys) => ys
                .iter()
                .map(|y| {
                    let mut w = self.back_solve(y);
                    fix_phase(&mut w);
                    w
                })
                .collect(),
            None => Vec::new(),
        };
        Ok(EigenPairs { values, vectors, metric: Metric::Weighted })
    }
}

impl CholeskyFactor<f64> {
    /// The same factor for complex Hermitian right-hand problems.
    pub fn to_complex(&self) -> CholeskyFactor<num_complex::Complex64> {
        CholeskyFactor { l: self.l.to_complex(), ridge: self.ridge }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GepOptions {
    /// Enforce `0 <= lambda <= 1` (kernel problems with nested bands).
    pub unit_interval: bool,
    pub want_vectors: bool,
}

impl Default for GepOptions {
    fn default() -> Self {
        Self { unit_interval: true, want_vectors: true }
    }
}

/// Clip floating-point noise around `[0, 1]`; reject anything further out.
pub fn clip_unit_interval(v: f64) -> Result<f64> {
    if !v.is_finite() || !(-RANGE_TOLERANCE..=1.0 + RANGE_TOLERANCE).contains(&v) {
        return Err(SpecError::SpectralRange { value: v });
    }
    if !(-CLIP_TOLERANCE..=1.0 + CLIP_TOLERANCE).contains(&v) {
        log::debug!("eigenvalue {v} clipped beyond the silent tolerance");
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Top-`k_top` eigenpairs of `A w = lambda M w` with eigenvalues expected in `[0, 1]`.
pub fn generalized_hermitian_eigen<T: Scalar>(
    a: &SquareMatrix<T>,
    m: &SquareMatrix<T>,
    k_top: usize,
) -> Result<EigenPairs<T>> {
    generalized_hermitian_eigen_with(a, m, k_top, &GepOptions::default())
}

pub fn generalized_hermitian_eigen_with<T: Scalar>(
    a: &SquareMatrix<T>,
    m: &SquareMatrix<T>,
    k_top: usize,
    opts: &GepOptions,
) -> Result<EigenPairs<T>> {
    if a.dim() != m.dim() || a.dim() == 0 {
        return Err(SpecError::InvalidInput("A and M must be square with equal non-zero size".into()));
    }
    CholeskyFactor::new(m)?.solve(a, k_top, opts)
}
