//! Dense Hermitian (or real symmetric) eigensolver: Householder reduction to
//! real tridiagonal form, then the tridiagonal solver.

use super::dense::SquareMatrix;
use super::scalar::{dot_c, Scalar};
use super::tridiag;
use super::RawEigen;
use crate::error::{Result, SpecError};

/// Householder reduction `A = Q T Q^*` with `T` real symmetric tridiagonal.
pub(crate) struct Tridiagonalization<T> {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    /// Unit Householder vectors; reflector `k` acts on indices `k+1..n`.
    reflectors: Vec<Option<Vec<T>>>,
    /// Diagonal unitary that made the off-diagonal real.
    phases: Vec<T>,
}

impl<T: Scalar> Tridiagonalization<T> {
    pub fn new(mut a: SquareMatrix<T>) -> Self {
        let n = a.dim();
        let mut sub: Vec<T> = Vec::with_capacity(n.saturating_sub(1));
        let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
        let mut p = vec![T::zero(); n];

        for k in 0..n.saturating_sub(1) {
            let len = n - k - 1;
            let x: Vec<T> = (k + 1..n).map(|i| a[(i, k)]).collect();
            if len == 1 {
                sub.push(x[0]);
                reflectors.push(None);
                continue;
            }
            let alpha = x.iter().map(|v| v.abs2()).sum::<f64>().sqrt();
            let tail = x[1..].iter().map(|v| v.abs2()).sum::<f64>();
            if alpha == 0.0 || tail == 0.0 {
                sub.push(x[0]);
                reflectors.push(None);
                continue;
            }
            let phi = x[0].phase();
            let mut u = x;
            u[0] += phi.scale(alpha);
            let unorm = u.iter().map(|v| v.abs2()).sum::<f64>().sqrt();
            for v in &mut u {
                *v = v.scale(1.0 / unorm);
            }
            sub.push(-phi.scale(alpha));

            // trailing block B = A[k+1.., k+1..]; p = B u
            let off = k + 1;
            for i in 0..len {
                let row = &a.row(off + i)[off..];
                p[i] = row.iter().zip(&u).fold(T::zero(), |acc, (&b, &ui)| acc + b * ui);
            }
            let kappa = dot_c(&u, &p[..len]).re();
            for i in 0..len {
                p[i] -= u[i].scale(kappa);
            }
            // B -= 2 (u q^* + q u^*)
            for i in 0..len {
                let ui2 = u[i].scale(2.0);
                let qi2 = p[i].scale(2.0);
                let row = &mut a.row_mut(off + i)[off..];
                for j in 0..len {
                    row[j] -= ui2 * p[j].conj() + qi2 * u[j].conj();
                }
            }
            reflectors.push(Some(u));
        }

        let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re()).collect();
        let mut phases = Vec::with_capacity(n);
        if n > 0 {
            phases.push(T::one());
        }
        let mut offdiag = Vec::with_capacity(sub.len());
        for (k, e) in sub.iter().enumerate() {
            offdiag.push(e.abs());
            let next = phases[k] * e.phase();
            phases.push(next);
        }
        Self { diag, offdiag, reflectors, phases }
    }

    /// Map an eigenvector of the real tridiagonal `T` back to one of `A`.
    pub fn back_transform(&self, z: &[f64]) -> Vec<T> {
        let n = z.len();
        let mut y: Vec<T> = z.iter().zip(&self.phases).map(|(&zi, &d)| d.scale(zi)).collect();
        for k in (0..self.reflectors.len()).rev() {
            if let Some(u) = &self.reflectors[k] {
                let seg = &mut y[k + 1..n];
                let proj = dot_c(u, seg).scale(2.0);
                for (yi, &ui) in seg.iter_mut().zip(u) {
                    *yi -= ui * proj;
                }
            }
        }
        y
    }
}

/// Top-`k_top` eigenpairs of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen<T: Scalar>(a: &SquareMatrix<T>, k_top: usize, want_vectors: bool) -> Result<RawEigen<T>> {
    if a.dim() == 0 {
        return Err(SpecError::InvalidInput("empty matrix".into()));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(SpecError::NonFinite("matrix entry".into()));
    }
    let tri = Tridiagonalization::new(a.clone());
    let (values, z) = tridiag::top_k(&tri.diag, &tri.offdiag, k_top, want_vectors)?;
    let vectors = z.map(|zs| {
        zs.iter()
            .map(|zk| {
                let mut v = tri.back_transform(zk);
                fix_phase(&mut v);
                v
            })
            .collect()
    });
    Ok((values, vectors))
}

/// Rotate so the largest-magnitude component is real and positive.
pub(crate) fn fix_phase<T: Scalar>(v: &mut [T]) {
    let Some(imax) = v.iter().enumerate().max_by(|a, b| a.1.abs2().total_cmp(&b.1.abs2())).map(|(i, _)| i) else {
        return;
    };
    let rot = v[imax].phase().conj();
    for x in v.iter_mut() {
        *x *= rot;
    }
    v[imax] = T::from_re(v[imax].abs());
}
