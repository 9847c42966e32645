//! Symmetric tridiagonal eigensolver.
//!
//! Eigenvalues come from the implicit QL iteration with Wilkinson-style
//! shifts, or from Sturm-sequence bisection when only a few of a long block
//! are wanted; eigenvectors for the requested top-k come from inverse iteration
//! on each unreduced block, with Gram-Schmidt inside eigenvalue clusters.
//! Only `O(n)` work per vector, so the top few Slepian sequences of a long
//! record cost `O(n^2)` overall.

use super::RawEigen;
use crate::error::{ensure_finite, Result, SpecError};

const MAX_QL_ITERATIONS: usize = 60;
const INVERSE_ITERATIONS: usize = 4;

/// Descending eigenvalues with matching unit-norm real eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Top-`k_top` eigenpairs of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal.
pub fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64], k_top: usize) -> Result<TridiagonalEigen> {
    let (values, vectors) = top_k(diag, offdiag, k_top, true)?;
    Ok(TridiagonalEigen { values, vectors: vectors.unwrap_or_default() })
}

/// Top-`k_top` eigenvalues only.
pub fn tridiagonal_eigenvalues(diag: &[f64], offdiag: &[f64], k_top: usize) -> Result<Vec<f64>> {
    Ok(top_k(diag, offdiag, k_top, false)?.0)
}

pub(crate) fn top_k(diag: &[f64], offdiag: &[f64], k_top: usize, want_vectors: bool) -> Result<RawEigen<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(SpecError::InvalidInput("empty tridiagonal matrix".into()));
    }
    if offdiag.len() + 1 != n {
        return Err(SpecError::InvalidInput(format!(
            "off-diagonal has length {} for a diagonal of length {n}",
            offdiag.len()
        )));
    }
    ensure_finite("diag", diag)?;
    ensure_finite("offdiag", offdiag)?;
    let k_top = k_top.min(n);

    let blocks = split_blocks(diag, offdiag);

    // (value, block index)
    let mut all: Vec<(f64, usize)> = Vec::with_capacity(n);
    for (b, &(lo, hi)) in blocks.iter().enumerate() {
        let m = hi - lo;
        if m >= 16 && 4 * k_top < m {
            let top = bisect_top(&diag[lo..hi], &offdiag[lo..hi - 1], k_top);
            all.extend(top.into_iter().map(|v| (v, b)));
            continue;
        }
        let mut d = diag[lo..hi].to_vec();
        let mut e = vec![0.0; m];
        e[..m - 1].copy_from_slice(&offdiag[lo..hi - 1]);
        ql_implicit(&mut d, &mut e)?;
        all.extend(d.into_iter().map(|v| (v, b)));
    }
    all.sort_by(|a, b| b.0.total_cmp(&a.0));
    all.truncate(k_top);

    let values: Vec<f64> = all.iter().map(|p| p.0).collect();
    if !want_vectors {
        return Ok((values, None));
    }

    let mut vectors = vec![Vec::new(); all.len()];
    for (b, &(lo, hi)) in blocks.iter().enumerate() {
        let wanted: Vec<usize> = (0..all.len()).filter(|&j| all[j].1 == b).collect();
        if wanted.is_empty() {
            continue;
        }
        let block_vals: Vec<f64> = wanted.iter().map(|&j| all[j].0).collect();
        let local = block_inverse_iteration(&diag[lo..hi], &offdiag[lo..hi - 1], &block_vals);
        for (v, &j) in local.into_iter().zip(&wanted) {
            let mut full = vec![0.0; n];
            full[lo..hi].copy_from_slice(&v);
            vectors[j] = full;
        }
    }
    for v in &mut vectors {
        fix_sign(v);
    }
    Ok((values, Some(vectors)))
}

/// Half-open index ranges of the unreduced blocks.
fn split_blocks(diag: &[f64], offdiag: &[f64]) -> Vec<(usize, usize)> {
    let n = diag.len();
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..n - 1 {
        let scale = diag[i].abs() + diag[i + 1].abs();
        if offdiag[i].abs() <= f64::EPSILON * scale || offdiag[i] == 0.0 {
            blocks.push((start, i + 1));
            start = i + 1;
        }
    }
    blocks.push((start, n));
    blocks
}

/// The `k` largest eigenvalues of an unreduced block, descending, by
/// Sturm-sequence bisection. The `k` searches advance in lockstep so their
/// `LDL^T` recurrences interleave.
fn bisect_top(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let m = diag.len();
    let k = k.min(m);
    let (mut glo, mut ghi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..m {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < m { off[i].abs() } else { 0.0 };
        glo = glo.min(diag[i] - r);
        ghi = ghi.max(diag[i] + r);
    }
    let norm = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    let tiny = f64::MIN_POSITIVE.sqrt() * norm;
    let off2: Vec<f64> = off.iter().map(|e| e * e).collect();
    let mut lo = vec![glo - 2.0 * f64::EPSILON * norm; k];
    let mut hi = vec![ghi + 2.0 * f64::EPSILON * norm; k];
    let mut mid = vec![0.0; k];
    let mut q = vec![0.0; k];
    let mut below = vec![0usize; k];
    loop {
        let mut active = false;
        for j in 0..k {
            let (a, b) = (lo[j], hi[j]);
            let c = 0.5 * (a + b);
            // converged searches keep re-evaluating a harmless midpoint
            if b - a > 2.0 * f64::EPSILON * a.abs().max(b.abs()) + tiny && c > a && c < b {
                active = true;
            }
            mid[j] = c;
            q[j] = 1.0;
            below[j] = 0;
        }
        if !active {
            break;
        }
        for i in 0..m {
            let (d, e2) = (diag[i], if i > 0 { off2[i - 1] } else { 0.0 });
            for j in 0..k {
                let mut v = d - mid[j] - e2 / q[j];
                if v.abs() < tiny {
                    v = -tiny;
                }
                below[j] += (v < 0.0) as usize;
                q[j] = v;
            }
        }
        for j in 0..k {
            // ascending index of the target is m - 1 - j
            if below[j] <= m - 1 - j {
                lo[j] = mid[j];
            } else {
                hi[j] = mid[j];
            }
        }
    }
    (0..k).map(|j| 0.5 * (lo[j] + hi[j])).collect()
}

#[inline]
fn pythag(a: f64, b: f64) -> f64 {
    let s = a * a + b * b;
    if s.is_finite() && s > f64::MIN_POSITIVE {
        s.sqrt()
    } else {
        a.hypot(b)
    }
}

/// Implicit QL on an unreduced block. `e[i]` couples `i` and `i + 1`; the
/// last entry is scratch. Eigenvalues overwrite `d` (unsorted).
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // absolute deflation floor; backward stable at the scale of the matrix
    let norm =
        (0..n).map(|i| d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 }).fold(0.0f64, f64::max);
    let floor = f64::EPSILON * norm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(SpecError::NoConvergence(MAX_QL_ITERATIONS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// LU factorization with partial pivoting of a general tridiagonal matrix.
pub(crate) struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    /// `sub[i]` is entry `(i + 1, i)`, `sup[i]` is entry `(i, i + 1)`.
    pub(crate) fn new(sub: &[f64], diag: &[f64], sup: &[f64]) -> Self {
        let n = diag.len();
        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    /// Replace pivots smaller than `floor` in magnitude (inverse iteration
    /// on a singular shift).
    fn perturb_small_pivots(&mut self, floor: f64) {
        for p in &mut self.d {
            if p.abs() < floor {
                *p = if *p < 0.0 { -floor } else { floor };
            }
        }
    }

    pub(crate) fn is_singular(&self) -> bool {
        self.d.contains(&0.0)
    }

    pub(crate) fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Eigenvectors of one unreduced block for the given (descending) eigenvalues.
fn block_inverse_iteration(diag: &[f64], off: &[f64], values: &[f64]) -> Vec<Vec<f64>> {
    let m = diag.len();
    if m == 1 {
        return values.iter().map(|_| vec![1.0]).collect();
    }
    let norm1 = (0..m)
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < m { off[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let ortol = 1e-3 * norm1;
    let pivot_floor = f64::EPSILON * norm1;

    let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut cluster_start = 0;
    let mut prev_shift = f64::INFINITY;
    for (j, &lambda) in values.iter().enumerate() {
        if j > 0 && values[j - 1] - lambda > ortol {
            cluster_start = j;
        }
        // separate numerically equal shifts so the solves differ
        let pertol = 10.0 * f64::EPSILON * lambda.abs().max(norm1 * 1e-3);
        let mut shift = lambda;
        if j > 0 && prev_shift - shift < pertol {
            shift = prev_shift - pertol;
        }
        prev_shift = shift;

        let shifted: Vec<f64> = diag.iter().map(|d| d - shift).collect();
        let mut lu = TridiagonalLu::new(off, &shifted, off);
        lu.perturb_small_pivots(pivot_floor);

        let mut x = start_vector(m, j);
        for _ in 0..INVERSE_ITERATIONS {
            lu.solve_in_place(&mut x);
            for prev in &out[cluster_start..j] {
                let proj: f64 = prev.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (xi, pi) in x.iter_mut().zip(prev) {
                    *xi -= proj * pi;
                }
            }
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm == 0.0 || !nrm.is_finite() {
                x = start_vector(m, j + 7);
                continue;
            }
            for xi in &mut x {
                *xi /= nrm;
            }
        }
        out.push(x);
    }
    out
}

fn start_vector(m: usize, salt: usize) -> Vec<f64> {
    // fixed LCG so results are reproducible
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (salt as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..m)
        .map(|_| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

/// Largest-magnitude component positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let imax = v.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(i, _)| i).unwrap_or(0);
    if v.get(imax).is_some_and(|&x| x < 0.0) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}
