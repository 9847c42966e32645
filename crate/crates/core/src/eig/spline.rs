//! Cubic spline interpolation with not-a-knot end conditions.

use super::tridiag::TridiagonalLu;
use crate::error::{ensure_finite, Result, SpecError};

/// Piecewise-cubic interpolant in Hermite form (knot values and slopes).
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
    /// Extrapolation allowed this far beyond either end knot.
    lo_guard: f64,
    hi_guard: f64,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(SpecError::InvalidInput(format!("{n} knots but {} values", y.len())));
        }
        if n < 4 {
            return Err(SpecError::InvalidInput(format!("not-a-knot spline needs at least 4 knots, got {n}")));
        }
        ensure_finite("x_knots", x)?;
        ensure_finite("y_knots", y)?;
        for i in 1..n {
            if x[i] <= x[i - 1] {
                return Err(SpecError::NotIncreasing { index: i, prev: x[i - 1], next: x[i] });
            }
        }

        let dx: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let m: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / dx[i]).collect();

        let mut sub = vec![0.0; n - 1];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n - 1];
        let mut rhs = vec![0.0; n];

        for i in 1..n - 1 {
            sub[i - 1] = dx[i];
            diag[i] = 2.0 * (dx[i - 1] + dx[i]);
            sup[i] = dx[i - 1];
            rhs[i] = 3.0 * (dx[i] * m[i - 1] + dx[i - 1] * m[i]);
        }
        // third derivative continuous across the second and penultimate knots
        let d = x[2] - x[0];
        diag[0] = dx[1];
        sup[0] = d;
        rhs[0] = ((dx[0] + 2.0 * d) * dx[1] * m[0] + dx[0] * dx[0] * m[1]) / d;
        let d = x[n - 1] - x[n - 3];
        diag[n - 1] = dx[n - 3];
        sub[n - 2] = d;
        rhs[n - 1] = (dx[n - 2] * dx[n - 2] * m[n - 3] + (2.0 * d + dx[n - 2]) * dx[n - 3] * m[n - 2]) / d;

        let lu = TridiagonalLu::new(&sub, &diag, &sup);
        if lu.is_singular() {
            return Err(SpecError::InvalidInput("singular spline system".into()));
        }
        lu.solve_in_place(&mut rhs);

        Ok(Self { lo_guard: 0.5 * dx[0], hi_guard: 0.5 * dx[n - 2], x: x.to_vec(), y: y.to_vec(), slopes: rhs })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    /// Slopes at the knots.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let n = self.x.len();
        let (lo, hi) = (self.x[0], self.x[n - 1]);
        if !t.is_finite() || t < lo - self.lo_guard || t > hi + self.hi_guard {
            return Err(SpecError::Extrapolation { x: t, lo, hi });
        }
        // interval i with x[i] <= t < x[i+1], end intervals extended
        let i = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => return Ok(self.y[i]),
            Err(0) => 0,
            Err(p) => (p - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let m = (self.y[i + 1] - self.y[i]) / h;
        let (s0, s1) = (self.slopes[i], self.slopes[i + 1]);
        let c2 = (3.0 * m - 2.0 * s0 - s1) / h;
        let c3 = (s0 + s1 - 2.0 * m) / (h * h);
        let u = t - self.x[i];
        Ok(self.y[i] + u * (s0 + u * (c2 + u * c3)))
    }

    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<f64>> {
        ts.iter().map(|&t| self.eval(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics() {
        let p = |x: f64| 0.3 - 1.2 * x + 0.7 * x * x - 0.05 * x * x * x;
        let x: Vec<f64> = vec![0.0, 0.4, 1.3, 1.9, 2.0, 3.7, 4.1, 5.0];
        let y: Vec<f64> = x.iter().map(|&v| p(v)).collect();
        let s = CubicSpline::new(&x, &y).unwrap();
        for k in 0..100 {
            let t = 5.0 * ((k as f64 * 0.618_033_988_75) % 1.0);
            assert!((s.eval(t).unwrap() - p(t)).abs() <= 1e-12, "at {t}");
        }
    }

    #[test]
    fn sine_midpoints() {
        let f = |x: f64| (2.0 * std::f64::consts::PI * x / 10.0).sin();
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| f(v)).collect();
        let s = CubicSpline::new(&x, &y).unwrap();
        let err: Vec<f64> = (0..49).map(|i| (s.eval(i as f64 + 0.5).unwrap() - f(i as f64 + 0.5)).abs()).collect();
        let interior = err[2..47].iter().cloned().fold(0.0f64, f64::max);
        assert!(interior <= 1e-3, "{interior}");
        // end intervals carry the not-a-knot error; reference value from
        // scipy.interpolate.CubicSpline with bc_type="not-a-knot"
        let worst = err.iter().cloned().fold(0.0f64, f64::max);
        assert!((worst - 0.0038555165103879574).abs() < 1e-12, "{worst}");
    }

    #[test]
    fn knots_exact_and_guard() {
        let x = [1.0, 2.0, 3.5, 4.0, 6.0];
        let y = [0.1, -2.0, 3.0, 0.25, 7.0];
        let s = CubicSpline::new(&x, &y).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert_eq!(s.eval(*a).unwrap(), *b);
        }
        assert!(s.eval(0.6).is_ok());
        assert!(s.eval(7.0).is_ok());
        assert!(matches!(s.eval(0.4), Err(SpecError::Extrapolation { .. })));
        assert!(matches!(s.eval(7.1), Err(SpecError::Extrapolation { .. })));
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(CubicSpline::new(&[0.0, 1.0, 2.0], &[0.0; 3]).is_err());
        assert!(CubicSpline::new(&[0.0, 1.0, 1.0, 2.0], &[0.0; 4]).is_err());
    }
}
