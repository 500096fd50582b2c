//! Natural cubic spline interpolation on a strictly increasing grid.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum SplineError {
    #[error("spline needs at least 3 knots, got {0}")]
    TooFewKnots(usize),
    #[error("spline abscissae must be strictly increasing and finite")]
    BadGrid,
}

/// Natural cubic spline through `(xs[i], ys[i])`.
#[derive(Debug, Clone)]
pub struct CubicSpline<R: Real> {
    xs: Vec<R>,
    ys: Vec<R>,
    /// Second derivatives at the knots.
    y2: Vec<R>,
}

impl<R: Real> CubicSpline<R> {
    pub fn new(xs: Vec<R>, ys: Vec<R>) -> Result<Self, SplineError> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(SplineError::TooFewKnots(n.min(ys.len())));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
                return Err(SplineError::BadGrid);
            }
        }
        // Tridiagonal solve for natural boundary conditions (y2 = 0 at ends).
        let mut y2 = vec![R::zero(); n];
        let mut u = vec![R::zero(); n];
        for i in 1..n - 1 {
            let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let p = sig * y2[i - 1] + R::of(2.0);
            y2[i] = (sig - R::one()) / p;
            let slope_hi = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
            let slope_lo = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            u[i] = (R::of(6.0) * (slope_hi - slope_lo) / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1])
                / p;
        }
        for i in (0..n - 1).rev() {
            y2[i] = y2[i] * y2[i + 1] + u[i];
        }
        Ok(Self { xs, ys, y2 })
    }

    pub fn x_min(&self) -> R {
        self.xs[0]
    }

    pub fn x_max(&self) -> R {
        *self.xs.last().unwrap()
    }

    fn bracket(&self, x: R) -> usize {
        // Largest i with xs[i] <= x, clamped to a valid interval start.
        let n = self.xs.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Spline value at `x`. Outside the grid the end cubic is extended;
    /// callers that need a decay tail handle it themselves.
    pub fn eval(&self, x: R) -> R {
        let i = self.bracket(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[i + 1]) * (h * h)
                / R::of(6.0)
    }

    /// First derivative of the spline at `x`.
    pub fn derivative(&self, x: R) -> R {
        let i = self.bracket(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((R::of(3.0) * b * b - R::one()) * self.y2[i + 1]
                - (R::of(3.0) * a * a - R::one()) * self.y2[i])
                * h
                / R::of(6.0)
    }

    /// Second derivative of the spline at `x`.
    pub fn second_derivative(&self, x: R) -> R {
        let i = self.bracket(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.y2[i] + b * self.y2[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let xs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (-x * x).exp()).collect();
        let sp = CubicSpline::new(xs, ys).unwrap();
        for &x in &[0.013, 1.37, 4.99, 8.21] {
            let err: f64 = sp.eval(x) - (-x * x as f64).exp();
            assert!(err.abs() < 1e-6, "x={x} err={err}");
        }
        // Derivative accuracy is one order worse but still tight on this grid.
        for &x in &[0.4, 1.0, 2.5] {
            let want = -2.0 * x * (-x * x as f64).exp();
            assert!((sp.derivative(x) - want).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(CubicSpline::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0, 0.5], vec![0.0; 3]).is_err());
    }
}
