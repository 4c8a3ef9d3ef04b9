//! Natural cubic splines on strictly increasing knots.

use crate::{Complex64, Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::input("spline needs at least 3 knots and matching values"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::input("spline knots must be strictly increasing"));
        }
        // Tridiagonal solve for second derivatives with natural end conditions.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let cc = h1 / 6.0;
            let rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
            let denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(CubicSpline { x: x.to_vec(), y: y.to_vec(), m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    fn interval(&self, t: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    /// Value at `t`; fails outside the knot range.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::input(format!("spline evaluated at {t} outside [{lo}, {hi}]")));
        }
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        Ok(a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::input(format!("spline evaluated at {t} outside [{lo}, {hi}]")));
        }
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        Ok((self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0)
    }
}

/// Componentwise spline of a complex-valued function.
#[derive(Debug, Clone)]
pub struct ComplexSpline {
    re: CubicSpline,
    im: CubicSpline,
}

impl ComplexSpline {
    pub fn new(x: &[f64], y: &[Complex64]) -> Result<Self> {
        let re: Vec<f64> = y.iter().map(|v| v.re).collect();
        let im: Vec<f64> = y.iter().map(|v| v.im).collect();
        Ok(ComplexSpline { re: CubicSpline::new(x, &re)?, im: CubicSpline::new(x, &im)? })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.re.domain()
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.re.eval(t)?, self.im.eval(t)?))
    }

    pub fn derivative(&self, t: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.re.derivative(t)?, self.im.derivative(t)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_and_smooth_data() {
        let x: Vec<f64> = (0..=200).map(|i| -2.0 + 0.02 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| (-t * t).exp()).collect();
        let s = CubicSpline::new(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi).unwrap() - yi).abs() < 1e-15);
        }
        for &t in &[-0.913f64, 0.0071, 1.234] {
            let exact = (-t * t).exp();
            assert!((s.eval(t).unwrap() - exact).abs() < 1e-7);
            assert!((s.derivative(t).unwrap() + 2.0 * t * exact).abs() < 1e-4);
        }
        assert!(s.eval(2.5).is_err());
    }

    #[test]
    fn rejects_unsorted() {
        assert!(CubicSpline::new(&[0.0, 2.0, 1.0], &[0.0; 3]).is_err());
    }
}
