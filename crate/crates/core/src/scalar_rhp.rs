//! The scalar factor
//! `delta(z) = exp( (1/2 pi i) int_{-z0}^{z0} log(1 - |r(s)|^2) / (s - z) ds )`
//! and its decomposition `log delta = chi(z) + i nu log((z - z0)/(z + z0))`.

use crate::quad::{adaptive, graded_breaks, Tolerance};
use crate::scattering::ReflectionFunction;
use crate::{Complex64, Error, Result};
use std::f64::consts::PI;
use std::path::Path;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Reflection data restricted to `[-z0, z0]`, with precomputed endpoint
/// quantities.
#[derive(Debug, Clone)]
pub struct ScalarRhp {
    z0: f64,
    refl: ReflectionFunction,
    nu: f64,
    r_minus: Complex64,
    log_end: f64,
    tol: Tolerance,
}

/// Relative tolerance on `| |r(z0)| - |r(-z0)| |`.
pub const SYMMETRY_TOL: f64 = 1e-8;

impl ScalarRhp {
    /// Fails if `[-z0, z0]` is not covered by the interpolant, if `|r| >= 1`
    /// anywhere on it, or if `|r(z0)| != |r(-z0)|`.
    pub fn new(refl: ReflectionFunction, z0: f64) -> Result<Self> {
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(Error::input(format!("z0 must be positive, got {z0}")));
        }
        let (lo, hi) = refl.domain();
        if lo > -z0 || hi < z0 {
            return Err(Error::input(format!(
                "reflection data on [{lo}, {hi}] does not cover [-{z0}, {z0}]"
            )));
        }
        let r_minus = refl.eval(-z0)?;
        let r_plus = refl.eval(z0)?;
        let (m, p) = (r_minus.norm(), r_plus.norm());
        if (m - p).abs() > SYMMETRY_TOL * m.max(p).max(1e-300) {
            return Err(Error::input(format!(
                "reflection is not symmetric: |r(z0)| = {p:.6e}, |r(-z0)| = {m:.6e}"
            )));
        }
        for i in 0..=400 {
            let s = -z0 + 2.0 * z0 * i as f64 / 400.0;
            if refl.eval(s)?.norm() >= 1.0 {
                return Err(Error::input(format!("|r({s})| >= 1")));
            }
        }
        let log_end = (1.0 - r_minus.norm_sqr()).ln();
        Ok(ScalarRhp { z0, refl, nu: -log_end / (2.0 * PI), r_minus, log_end, tol: Tolerance::default() })
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// `nu = -(1/2 pi) log(1 - |r(-z0)|^2)`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn r_minus(&self) -> Complex64 {
        self.r_minus
    }

    pub fn reflection(&self) -> &ReflectionFunction {
        &self.refl
    }

    /// `log(1 - |r(s)|^2)`.
    pub fn log_jump(&self, s: f64) -> f64 {
        let r = self.refl.eval(s).expect("point inside the validated interval");
        (1.0 - r.norm_sqr()).ln()
    }

    /// `f(s) = log(1 - |r(s)|^2) - log(1 - |r(-z0)|^2)`, vanishing at both ends.
    pub fn f(&self, s: f64) -> f64 {
        self.log_jump(s) - self.log_end
    }

    fn breaks(&self, extra: Option<f64>) -> Vec<f64> {
        let mut b = graded_breaks(-self.z0, self.z0, 8, 12);
        if let Some(x) = extra {
            if x > -self.z0 && x < self.z0 {
                b.push(x);
                b.sort_by(f64::total_cmp);
                b.dedup();
            }
        }
        b
    }

    fn off_cut(&self, z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::input("evaluation point must be finite"));
        }
        if z.im.abs() < 1e-12 && z.re.abs() <= self.z0 + 1e-12 {
            return Err(Error::input(format!("z = {z} lies on the cut [-z0, z0]")));
        }
        Ok(())
    }

    /// Cauchy transform `(1/2 pi i) int g(s)/(s - z) ds` for `z` off the cut,
    /// with `g(Re z)` subtracted so the integrand stays bounded near the cut.
    fn cauchy<G: Fn(f64) -> f64>(&self, g: G, z: Complex64) -> Result<Complex64> {
        let x = z.re.clamp(-self.z0, self.z0);
        let gx = g(x);
        let (v, _) = adaptive(
            |s| Complex64::new(g(s) - gx, 0.0) / (s - z),
            &self.breaks(Some(x)),
            self.tol,
        )?;
        let log_ratio = ((z - self.z0) / (z + self.z0)).ln();
        Ok((v + gx * log_ratio) / (2.0 * PI * I))
    }

    /// `chi(z) = (1/2 pi i) int f(s)/(s - z) ds`.
    pub fn chi(&self, z: Complex64) -> Result<Complex64> {
        self.off_cut(z)?;
        self.cauchy(|s| self.f(s), z)
    }

    /// `log delta(z)` for `z` off the cut, from the decomposition.
    pub fn log_delta(&self, z: Complex64) -> Result<Complex64> {
        let chi = self.chi(z)?;
        Ok(chi + I * self.nu * ((z - self.z0) / (z + self.z0)).ln())
    }

    pub fn delta(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_delta(z)?.exp())
    }

    /// `log delta` straight from the Cauchy integral of `log(1 - |r|^2)`,
    /// without splitting off the endpoint singularity.
    pub fn log_delta_direct(&self, z: Complex64) -> Result<Complex64> {
        self.off_cut(z)?;
        self.cauchy(|s| self.log_jump(s), z)
    }

    /// Boundary values `(delta_+(s), delta_-(s))` from the left (`+`, upper)
    /// and right (`-`, lower) of the cut, `-z0 < s < z0`.
    pub fn delta_boundary(&self, s: f64) -> Result<(Complex64, Complex64)> {
        if !(s > -self.z0 && s < self.z0) {
            return Err(Error::input(format!("boundary point {s} not inside the cut")));
        }
        let fs = self.log_jump(s);
        let (v, _) = adaptive(
            |t| Complex64::new(if t == s { 0.0 } else { (self.log_jump(t) - fs) / (t - s) }, 0.0),
            &self.breaks(Some(s)),
            self.tol,
        )?;
        let pv = v.re + fs * ((self.z0 - s) / (self.z0 + s)).ln();
        let base = Complex64::new(0.0, -pv / (2.0 * PI));
        Ok(((base + 0.5 * fs).exp(), (base - 0.5 * fs).exp()))
    }

    /// `J = int f(s)/(s + z0) ds`, so that `chi(-z0) = -i J / (2 pi)`.
    pub fn endpoint_integral(&self) -> Result<f64> {
        let z0 = self.z0;
        let (v, _) = adaptive(
            |s| {
                let d = s + z0;
                Complex64::new(if d == 0.0 { 0.0 } else { self.f(s) / d }, 0.0)
            },
            &self.breaks(None),
            self.tol,
        )?;
        Ok(v.re)
    }

    /// `chi` evaluated at the endpoint `-z0`.
    pub fn chi_at_minus_z0(&self) -> Result<Complex64> {
        Ok(Complex64::new(0.0, -self.endpoint_integral()? / (2.0 * PI)))
    }

    /// `chi` evaluated at the endpoint `z0`, `(1/2 pi i) int f(s)/(s - z0) ds`.
    pub fn chi_at_z0(&self) -> Result<Complex64> {
        let z0 = self.z0;
        let (v, _) = adaptive(
            |s| {
                let d = s - z0;
                Complex64::new(if d == 0.0 { 0.0 } else { self.f(s) / d }, 0.0)
            },
            &self.breaks(None),
            self.tol,
        )?;
        Ok(v / (2.0 * PI * I))
    }

    /// `(1/pi) int f(s)/(s + z0) ds`, the contribution of `chi(-z0)` to the
    /// asymptotic phase.
    pub fn phi_integral(&self) -> Result<f64> {
        Ok(self.endpoint_integral()? / PI)
    }

    /// Lipschitz constant of `f` on the cut, from a dense sample of `f'`.
    pub fn lipschitz_estimate(&self) -> Result<f64> {
        let n = 4000;
        let mut worst: f64 = 0.0;
        for i in 0..=n {
            let s = -self.z0 + 2.0 * self.z0 * i as f64 / n as f64;
            let r = self.refl.eval(s)?;
            let dr = self.refl.derivative(s)?;
            let d = 2.0 * (r.conj() * dr).re / (1.0 - r.norm_sqr());
            worst = worst.max(d.abs());
        }
        Ok(worst)
    }

    /// Samples `|chi(z0 + w) - chi(z0)|` along `w = u e^{i alpha}` and compares
    /// it with an explicit bound `c u |log u|`, with `c` built from the
    /// Lipschitz constant `L` of `f` and valid for all `u <= max(us) < 1`.
    pub fn log_lipschitz_check(&self, alpha: f64, us: &[f64]) -> Result<LogLipschitzReport> {
        if !(alpha > 0.0 && alpha <= PI / 2.0) {
            return Err(Error::input("alpha must lie in (0, pi/2]"));
        }
        let umax = us.iter().cloned().fold(0.0, f64::max);
        if !(umax < 1.0) || us.iter().any(|u| !(*u > 0.0)) {
            return Err(Error::input("sample radii must lie in (0, 1)"));
        }
        let lip = self.lipschitz_estimate()?;
        // |s - z0 - w| >= (|s - z0| + u)/sqrt(2) for alpha <= pi/2, so
        // |chi(z0+w) - chi(z0)| <= (sqrt2 L u / 2 pi) log(1 + 2 z0 / u).
        let constant = 2f64.sqrt() * lip / (2.0 * PI) * (1.0 + (1.0 + 2.0 * self.z0).ln() / umax.ln().abs());
        let base = self.chi_at_z0()?;
        let mut samples = Vec::new();
        let mut violations = 0;
        for &u in us {
            let w = Complex64::from_polar(u, alpha);
            let diff = (self.chi(self.z0 + w)? - base).norm();
            let bound = constant * u * u.ln().abs();
            if diff > bound {
                violations += 1;
            }
            samples.push((u, diff, bound));
        }
        Ok(LogLipschitzReport { alpha, lipschitz: lip, constant, samples, violations })
    }
}

/// Result of [`ScalarRhp::log_lipschitz_check`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct LogLipschitzReport {
    pub alpha: f64,
    pub lipschitz: f64,
    pub constant: f64,
    /// `(u, |chi(z0 + w) - chi(z0)|, c u |log u|)`
    pub samples: Vec<(f64, f64, f64)>,
    pub violations: usize,
}

/// Writes `delta` at each point as `z_re,z_im,delta_re,delta_im`.
pub fn write_delta_csv(path: &Path, zs: &[Complex64], deltas: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["z_re", "z_im", "delta_re", "delta_im"])?;
    for (z, d) in zs.iter().zip(deltas) {
        w.write_record(&[
            crate::scattering::fmt(z.re),
            crate::scattering::fmt(z.im),
            crate::scattering::fmt(d.re),
            crate::scattering::fmt(d.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}
