//! Parabolic-cylinder model problem: the Weber function `U(a, z)` and the
//! coefficients `beta12`, `beta21` of the local solution.

use crate::special::{gamma, pochhammer, recip_gamma};
use crate::{Complex64, Error, Result};
use std::f64::consts::{FRAC_PI_4, PI};

/// Radius at which `U` is seeded from its large-`z` expansion.
pub const SEED_RADIUS: f64 = 30.0;

/// Large-`|z|` expansion of `(U, U')`, valid for `|arg z| < 3 pi / 4`:
/// `U ~ e^{-z^2/4} z^{-a-1/2} sum_s (-1)^s (1/2 + a)_{2s} / (s! (2 z^2)^s)`.
///
/// Terms are added until they stop decreasing or fall below rounding.
pub fn u_asymptotic(a: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let half = a + 0.5;
    let inv = 1.0 / (2.0 * z * z);
    let mut sum = Complex64::new(1.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for s in 1..60 {
        let t = pochhammer(half, 2 * s) * inv.powu(s as u32) * if s % 2 == 0 { 1.0 } else { -1.0 }
            / (1..=s).map(|k| k as f64).product::<f64>();
        if t.norm() >= prev {
            break;
        }
        prev = t.norm();
        sum += t;
        dsum += t * (-2.0 * s as f64) / z;
        if t.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    let pre = (-z * z / 4.0 - half * z.ln()).exp();
    let u = pre * sum;
    let du = pre * ((-z / 2.0 - half / z) * sum + dsum);
    (u, du)
}

/// One Taylor step of `g'' = (z^2/4 + a) g` from `c` to `c + h`.
fn taylor_step(a: Complex64, c: Complex64, g: Complex64, gp: Complex64, h: Complex64) -> (Complex64, Complex64) {
    let p0 = (c * c / 4.0 + a) * h * h;
    let p1 = c / 2.0 * h * h * h;
    let p2 = 0.25 * h * h * h * h;
    // d[n] = c_n h^n
    let zero = Complex64::new(0.0, 0.0);
    let mut d: Vec<Complex64> = Vec::with_capacity(64);
    d.push(g);
    d.push(gp * h);
    let mut val = d[0] + d[1];
    let mut der = d[1];
    for k in 0..400usize {
        let dk1 = if k >= 1 { d[k - 1] } else { zero };
        let dk2 = if k >= 2 { d[k - 2] } else { zero };
        let next = (p0 * d[k] + p1 * dk1 + p2 * dk2) / ((k + 2) as f64 * (k + 1) as f64);
        d.push(next);
        val += next;
        der += next * (k + 2) as f64;
        if k > 8 && next.norm() + d[k + 1].norm() < 1e-18 * (val.norm() + der.norm()) {
            break;
        }
    }
    (val, der / h)
}

/// Integrates `(U, U')` along the straight segment from `from` to `to`.
fn integrate(a: Complex64, from: Complex64, to: Complex64, mut g: Complex64, mut gp: Complex64) -> (Complex64, Complex64) {
    let mut c = from;
    let total = (to - from).norm();
    if total == 0.0 {
        return (g, gp);
    }
    let dir = (to - from) / total;
    let mut done = 0.0;
    while done < total {
        let hl = (1.0 / (0.5 * c.norm() + a.norm().sqrt() + 1.0)).min(0.5).min(total - done);
        let h = dir * hl;
        let (ng, ngp) = taylor_step(a, c, g, gp, h);
        g = ng;
        gp = ngp;
        done += hl;
        c = from + dir * done;
    }
    (g, gp)
}

/// Weber parabolic-cylinder function `U(a, z)` for fixed `a`.
#[derive(Debug, Clone)]
pub struct ParabolicCylinder {
    a: Complex64,
    origin: (Complex64, Complex64),
}

impl ParabolicCylinder {
    pub fn new(a: Complex64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::input("parabolic-cylinder order must be finite"));
        }
        let seed = Complex64::new(SEED_RADIUS, 0.0);
        let (u, du) = u_asymptotic(a, seed);
        let origin = integrate(a, seed, Complex64::new(0.0, 0.0), u, du);
        Ok(ParabolicCylinder { a, origin })
    }

    pub fn order(&self) -> Complex64 {
        self.a
    }

    /// `(U(a, z), U'(a, z))`.
    ///
    /// In `|arg z| <= pi/4`, where `U` is recessive, the value is integrated
    /// inward from the asymptotic seed on the same ray. Elsewhere it is
    /// integrated outward from the origin.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::input("parabolic-cylinder argument must be finite"));
        }
        let rho = z.norm();
        if rho == 0.0 {
            return Ok(self.origin);
        }
        let theta = z.arg();
        if theta.abs() <= FRAC_PI_4 {
            if rho >= SEED_RADIUS {
                return Ok(u_asymptotic(self.a, z));
            }
            let seed = Complex64::from_polar(SEED_RADIUS, theta);
            let (u, du) = u_asymptotic(self.a, seed);
            Ok(integrate(self.a, seed, z, u, du))
        } else {
            Ok(integrate(self.a, Complex64::new(0.0, 0.0), z, self.origin.0, self.origin.1))
        }
    }

    pub fn u(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z)?.0)
    }

    /// `W{U(a, z), U(a, -z)}` computed from the two evaluations.
    pub fn wronskian(&self, z: Complex64) -> Result<Complex64> {
        let (u, du) = self.eval(z)?;
        let (v, dv) = self.eval(-z)?;
        // d/dz U(a, -z) = -U'(a, -z)
        Ok(-u * dv - du * v)
    }
}

/// `U(a, 0)` and `U'(a, 0)` from their gamma-function closed forms.
pub fn u_at_origin(a: Complex64) -> Result<(Complex64, Complex64)> {
    let sp = PI.sqrt();
    let two = Complex64::new(2.0, 0.0);
    let u = sp * recip_gamma(a / 2.0 + 0.75)? / two.powc(a / 2.0 + 0.25);
    let du = -sp * recip_gamma(a / 2.0 + 0.25)? / two.powc(a / 2.0 - 0.25);
    Ok((u, du))
}

/// `sqrt(2 pi) / Gamma(1/2 + a)`.
pub fn wronskian_exact(a: Complex64) -> Result<Complex64> {
    Ok((2.0 * PI).sqrt() * recip_gamma(a + 0.5)?)
}

/// Order `a = -i nu - 1/2` of the model problem.
pub fn model_order(nu: f64) -> Complex64 {
    Complex64::new(-0.5, -nu)
}

/// Which normalisation of `beta12` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaBranch {
    /// Prefactor `exp(+pi nu / 2)`, giving `|beta12|^2 = nu exp(2 pi nu)`.
    Unnormalized,
    /// Prefactor `exp(-pi nu / 2)`, giving `|beta12|^2 = nu`.
    Normalized,
}

impl BetaBranch {
    pub fn name(self) -> &'static str {
        match self {
            BetaBranch::Unnormalized => "unnormalized",
            BetaBranch::Normalized => "normalized",
        }
    }
}

impl std::str::FromStr for BetaBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unnormalized" => Ok(BetaBranch::Unnormalized),
            "normalized" => Ok(BetaBranch::Normalized),
            _ => Err(Error::config(format!("unknown branch {s:?} (unnormalized | normalized)"))),
        }
    }
}

/// Relative tolerance on `nu = -(1/2 pi) log(1 - |r(-z0)|^2)`.
pub const NU_CONSISTENCY_TOL: f64 = 1e-10;

/// Coefficients of the model solution for given `nu` and `r(-z0)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ModelRhp {
    pub nu: f64,
    pub r_minus: Complex64,
    pub branch: BetaBranch,
    pub beta12: Complex64,
    pub beta21: Complex64,
}

impl ModelRhp {
    /// Fails if `nu <= 0` or if `nu` and `|r(-z0)|` disagree.
    pub fn new(nu: f64, r_minus: Complex64, branch: BetaBranch) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::input(format!("nu must be positive, got {nu}")));
        }
        let expect = -(1.0 - r_minus.norm_sqr()).ln() / (2.0 * PI);
        if !((nu - expect).abs() <= NU_CONSISTENCY_TOL * nu.max(1.0)) {
            return Err(Error::input(format!(
                "nu = {nu} inconsistent with |r(-z0)| = {} (expected {expect})",
                r_minus.norm()
            )));
        }
        let sign = match branch {
            BetaBranch::Unnormalized => 1.0,
            BetaBranch::Normalized => -1.0,
        };
        let g = gamma(Complex64::new(0.0, -nu))?;
        let beta12 = (sign * PI * nu / 2.0).exp() * (2.0 * PI).sqrt() * Complex64::from_polar(1.0, 3.0 * FRAC_PI_4)
            / (-r_minus.conj() * g);
        let beta21 = -nu / beta12;
        Ok(ModelRhp { nu, r_minus, branch, beta12, beta21 })
    }

    /// Builds the coefficients from `r(-z0)` alone.
    pub fn from_reflection(r_minus: Complex64, branch: BetaBranch) -> Result<Self> {
        let nu = -(1.0 - r_minus.norm_sqr()).ln() / (2.0 * PI);
        Self::new(nu, r_minus, branch)
    }

    /// Off-diagonal entries `((m1)_12, (m1)_21) = (-i beta12, i beta21)`.
    pub fn m1(&self) -> (Complex64, Complex64) {
        let i = Complex64::new(0.0, 1.0);
        (-i * self.beta12, i * self.beta21)
    }
}

/// Spread and accuracy of the numerical Wronskian for `a = -i nu - 1/2`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WronskianReport {
    pub nu: f64,
    pub points: Vec<f64>,
    pub values: Vec<Complex64>,
    pub exact: Complex64,
    /// Largest pairwise relative difference between the numerical values.
    pub spread: f64,
    /// Largest relative deviation from the closed form.
    pub max_error: f64,
}

pub fn wronskian_report(nu: f64, points: &[f64]) -> Result<WronskianReport> {
    let a = model_order(nu);
    let pc = ParabolicCylinder::new(a)?;
    let exact = wronskian_exact(a)?;
    let values: Result<Vec<Complex64>> = points.iter().map(|&z| pc.wronskian(Complex64::new(z, 0.0))).collect();
    let values = values?;
    let mut spread: f64 = 0.0;
    for (i, v) in values.iter().enumerate() {
        for w in &values[i + 1..] {
            spread = spread.max((v - w).norm() / exact.norm());
        }
    }
    let max_error = values.iter().map(|v| (v - exact).norm() / exact.norm()).fold(0.0, f64::max);
    Ok(WronskianReport { nu, points: points.to_vec(), values, exact, spread, max_error })
}
