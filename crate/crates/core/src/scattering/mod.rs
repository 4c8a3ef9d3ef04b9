//! Direct scattering for `psi_x = (i z sigma3 + Q) psi`, `Q = [[0, q], [q, 0]]`.
//!
//! The transfer matrix is built with a fourth-order Magnus integrator whose
//! one-step propagators are exact exponentials in SU(1,1), so
//! `|a|^2 - |b|^2 = 1` holds to rounding for any step size.

mod potential;

pub use potential::{Potential, SampledPotential, TRUNCATION};

use crate::spline::ComplexSpline;
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use std::path::Path;

/// Largest Magnus step used at spectral parameter `z`.
pub fn step_size(z: f64) -> f64 {
    0.02_f64.min(0.2 / (1.0 + z.abs()))
}

/// Matrix `[[a, b], [conj b, conj a]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Su11 {
    a: Complex64,
    b: Complex64,
}

impl Su11 {
    const ID: Su11 = Su11 { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) };

    #[inline]
    fn mul(self, o: Su11) -> Su11 {
        Su11 { a: self.a * o.a + self.b * o.b.conj(), b: self.a * o.b + self.b * o.a.conj() }
    }
}

/// Exponential of one Magnus step with Simpson nodes `q0, qm, q1` over
/// `[x, x + h]`: `Omega = h/6 (A0 + 4 Am + A1) - h^2/12 [Am, A1 - A0]`.
#[inline]
fn magnus_step(z: f64, h: f64, q0: f64, qm: f64, q1: f64) -> Su11 {
    let alpha = z * h;
    let beta = Complex64::new(h * (q0 + 4.0 * qm + q1) / 6.0, -h * h * z * (q1 - q0) / 6.0);
    let d = beta.norm_sqr() - alpha * alpha;
    let (c, s) = if d.abs() < 1e-6 {
        (1.0 + d / 2.0 + d * d / 24.0 + d * d * d / 720.0, 1.0 + d / 6.0 + d * d / 120.0 + d * d * d / 5040.0)
    } else if d > 0.0 {
        let k = d.sqrt();
        (k.cosh(), k.sinh() / k)
    } else {
        let k = (-d).sqrt();
        (k.cos(), k.sin() / k)
    };
    Su11 { a: Complex64::new(c, s * alpha), b: s * beta }
}

/// Potential prepared for repeated transfer-matrix evaluations.
enum Prepared<'a> {
    Analytic { pot: &'a Potential, xl: f64, xr: f64, breaks: Vec<f64> },
    Grid { xl: f64, h: f64, nodes: Vec<f64> },
}

fn prepare(pot: &Potential, h_target: f64) -> Prepared<'_> {
    let (xl, xr, inner) = pot.window();
    match pot {
        Potential::Sampled(s) => {
            // Even refinement so Simpson nodes land on the fine grid.
            let m = 2 * (s.dx / h_target).ceil().max(1.0) as usize;
            let mut nodes = s.upsample(m);
            nodes.push(nodes[0]);
            Prepared::Grid { xl, h: 2.0 * s.dx / m as f64, nodes }
        }
        _ => {
            let mut breaks = vec![xl];
            breaks.extend(inner.into_iter().filter(|b| *b > xl && *b < xr));
            breaks.push(xr);
            Prepared::Analytic { pot, xl, xr, breaks }
        }
    }
}

impl Prepared<'_> {
    fn interval(&self) -> (f64, f64) {
        match self {
            Prepared::Analytic { xl, xr, .. } => (*xl, *xr),
            Prepared::Grid { xl, h, nodes } => (*xl, xl + h * ((nodes.len() - 1) / 2) as f64),
        }
    }

    fn transfer(&self, z: f64) -> Su11 {
        let mut phi = Su11::ID;
        match self {
            Prepared::Analytic { pot, breaks, .. } => {
                for w in breaks.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let n = ((b - a) / step_size(z)).ceil().max(1.0) as usize;
                    let h = (b - a) / n as f64;
                    // Evaluate just inside the panel so discontinuities at the
                    // break points are resolved from the correct side.
                    let q = |x: f64| pot.eval(x.clamp(a + 1e-15 * (b - a), b - 1e-15 * (b - a)));
                    let mut q0 = q(a);
                    for j in 0..n {
                        let x = a + h * j as f64;
                        let qm = q(x + 0.5 * h);
                        let q1 = q(x + h);
                        phi = magnus_step(z, h, q0, qm, q1).mul(phi);
                        q0 = q1;
                    }
                }
            }
            Prepared::Grid { h, nodes, .. } => {
                let steps = (nodes.len() - 1) / 2;
                for j in 0..steps {
                    let e = magnus_step(z, *h, nodes[2 * j], nodes[2 * j + 1], nodes[2 * j + 2]);
                    phi = e.mul(phi);
                }
            }
        }
        phi
    }

    /// `(a(z), b(z))` from `S = e^{-i xl z s3} Phi^{-1} e^{i xr z s3}`.
    fn coefficients(&self, z: f64) -> (Complex64, Complex64) {
        let phi = self.transfer(z);
        let (xl, xr) = self.interval();
        let ea = Complex64::from_polar(1.0, z * (xr - xl));
        let eb = Complex64::from_polar(1.0, z * (xr + xl));
        (phi.a.conj() * ea, -phi.b.conj() * eb)
    }
}

/// Scattering coefficients on a real grid of spectral parameters.
#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize)]
pub struct ScatteringData {
    pub z: Vec<f64>,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub r: Vec<Complex64>,
}

impl ScatteringData {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Largest `||a|^2 - |b|^2 - 1|` over the grid.
    pub fn unitarity_defect(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|r(z) - conj r(-z)|` over grid points whose mirror image is
    /// also on the grid.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let n = self.z.len();
        for i in 0..n {
            let j = n - 1 - i;
            if (self.z[i] + self.z[j]).abs() <= 1e-12 * (1.0 + self.z[i].abs()) {
                worst = worst.max((self.r[i] - self.r[j].conj()).norm());
            }
        }
        worst
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["z", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r"])?;
        for i in 0..self.len() {
            w.write_record(&[
                fmt(self.z[i]),
                fmt(self.a[i].re),
                fmt(self.a[i].im),
                fmt(self.b[i].re),
                fmt(self.b[i].im),
                fmt(self.r[i].re),
                fmt(self.r[i].im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let mut out = ScatteringData::default();
        for rec in rdr.records() {
            let rec = rec?;
            let v: std::result::Result<Vec<f64>, _> = rec.iter().map(|s| s.trim().parse::<f64>()).collect();
            let v = v.map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            if v.len() != 7 {
                return Err(Error::input(format!("{}: expected 7 columns", path.display())));
            }
            out.z.push(v[0]);
            out.a.push(Complex64::new(v[1], v[2]));
            out.b.push(Complex64::new(v[3], v[4]));
            out.r.push(Complex64::new(v[5], v[6]));
        }
        Ok(out)
    }
}

pub(crate) fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

/// Uniform grid of `n` points on `[zmin, zmax]`.
pub fn linspace(zmin: f64, zmax: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![zmin];
    }
    let span = zmax - zmin;
    let d = (n - 1) as f64;
    (0..n)
        .map(|i| {
            // Mirror construction so that symmetric grids hold exact negatives.
            if 2 * i <= n - 1 {
                zmin + span * (i as f64 / d)
            } else {
                zmax - span * ((n - 1 - i) as f64 / d)
            }
        })
        .collect()
}

/// Computes `a`, `b` and `r = -conj(b)/conj(a)` at each point of `zs`.
///
/// Fails on non-finite grid points or if the computed coefficients violate
/// unitarity by more than `1e-6`, which indicates a corrupted potential.
pub fn scatter(pot: &Potential, zs: &[f64]) -> Result<ScatteringData> {
    if zs.is_empty() {
        return Err(Error::input("empty spectral grid"));
    }
    if zs.iter().any(|z| !z.is_finite()) {
        return Err(Error::input("spectral grid contains non-finite values"));
    }
    pot.validate()?;
    let zmax = zs.iter().fold(0.0_f64, |m, z| m.max(z.abs()));
    let prepared = prepare(pot, step_size(zmax));
    let coeffs: Vec<(Complex64, Complex64)> = zs.par_iter().map(|&z| prepared.coefficients(z)).collect();
    let mut data = ScatteringData { z: zs.to_vec(), ..Default::default() };
    for (a, b) in coeffs {
        data.r.push(-b.conj() / a.conj());
        data.a.push(a);
        data.b.push(b);
    }
    let defect = data.unitarity_defect();
    if !(defect <= 1e-6) {
        return Err(Error::numerical(format!("unitarity defect {defect:.3e} exceeds 1e-6")));
    }
    Ok(data)
}

/// Applies the time factor `r -> exp(-16 i t z^5) r`.
pub fn evolve_reflection(data: &ScatteringData, t: f64) -> ScatteringData {
    evolve_reflection_with_rate(data, t, -16.0)
}

/// Applies `r -> exp(i kappa t z^5) r` (and the matching factor on `b`).
pub fn evolve_reflection_with_rate(data: &ScatteringData, t: f64, kappa: f64) -> ScatteringData {
    let mut out = data.clone();
    for i in 0..out.len() {
        let e = Complex64::from_polar(1.0, kappa * t * out.z[i].powi(5));
        out.r[i] *= e;
        // r = -conj(b)/conj(a): rotating r by e rotates b by conj(e).
        out.b[i] *= e.conj();
    }
    out
}

/// Cubic-spline interpolant of `r` on the real axis.
#[derive(Debug, Clone)]
pub struct ReflectionFunction {
    spline: ComplexSpline,
}

impl ReflectionFunction {
    pub fn from_data(data: &ScatteringData) -> Result<Self> {
        if data.len() < 3 {
            return Err(Error::input("reflection interpolant needs at least 3 samples"));
        }
        Ok(ReflectionFunction { spline: ComplexSpline::new(&data.z, &data.r)? })
    }

    pub fn from_samples(z: &[f64], r: &[Complex64]) -> Result<Self> {
        Ok(ReflectionFunction { spline: ComplexSpline::new(z, r)? })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.spline.domain()
    }

    pub fn eval(&self, z: f64) -> Result<Complex64> {
        self.spline.eval(z)
    }

    pub fn derivative(&self, z: f64) -> Result<Complex64> {
        self.spline.derivative(z)
    }

    /// The reflection coefficient in the opposite orientation,
    /// `z -> conj r(z) = r(-z)`.
    pub fn conjugated(&self, zs: &[f64]) -> Result<Self> {
        let r: Result<Vec<Complex64>> = zs.iter().map(|&z| self.eval(z).map(|v| v.conj())).collect();
        Self::from_samples(zs, &r?)
    }
}
