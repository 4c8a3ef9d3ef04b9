//! Real potentials `q(x)` for the Zakharov-Shabat problem.

use crate::{Error, Result};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::path::Path;

/// Potentials below this magnitude are treated as zero when truncating the
/// real line to a finite window.
pub const TRUNCATION: f64 = 1e-14;

/// Uniformly sampled potential `q(x0 + j dx)`, `j = 0..n`, interpreted as one
/// period of a band-limited function.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl SampledPotential {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 8 {
            return Err(Error::input("sampled potential needs at least 8 points"));
        }
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(Error::input("sampled potential needs finite x0 and dx > 0"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("sampled potential contains non-finite values"));
        }
        Ok(SampledPotential { x0, dx, values })
    }

    /// Reads a two-column `x,q` CSV with a header row and uniform spacing.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let mut xs = Vec::new();
        let mut qs = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() < 2 {
                return Err(Error::input(format!("{}: expected columns x,q", path.display())));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::input(format!("{}: bad number {s:?}: {e}", path.display())))
            };
            xs.push(parse(&rec[0])?);
            qs.push(parse(&rec[1])?);
        }
        if xs.len() < 8 {
            return Err(Error::input(format!("{}: need at least 8 samples", path.display())));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (j, x) in xs.iter().enumerate() {
            let expect = xs[0] + dx * j as f64;
            if (x - expect).abs() > 1e-6 * dx {
                return Err(Error::input(format!(
                    "{}: samples must be uniformly spaced (row {j})",
                    path.display()
                )));
            }
        }
        Self::new(xs[0], dx, qs)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trigonometric interpolation onto a grid `factor` times finer.
    pub fn upsample(&self, factor: usize) -> Vec<f64> {
        let n = self.values.len();
        if factor == 1 {
            return self.values.clone();
        }
        let m = n * factor;
        let mut planner = FftPlanner::<f64>::new();
        let mut spec: Vec<Complex64> =
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        planner.plan_fft_forward(n).process(&mut spec);
        let mut big = vec![Complex64::new(0.0, 0.0); m];
        let half = n / 2;
        for k in 0..n {
            if n % 2 == 0 && k == half {
                // Split the Nyquist coefficient symmetrically.
                big[half] += 0.5 * spec[k];
                big[m - half] += 0.5 * spec[k];
            } else if k < half || (n % 2 == 1 && k == half) {
                big[k] = spec[k];
            } else {
                big[m - (n - k)] = spec[k];
            }
        }
        planner.plan_fft_inverse(m).process(&mut big);
        big.iter().map(|c| c.re / n as f64).collect()
    }
}

#[derive(Debug, Clone)]
pub enum Potential {
    /// `amplitude * exp(-(x / width)^2)`
    Gaussian { amplitude: f64, width: f64 },
    /// `height` on `[0, width]`, zero elsewhere.
    Box { height: f64, width: f64 },
    /// `amplitude * sech(x)`
    Sech { amplitude: f64 },
    Sampled(SampledPotential),
}

fn parse_params(s: &str, n: usize, name: &str) -> Result<Vec<f64>> {
    let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let v = v.map_err(|e| Error::input(format!("{name}: bad parameter list {s:?}: {e}")))?;
    if v.len() != n {
        return Err(Error::input(format!("{name}: expected {n} parameters, got {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::input(format!("{name}: parameters must be finite")));
    }
    Ok(v)
}

impl Potential {
    /// Parses `gaussian:A,w`, `box:h,w`, `sech:A`, or a path to an `x,q` CSV.
    pub fn parse(spec: &str) -> Result<Self> {
        let p = if let Some(rest) = spec.strip_prefix("gaussian:") {
            let v = parse_params(rest, 2, "gaussian")?;
            Potential::Gaussian { amplitude: v[0], width: v[1] }
        } else if let Some(rest) = spec.strip_prefix("box:") {
            let v = parse_params(rest, 2, "box")?;
            Potential::Box { height: v[0], width: v[1] }
        } else if let Some(rest) = spec.strip_prefix("sech:") {
            let v = parse_params(rest, 1, "sech")?;
            Potential::Sech { amplitude: v[0] }
        } else {
            Potential::Sampled(SampledPotential::from_csv(Path::new(spec))?)
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Potential::Gaussian { width, .. } | Potential::Box { width, .. } if *width <= 0.0 => {
                Err(Error::input("potential width must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Pointwise value. For sampled potentials this is the trigonometric
    /// interpolant, which costs O(n) per call.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Gaussian { amplitude, width } => amplitude * (-(x / width).powi(2)).exp(),
            Potential::Box { height, width } => {
                if (0.0..=*width).contains(&x) {
                    *height
                } else {
                    0.0
                }
            }
            Potential::Sech { amplitude } => amplitude / x.cosh(),
            Potential::Sampled(s) => {
                let n = s.len();
                let period = s.dx * n as f64;
                let mut sum = 0.0;
                // Periodic sinc (Dirichlet kernel) interpolation.
                for (j, v) in s.values.iter().enumerate() {
                    let d = (x - s.x0 - s.dx * j as f64) / period;
                    let d = d - d.round();
                    sum += v * dirichlet(d, n);
                }
                sum
            }
        }
    }

    /// Interval `[xl, xr]` outside which the potential is negligible, together
    /// with interior break points where `q` is not smooth.
    pub fn window(&self) -> (f64, f64, Vec<f64>) {
        match self {
            Potential::Gaussian { amplitude, width } => {
                let a = amplitude.abs();
                let x = if a > TRUNCATION { width * (a / TRUNCATION).ln().sqrt() } else { *width };
                (-x, x, vec![])
            }
            Potential::Box { width, .. } => (0.0, *width, vec![]),
            Potential::Sech { amplitude } => {
                let a = amplitude.abs();
                let x = if a > TRUNCATION { (2.0 * a / TRUNCATION).ln() } else { 1.0 };
                (-x, x, vec![])
            }
            Potential::Sampled(s) => (s.x0, s.x0 + s.dx * s.len() as f64, vec![]),
        }
    }

    /// Total mass `integral q dx`.
    pub fn mass(&self) -> f64 {
        match self {
            Potential::Gaussian { amplitude, width } => amplitude * width * std::f64::consts::PI.sqrt(),
            Potential::Box { height, width } => height * width,
            Potential::Sech { amplitude } => amplitude * std::f64::consts::PI,
            Potential::Sampled(s) => s.values.iter().sum::<f64>() * s.dx,
        }
    }
}

fn dirichlet(d: f64, n: usize) -> f64 {
    // Interpolating kernel for n samples per unit period, evaluated at offset d.
    let nf = n as f64;
    if d.abs() < 1e-15 {
        return 1.0;
    }
    let s = (std::f64::consts::PI * d).sin();
    if n % 2 == 1 {
        (std::f64::consts::PI * nf * d).sin() / (nf * s)
    } else {
        (std::f64::consts::PI * nf * d).sin() / (nf * s) * (std::f64::consts::PI * d).cos()
    }
}
