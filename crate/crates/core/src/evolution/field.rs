use crate::scattering::{fmt, SampledPotential};
use crate::{Complex64, Error, Result};
use realfft::RealFftPlanner;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::path::Path;

/// Real samples `q(x0 + j L / N)` of a periodic field at time `time`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WaveField {
    pub x0: f64,
    pub length: f64,
    pub time: f64,
    pub samples: Vec<f64>,
}

impl WaveField {
    /// Fails unless `N` is a power of two (at least 8) and `L > 0`.
    pub fn new(x0: f64, length: f64, time: f64, samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::input(format!("grid size must be a power of two >= 8, got {n}")));
        }
        if !(length > 0.0 && length.is_finite() && x0.is_finite()) {
            return Err(Error::input("domain length must be positive and finite"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("field contains non-finite samples"));
        }
        Ok(WaveField { x0, length, time, samples })
    }

    /// Samples `f` on the centred grid `[-L/2, L/2)`.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, length: f64, f: F) -> Result<Self> {
        Self::on_grid(n, -length / 2.0, length, f)
    }

    /// Samples `f` on `[x0, x0 + L)`.
    pub fn on_grid<F: Fn(f64) -> f64>(n: usize, x0: f64, length: f64, f: F) -> Result<Self> {
        let dx = length / n as f64;
        Self::new(x0, length, 0.0, (0..n).map(|j| f(x0 + dx * j as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.length / self.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + self.dx() * j as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }

    /// `int q dx` (exact for trigonometric polynomials).
    pub fn mass(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.dx()
    }

    /// `int q^2 dx`.
    pub fn l2(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>() * self.dx()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|q|` within `fraction * L` of either end of the window.
    pub fn edge_max(&self, fraction: f64) -> f64 {
        let n = self.len();
        let w = ((n as f64) * fraction).ceil() as usize;
        self.samples[..w].iter().chain(&self.samples[n - w..]).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Unnormalised real DFT `v_k = sum_j q_j e^{-2 pi i jk/N}`, `k = 0..=N/2`.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut planner = RealFftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(self.len());
        let mut input = self.samples.clone();
        let mut out = fft.make_output_vec();
        fft.process(&mut input, &mut out).expect("buffer sizes match the plan");
        out
    }

    /// Trigonometric interpolant at an arbitrary `x` (periodic in `L`).
    pub fn interpolate(&self, x: f64) -> f64 {
        let v = self.spectrum();
        let n = self.len();
        let s = x - self.x0;
        let mut sum = v[0].re;
        for (k, vk) in v.iter().enumerate().take(n / 2).skip(1) {
            let th = 2.0 * PI * k as f64 * s / self.length;
            sum += 2.0 * (vk * Complex64::from_polar(1.0, th)).re;
        }
        // Nyquist term, taken as a cosine so the interpolant stays real.
        let th = PI * n as f64 * s / self.length;
        sum += v[n / 2].re * th.cos();
        sum / n as f64
    }

    /// Analytic signal: the positive-wavenumber part of `q`, doubled.
    pub fn analytic_signal(&self) -> Vec<Complex64> {
        let n = self.len();
        let v = self.spectrum();
        let mut full = vec![Complex64::new(0.0, 0.0); n];
        full[0] = v[0];
        for k in 1..n / 2 {
            full[k] = 2.0 * v[k];
        }
        full[n / 2] = v[n / 2];
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_inverse(n).process(&mut full);
        full.iter().map(|c| c / n as f64).collect()
    }

    pub fn to_potential(&self) -> Result<SampledPotential> {
        SampledPotential::new(self.x0, self.dx(), self.samples.clone())
    }

    /// Writes `x,q`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "q"])?;
        for (j, q) in self.samples.iter().enumerate() {
            w.write_record(&[fmt(self.x(j)), fmt(*q)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads an `x,q` CSV written by [`WaveField::write_csv`].
    pub fn read_csv(path: &Path, time: f64) -> Result<Self> {
        let p = SampledPotential::from_csv(path)?;
        let n = p.len();
        Self::new(p.x0, p.dx * n as f64, time, p.values)
    }
}
