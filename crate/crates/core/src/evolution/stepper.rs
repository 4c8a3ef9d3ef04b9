//! Pseudo-spectral right-hand side and the ETDRK4 integrator.

use super::field::WaveField;
use crate::{Complex64, Error, Result};
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use std::f64::consts::PI;
use std::sync::Arc;

/// Physical grid is refined by this factor when forming the quintic
/// nonlinearity, which removes aliasing exactly.
pub const PADDING: usize = 3;

const CONTOUR_POINTS: usize = 32;

/// Absorbing layer `-sigma(x) q` added to the right-hand side. `sigma` rises
/// from 0 to `strength` over `ramp` outside the interior `[lo, hi]`.
///
/// The profile is a tanh step, so its spectrum decays exponentially. With a
/// piecewise-polynomial ramp the algebraic tail couples waves to modes whose
/// phase per time step differs by a multiple of 2 pi, and the exponential
/// integrator lets that coupling grow into a 1e-5 background.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Sponge {
    pub lo: f64,
    pub hi: f64,
    pub ramp: f64,
    pub strength: f64,
}

impl Sponge {
    pub fn sigma(&self, x: f64) -> f64 {
        let step = |d: f64| 0.5 * (1.0 + ((d / self.ramp - 0.5) * 10.0).tanh());
        self.strength * (step(self.lo - x) + step(x - self.hi))
    }
}

/// Linear damping `-gamma(k) q` of high wavenumbers, folded into the exact
/// linear propagator. `gamma` rises from 0 to `rate` around `|k| = k_cut`
/// over a few multiples of `width`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModeDamping {
    pub k_cut: f64,
    pub width: f64,
    pub rate: f64,
}

impl ModeDamping {
    pub fn gamma(&self, k: f64) -> f64 {
        0.5 * self.rate * (1.0 + ((k.abs() - self.k_cut) / self.width).tanh())
    }
}

/// FFT plans and work buffers for one grid.
pub struct Spectral {
    n: usize,
    m: usize,
    length: f64,
    k: Vec<f64>,
    r2c_n: Arc<dyn RealToComplex<f64>>,
    r2c_m: Arc<dyn RealToComplex<f64>>,
    c2r_m: Arc<dyn ComplexToReal<f64>>,
    spec_m: [Vec<Complex64>; 3],
    phys_m: [Vec<f64>; 3],
    phys_n: Vec<f64>,
    spec_n: Vec<Complex64>,
    sponge: Option<Vec<f64>>,
}

impl Spectral {
    pub fn new(n: usize, length: f64, x0: f64, sponge: Option<Sponge>) -> Self {
        let m = PADDING * n;
        let mut planner = RealFftPlanner::<f64>::new();
        let r2c_n = planner.plan_fft_forward(n);
        let r2c_m = planner.plan_fft_forward(m);
        let c2r_m = planner.plan_fft_inverse(m);
        let k = (0..=n / 2).map(|j| 2.0 * PI * j as f64 / length).collect();
        let dx = length / n as f64;
        let sponge = sponge.map(|s| (0..n).map(|j| s.sigma(x0 + dx * j as f64)).collect());
        Spectral {
            n,
            m,
            length,
            k,
            r2c_n,
            r2c_m,
            c2r_m,
            spec_m: [vec![Complex64::new(0.0, 0.0); m / 2 + 1], vec![Complex64::new(0.0, 0.0); m / 2 + 1], vec![Complex64::new(0.0, 0.0); m / 2 + 1]],
            phys_m: [vec![0.0; m], vec![0.0; m], vec![0.0; m]],
            phys_n: vec![0.0; n],
            spec_n: vec![Complex64::new(0.0, 0.0); n / 2 + 1],
            sponge,
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    /// Fourier coefficients of the nonlinear part
    /// `d/dx (6 q^5 - 10 q^2 q_xx - 10 q q_x^2)` (minus the sponge term).
    pub fn nonlinear(&mut self, v: &[Complex64], out: &mut [Complex64]) {
        let (n, m) = (self.n, self.m);
        let half = n / 2;
        for buf in self.spec_m.iter_mut() {
            buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        }
        let scale = 1.0 / n as f64;
        for j in 0..half {
            let ik = Complex64::new(0.0, self.k[j]);
            let c = v[j] * scale;
            self.spec_m[0][j] = c;
            self.spec_m[1][j] = ik * c;
            self.spec_m[2][j] = ik * ik * c;
        }
        for b in 0..3 {
            self.spec_m[b][0].im = 0.0;
            self.c2r_m
                .process(&mut self.spec_m[b], &mut self.phys_m[b])
                .expect("buffer sizes match the plan");
        }
        let [q, qx, qxx] = &mut self.phys_m;
        for i in 0..m {
            let (a, b, c) = (q[i], qx[i], qxx[i]);
            let a2 = a * a;
            // Reuse qxx as the flux buffer.
            qxx[i] = 6.0 * a2 * a2 * a - 10.0 * a2 * c - 10.0 * a * b * b;
        }
        if let Some(sig) = &self.sponge {
            for j in 0..n {
                self.phys_n[j] = sig[j] * q[PADDING * j];
            }
        }
        self.r2c_m.process(&mut self.phys_m[2], &mut self.spec_m[0]).expect("buffer sizes match the plan");
        let back = n as f64 / m as f64;
        for j in 0..half {
            out[j] = Complex64::new(0.0, self.k[j]) * self.spec_m[0][j] * back;
        }
        out[half] = Complex64::new(0.0, 0.0);
        if self.sponge.is_some() {
            self.r2c_n.process(&mut self.phys_n, &mut self.spec_n).expect("buffer sizes match the plan");
            for j in 0..half {
                out[j] -= self.spec_n[j];
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Exponential time-differencing RK4 (Cox-Matthews) with the linear part
/// `i k^5` (minus any mode damping) treated exactly; phi-functions are
/// evaluated by contour averages.
pub struct Etdrk4 {
    pub spectral: Spectral,
    dt: f64,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
    damping: Option<ModeDamping>,
    work: [Vec<Complex64>; 6],
}

impl Etdrk4 {
    pub fn new(spectral: Spectral, dt: f64, damping: Option<ModeDamping>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::input(format!("time step must be positive, got {dt}")));
        }
        let len = spectral.len() / 2 + 1;
        let zero = vec![Complex64::new(0.0, 0.0); len];
        let mut s = Etdrk4 {
            spectral,
            dt: 0.0,
            e: zero.clone(),
            e2: zero.clone(),
            q: zero.clone(),
            f1: zero.clone(),
            f2: zero.clone(),
            f3: zero.clone(),
            damping,
            work: [zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero],
        };
        s.set_dt(dt);
        Ok(s)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Recomputes the exponential coefficients when the step changes.
    pub fn set_dt(&mut self, dt: f64) {
        if dt == self.dt {
            return;
        }
        self.dt = dt;
        let roots: Vec<Complex64> = (0..CONTOUR_POINTS)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64))
            .collect();
        let inv = 1.0 / CONTOUR_POINTS as f64;
        for (j, &k) in self.spectral.k.iter().enumerate() {
            let gamma = self.damping.map_or(0.0, |d| d.gamma(k));
            let l = Complex64::new(-gamma, k.powi(5)) * dt;
            self.e[j] = l.exp();
            self.e2[j] = (l / 2.0).exp();
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for r in &roots {
                let z = l + r;
                let ez = z.exp();
                let z3 = z * z * z;
                q += ((z / 2.0).exp() - 1.0) / z;
                f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
                f2 += (2.0 + z + ez * (z - 2.0)) / z3;
                f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
            }
            self.q[j] = q * inv * dt;
            self.f1[j] = f1 * inv * dt;
            self.f2[j] = f2 * inv * dt;
            self.f3[j] = f3 * inv * dt;
        }
    }

    /// Advances the coefficients `v` by one step.
    pub fn step(&mut self, v: &mut [Complex64]) {
        let len = v.len();
        let [nv, a, na, b, nb, nc] = &mut self.work;
        self.spectral.nonlinear(v, nv);
        for j in 0..len {
            a[j] = self.e2[j] * v[j] + self.q[j] * nv[j];
        }
        self.spectral.nonlinear(a, na);
        for j in 0..len {
            b[j] = self.e2[j] * v[j] + self.q[j] * na[j];
        }
        self.spectral.nonlinear(b, nb);
        // Reuse `a` for stage c.
        for j in 0..len {
            a[j] = self.e2[j] * a[j] + self.q[j] * (2.0 * nb[j] - nv[j]);
        }
        self.spectral.nonlinear(a, nc);
        for j in 0..len {
            v[j] = self.e[j] * v[j] + self.f1[j] * nv[j] + 2.0 * self.f2[j] * (na[j] + nb[j]) + self.f3[j] * nc[j];
        }
    }
}

/// Physical-space nonlinear part `30 q^4 q_x - 10 q^2 q_xxx - 40 q q_x q_xx - 10 q_x^3`
/// of a field, evaluated with the dealiased flux form.
pub fn nonlinear_rhs(field: &WaveField) -> Vec<f64> {
    let n = field.len();
    let mut sp = Spectral::new(n, field.length, field.x0, None);
    let v = field.spectrum();
    let mut out = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
    sp.nonlinear(&v, &mut out);
    inverse(&out, n)
}

/// Exact solution of the linear part `q_t = q_xxxxx` after time `t`.
pub fn linear_evolve(field: &WaveField, t: f64) -> WaveField {
    let n = field.len();
    let mut v = field.spectrum();
    for (j, c) in v.iter_mut().enumerate() {
        let k = 2.0 * PI * j as f64 / field.length;
        *c *= Complex64::from_polar(1.0, k.powi(5) * t);
    }
    v[n / 2] = Complex64::new(0.0, 0.0);
    WaveField { samples: inverse(&v, n), time: field.time + t, ..field.clone() }
}

pub(crate) fn inverse(v: &[Complex64], n: usize) -> Vec<f64> {
    let mut planner = RealFftPlanner::<f64>::new();
    let c2r = planner.plan_fft_inverse(n);
    let mut spec = v.to_vec();
    spec[0].im = 0.0;
    spec[n / 2].im = 0.0;
    let mut out = vec![0.0; n];
    c2r.process(&mut spec, &mut out).expect("buffer sizes match the plan");
    out.iter().map(|x| x / n as f64).collect()
}
