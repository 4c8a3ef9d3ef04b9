//! Periodic pseudo-spectral evolution of
//! `q_t = q_xxxxx + 30 q^4 q_x - 10 q^2 q_xxx - 40 q q_x q_xx - 10 q_x^3`.
//!
//! The nonlinear terms are evaluated in the conservative flux form
//! `d/dx (6 q^5 - 10 q^2 q_xx - 10 q q_x^2)` on a grid padded by a factor
//! of three.

mod field;
mod stepper;

pub use field::WaveField;
pub use stepper::{linear_evolve, nonlinear_rhs, Etdrk4, ModeDamping, Spectral, Sponge, PADDING};

use crate::{Complex64, Error, Result};

/// Default time step.
pub const DEFAULT_DT: f64 = 5e-3;
/// Largest grid spacing accepted by [`check_resolution`].
pub const MAX_DX: f64 = 0.15;

/// Smaller steps for an initial interval, where the field is steep and
/// the stiff nonlinear transients are strongest.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Startup {
    pub until: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EvolveOptions {
    pub dt: f64,
    pub startup: Option<Startup>,
    pub sponge: Option<Sponge>,
    /// Abort if `|q|` exceeds this in the outer 5% of the window at a
    /// checkpoint.
    pub wrap_guard: Option<f64>,
    pub damping: Option<ModeDamping>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { dt: DEFAULT_DT, startup: None, sponge: None, wrap_guard: None, damping: None }
    }
}

/// Conserved quantities recorded at a checkpoint.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct DriftSample {
    pub t: f64,
    pub mass: f64,
    pub l2: f64,
    pub edge_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Evolution {
    pub checkpoints: Vec<WaveField>,
    pub drift: Vec<DriftSample>,
    pub steps: usize,
}

impl Evolution {
    pub fn final_field(&self) -> &WaveField {
        self.checkpoints.last().expect("at least one checkpoint")
    }

    pub fn max_mass_drift(&self) -> f64 {
        let m0 = self.drift[0].mass;
        self.drift.iter().map(|d| (d.mass - m0).abs()).fold(0.0, f64::max)
    }

    pub fn max_l2_drift(&self) -> f64 {
        let e0 = self.drift[0].l2;
        self.drift.iter().map(|d| (d.l2 - e0).abs()).fold(0.0, f64::max)
    }
}

/// Fails if the grid is coarser than [`MAX_DX`].
pub fn check_resolution(field: &WaveField) -> Result<()> {
    if field.dx() > MAX_DX * (1.0 + 1e-12) {
        return Err(Error::config(format!("grid spacing {} exceeds {MAX_DX}", field.dx())));
    }
    Ok(())
}

fn sample(field: &WaveField, steps: usize) -> DriftSample {
    DriftSample { t: field.time, mass: field.mass(), l2: field.l2(), edge_max: field.edge_max(0.05), steps }
}

/// Integrates from `initial.time` through each time in `checkpoints`
/// (increasing, all later than the start), returning the field at each.
/// Steps are shortened where needed so checkpoints are hit exactly.
///
/// Fails on non-finite values (with the step index) and, if a wrap guard is
/// set, when a checkpoint field is not small near the window edges.
pub fn evolve(initial: &WaveField, checkpoints: &[f64], opts: &EvolveOptions) -> Result<Evolution> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::config(format!("dt must be positive, got {}", opts.dt)));
    }
    if checkpoints.is_empty() {
        return Err(Error::config("no checkpoint times given"));
    }
    let mut prev = initial.time;
    for &t in checkpoints {
        if !(t > prev) {
            return Err(Error::config(format!("checkpoint times must increase past {prev}, got {t}")));
        }
        prev = t;
    }
    let n = initial.len();
    let spectral = Spectral::new(n, initial.length, initial.x0, opts.sponge);
    let mut stepper = Etdrk4::new(spectral, opts.dt, opts.damping)?;
    let mut v: Vec<Complex64> = initial.spectrum();
    v[n / 2] = Complex64::new(0.0, 0.0);
    let norm0: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().max(1e-300);

    let mut t = initial.time;
    let mut steps = 0usize;
    let mut out = Evolution { checkpoints: Vec::new(), drift: vec![sample(initial, 0)], steps: 0 };

    // Segment boundaries: checkpoints plus the end of the startup interval.
    let mut stops: Vec<(f64, bool)> = checkpoints.iter().map(|&c| (c, true)).collect();
    if let Some(s) = opts.startup {
        if !(s.dt > 0.0) {
            return Err(Error::config("startup dt must be positive"));
        }
        if s.until > t && !checkpoints.iter().any(|&c| c == s.until) {
            stops.push((s.until, false));
        }
    }
    stops.sort_by(|a, b| a.0.total_cmp(&b.0));

    for (stop, is_checkpoint) in stops {
        let target_dt = match opts.startup {
            Some(s) if t < s.until => s.dt,
            _ => opts.dt,
        };
        let nsteps = ((stop - t) / target_dt - 1e-9).ceil().max(1.0) as usize;
        stepper.set_dt((stop - t) / nsteps as f64);
        for i in 0..nsteps {
            stepper.step(&mut v);
            steps += 1;
            if i % 64 == 63 || i + 1 == nsteps {
                let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                if !norm.is_finite() || norm > 1e12 * norm0 {
                    return Err(Error::numerical(format!(
                        "solution blew up at step {steps} (t = {:.6})",
                        t + (i + 1) as f64 * stepper.dt()
                    )));
                }
            }
        }
        t = stop;
        if is_checkpoint {
            let field = WaveField {
                x0: initial.x0,
                length: initial.length,
                time: t,
                samples: stepper::inverse(&v, n),
            };
            let s = sample(&field, steps);
            if let Some(guard) = opts.wrap_guard {
                if s.edge_max > guard {
                    return Err(Error::numerical(format!(
                        "wrap-around guard: |q| = {:.3e} in the outer 5% of the window at t = {t} \
                         exceeds {guard:.1e}; enlarge the domain or add an absorbing layer",
                        s.edge_max
                    )));
                }
            }
            out.drift.push(s);
            out.checkpoints.push(field);
        }
    }
    out.steps = steps;
    Ok(out)
}

/// Single step of size `dt` from `field`.
pub fn step(field: &WaveField, dt: f64) -> Result<WaveField> {
    let ev = evolve(field, &[field.time + dt], &EvolveOptions { dt, ..Default::default() })?;
    Ok(ev.checkpoints.into_iter().next().expect("one checkpoint"))
}
