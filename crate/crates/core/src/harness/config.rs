use crate::evolution::{ModeDamping, Sponge, Startup, WaveField, DEFAULT_DT, MAX_DX};
use crate::model_rhp::BetaBranch;
use crate::scattering::Potential;
use crate::{Error, Result};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Number of grid points, a power of two.
    pub n: usize,
    pub dx: f64,
    /// Fraction of the periodic window lying at `x < 0`.
    pub left: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 1 << 16, dx: 0.15, left: 0.8 }
    }
}

impl GridConfig {
    pub fn length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Left end of the window.
    pub fn x0(&self) -> f64 {
        -self.left * self.length()
    }

    pub fn x_right(&self) -> f64 {
        self.x0() + self.length()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Result<WaveField> {
        WaveField::on_grid(self.n, self.x0(), self.length(), f)
    }
}

/// Absorbing layer placement.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpongeConfig {
    /// Interior chosen from the times and rays being sampled.
    Auto,
    Off,
    Manual(Sponge),
}

/// High-wavenumber damping for the main run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DampingConfig {
    /// Cut above the wavenumbers still inside the interior at the first
    /// comparison time, and below the first step resonance `k^5 dt = 2 pi`.
    Auto,
    Off,
    Manual(ModeDamping),
}

/// Which `beta12` normalisation the assembled prediction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchChoice {
    /// Pick the branch that passes the envelope and error-decay checks.
    Auto,
    Unnormalized,
    Normalized,
}

/// Orientation of the reflection coefficient fed to the predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionChoice {
    /// Use `conj r` when the measured time factor has the opposite sign to
    /// `exp(-16 i t z^5)`.
    Auto,
    Computed,
    Conjugated,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReflectionGrid {
    pub zmax: f64,
    pub nz: usize,
}

impl Default for ReflectionGrid {
    fn default() -> Self {
        ReflectionGrid { zmax: 1.5, nz: 301 }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IstConfig {
    pub times: Vec<f64>,
    pub grid: GridConfig,
    /// Spectral window `[-zmax, zmax]` used for the comparison.
    pub zmax: f64,
    pub nz: usize,
    pub sponge: SpongeConfig,
    pub modulus_tol: f64,
}

impl Default for IstConfig {
    fn default() -> Self {
        IstConfig {
            times: vec![2.0, 5.0],
            grid: GridConfig { n: 1 << 15, dx: 0.15, left: 0.5 },
            zmax: 1.4,
            nz: 141,
            sponge: SpongeConfig::Auto,
            modulus_tol: 1e-4,
        }
    }
}

/// Full description of a comparison run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `gaussian:A,w`, `box:h,w`, `sech:A`, or a path to an `x,q` CSV.
    pub potential: String,
    pub z0: f64,
    pub times: Vec<f64>,
    pub grid: GridConfig,
    pub dt: f64,
    pub startup: Option<Startup>,
    pub sponge: SpongeConfig,
    pub damping: DampingConfig,
    pub wrap_guard: Option<f64>,
    /// Width of the envelope and wavenumber window, in local wavelengths.
    pub window_wavelengths: f64,
    pub reflection: ReflectionGrid,
    pub branch: BranchChoice,
    pub convention: ConventionChoice,
    pub ist: IstConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            potential: "gaussian:0.3,1".into(),
            z0: 0.7,
            times: vec![25.0, 50.0, 100.0, 200.0],
            grid: GridConfig::default(),
            dt: DEFAULT_DT,
            startup: Some(Startup { until: 1.0, dt: 5e-4 }),
            sponge: SpongeConfig::Auto,
            damping: DampingConfig::Auto,
            wrap_guard: Some(1e-8),
            window_wavelengths: 4.0,
            reflection: ReflectionGrid::default(),
            branch: BranchChoice::Auto,
            convention: ConventionChoice::Auto,
            ist: IstConfig::default(),
        }
    }
}

fn check_grid(g: &GridConfig, what: &str) -> Result<()> {
    if g.n < 8 || !g.n.is_power_of_two() {
        return Err(Error::config(format!("{what}: n must be a power of two >= 8")));
    }
    if !(g.dx > 0.0 && g.dx <= MAX_DX * (1.0 + 1e-12)) {
        return Err(Error::config(format!("{what}: dx must lie in (0, {MAX_DX}]")));
    }
    if !(g.left > 0.0 && g.left < 1.0) {
        return Err(Error::config(format!("{what}: left must lie in (0, 1)")));
    }
    Ok(())
}

fn check_times(ts: &[f64], what: &str) -> Result<()> {
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::config(format!("{what}: times must be positive")));
    }
    if ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config(format!("{what}: times must increase")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        Potential::parse(&self.potential).map_err(|e| Error::config(format!("potential: {e}")))?;
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return Err(Error::config("z0 must be positive"));
        }
        check_times(&self.times, "times")?;
        check_times(&self.ist.times, "ist.times")?;
        check_grid(&self.grid, "grid")?;
        check_grid(&self.ist.grid, "ist.grid")?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt must be positive"));
        }
        if let Some(s) = self.startup {
            if !(s.dt > 0.0 && s.until >= 0.0) {
                return Err(Error::config("startup needs dt > 0 and until >= 0"));
            }
        }
        if !(self.window_wavelengths > 0.0) {
            return Err(Error::config("window_wavelengths must be positive"));
        }
        if !(self.reflection.zmax > self.z0 && self.reflection.nz >= 5) {
            return Err(Error::config("reflection grid must cover [-z0, z0] with at least 5 points"));
        }
        if !(self.ist.zmax > 0.0 && self.ist.nz >= 5) {
            return Err(Error::config("ist grid needs zmax > 0 and nz >= 5"));
        }
        let xmax = self.ray_x(*self.times.last().unwrap()).abs();
        if xmax + self.window_half_width() >= -self.grid.x0() {
            return Err(Error::config(format!(
                "ray point x = -{xmax:.1} does not fit in the window of length {:.1}",
                self.grid.length()
            )));
        }
        Ok(())
    }

    /// `x = -80 z0^4 t`.
    pub fn ray_x(&self, t: f64) -> f64 {
        -80.0 * self.z0.powi(4) * t
    }

    pub fn window_half_width(&self) -> f64 {
        0.5 * self.window_wavelengths * std::f64::consts::PI / self.z0
    }

    pub fn fixed_branch(&self) -> Option<BetaBranch> {
        match self.branch {
            BranchChoice::Auto => None,
            BranchChoice::Unnormalized => Some(BetaBranch::Unnormalized),
            BranchChoice::Normalized => Some(BetaBranch::Normalized),
        }
    }

    /// Absorbing layer for the main run: interior from just beyond the
    /// farthest ray point to halfway between the origin and the right end.
    pub fn main_sponge(&self) -> Option<Sponge> {
        let g = &self.grid;
        match &self.sponge {
            SpongeConfig::Off => None,
            SpongeConfig::Manual(s) => Some(*s),
            SpongeConfig::Auto => {
                let lo = -(1.05 * self.ray_x(*self.times.last().unwrap()).abs() + 2.0 * self.window_half_width() + 50.0);
                let ramp = ((lo - g.x0()) / 3.0).min(200.0);
                Some(Sponge { lo, hi: 0.5 * g.x_right(), ramp, strength: 60.0 })
            }
        }
    }

    /// Mode damping for the main run.
    pub fn main_damping(&self) -> Option<ModeDamping> {
        match &self.damping {
            DampingConfig::Off => None,
            DampingConfig::Manual(d) => Some(*d),
            DampingConfig::Auto => {
                let reach = self.main_sponge().map_or(-self.grid.x0(), |s| s.lo.abs());
                let z_inside = (reach / (80.0 * self.times[0])).powf(0.25);
                let k_resonance = (2.0 * PI / self.dt).powf(0.2);
                let k_cut = (2.8 * z_inside).min(0.8 * k_resonance);
                Some(ModeDamping { k_cut, width: 0.1, rate: 50.0 })
            }
        }
    }

    /// Absorbing layer for the spectral-consistency run.
    pub fn ist_sponge(&self) -> Option<Sponge> {
        let g = &self.ist.grid;
        match &self.ist.sponge {
            SpongeConfig::Off => None,
            SpongeConfig::Manual(s) => Some(*s),
            SpongeConfig::Auto => {
                let tmax = *self.ist.times.last().unwrap();
                let lo = -(1.2 * 80.0 * self.ist.zmax.powi(4) * tmax + 100.0).min(-0.8 * g.x0());
                let ramp = ((lo - g.x0()) / 3.0).min(200.0);
                Some(Sponge { lo, hi: 0.3 * g.x_right(), ramp, strength: 60.0 })
            }
        }
    }

    /// SHA-256 of the canonical JSON serialisation.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
