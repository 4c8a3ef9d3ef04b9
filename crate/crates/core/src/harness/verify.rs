//! Fast self-checks of each component, small enough to run from the CLI.

use super::Check;
use crate::asymptotics::RayData;
use crate::evolution::{evolve, linear_evolve, EvolveOptions, Startup, WaveField};
use crate::model_rhp::{wronskian_report, BetaBranch, ModelRhp};
use crate::phase::{check_ray_bound, theta_real};
use crate::scalar_rhp::ScalarRhp;
use crate::scattering::{linspace, scatter, Potential, ReflectionFunction};
use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Phase,
    Scattering,
    Evolution,
    ScalarRhp,
    ModelRhp,
    Asymptotics,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "phase" => Suite::Phase,
            "scattering" => Suite::Scattering,
            "evolution" => Suite::Evolution,
            "scalar_rhp" | "scalar-rhp" => Suite::ScalarRhp,
            "model_rhp" | "model-rhp" => Suite::ModelRhp,
            "asymptotics" => Suite::Asymptotics,
            "all" => Suite::All,
            _ => return Err(Error::config(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn phase_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for z0 in [0.5, 1.0, 2.0] {
        let r = check_ray_bound(z0, PI / 16.0, 1000)?;
        out.push(Check::new(format!("ray bound violations, z0 = {z0}"), r.violations as f64, 0.0));
    }
    let odd = linspace(-3.0, 3.0, 61)
        .iter()
        .map(|&z| Ok((theta_real(z, 0.9)? + theta_real(-z, 0.9)?).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(Check::new("theta odd", odd, 1e-12));
    Ok(out)
}

fn gaussian_reflection(zmax: f64, n: usize) -> Result<ReflectionFunction> {
    let d = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &linspace(-zmax, zmax, n))?;
    ReflectionFunction::from_data(&d)
}

fn scattering_checks() -> Result<Vec<Check>> {
    let zs = linspace(-4.0, 4.0, 401);
    let d = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &zs)?;
    let b = scatter(&Potential::Box { height: 1.0, width: 1.0 }, &[0.0])?;
    let amp = 0.7;
    let s = scatter(&Potential::Sech { amplitude: amp }, &[0.0, 0.5, 1.0])?;
    let sech_err = s
        .z
        .iter()
        .zip(&s.r)
        .map(|(z, r)| {
            let sh = (PI * amp).sinh();
            let exact = sh / ((PI * z).cosh().powi(2) + sh * sh).sqrt();
            (r.norm() - exact).abs()
        })
        .fold(0.0, f64::max);
    Ok(vec![
        Check::new("unitarity |a|^2 - |b|^2 - 1", d.unitarity_defect(), 1e-8),
        Check::new("symmetry r(z) - conj r(-z)", d.symmetry_defect(), 1e-8),
        Check::new("box |r(0)| - tanh 1", (b.r[0].norm() - 1f64.tanh()).abs(), 1e-8),
        Check::new("sech |r| closed form", sech_err, 1e-8),
    ])
}

fn evolution_checks() -> Result<Vec<Check>> {
    let f = WaveField::from_fn(1024, 153.6, |x| 0.3 * (-x * x).exp())?;
    let opts = EvolveOptions { startup: Some(Startup { until: 0.5, dt: 5e-4 }), ..Default::default() };
    let ev = evolve(&f, &[0.5, 1.0], &opts)?;
    let small = WaveField::from_fn(1024, 153.6, |x| 1e-4 * (-x * x).exp())?;
    let ev_small = evolve(&small, &[1.0], &EvolveOptions::default())?;
    let lin = linear_evolve(&small, 1.0);
    let lin_err =
        ev_small.final_field().samples.iter().zip(&lin.samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::new("mass drift", ev.max_mass_drift(), 1e-9),
        Check::new("L2 drift", ev.max_l2_drift(), 1e-6),
        Check::new("small-amplitude limit vs linear flow", lin_err, 1e-10),
    ])
}

fn scalar_rhp_checks() -> Result<Vec<Check>> {
    let rhp = ScalarRhp::new(gaussian_reflection(1.5, 301)?, 0.7)?;
    let eps = 1e-9;
    let mut jump: f64 = 0.0;
    let mut product: f64 = 0.0;
    for s in [-0.5, 0.0, 0.3] {
        let up = rhp.delta(Complex64::new(s, eps))?;
        let down = rhp.delta(Complex64::new(s, -eps))?;
        let r = rhp.reflection().eval(s)?;
        jump = jump.max((up / down - (1.0 - r.norm_sqr())).norm());
        let (p, m) = rhp.delta_boundary(s)?;
        product = product.max(((p * m).norm() - 1.0).abs());
    }
    let us: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
    let lip = rhp.log_lipschitz_check(PI / 4.0, &us)?;
    Ok(vec![
        Check::new("jump delta+/delta- = 1 - |r|^2", jump, 1e-6),
        Check::new("|delta+ delta-| = 1", product, 1e-8),
        Check::new("|w| log|w| bound violations", lip.violations as f64, 0.0),
    ])
}

fn model_rhp_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for nu in [0.1, 0.5, 1.0] {
        let w = wronskian_report(nu, &[1.0, 2.0, 4.0])?;
        out.push(Check::new(format!("Wronskian spread, nu = {nu}"), w.spread, 1e-8));
        out.push(Check::new(format!("Wronskian vs closed form, nu = {nu}"), w.max_error, 1e-6));
        let r = Complex64::from_polar((1.0 - (-2.0 * PI * nu).exp()).sqrt(), 0.4);
        for branch in [BetaBranch::Unnormalized, BetaBranch::Normalized] {
            let m = ModelRhp::new(nu, r, branch)?;
            out.push(Check::new(
                format!("beta12 beta21 + nu, nu = {nu}, {}", branch.name()),
                (m.beta12 * m.beta21 + nu).norm(),
                1e-14,
            ));
        }
    }
    Ok(out)
}

fn asymptotics_checks() -> Result<Vec<Check>> {
    let ray = RayData::new(&gaussian_reflection(1.5, 301)?, 0.7)?;
    let t = 100.0;
    let x = -80.0 * 0.7f64.powi(4) * t;
    let c = ray.closed_form(x, t)?;
    let n = ray.assembled(x, t, BetaBranch::Normalized)?;
    Ok(vec![
        Check::new("|delta_A0| - 1", (ray.delta_a0(t)?.norm() - 1.0).abs(), 1e-12),
        Check::flag("phase constant in (-pi, pi]", ray.phi > -PI && ray.phi <= PI),
        Check::new("normalized/closed envelope ratio - 2", (n.envelope / c.envelope - 2.0).abs(), 1e-10),
    ])
}

pub fn verify(suite: Suite) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Phase {
        checks.extend(phase_checks()?);
    }
    if all || suite == Suite::Scattering {
        checks.extend(scattering_checks()?);
    }
    if all || suite == Suite::Evolution {
        checks.extend(evolution_checks()?);
    }
    if all || suite == Suite::ScalarRhp {
        checks.extend(scalar_rhp_checks()?);
    }
    if all || suite == Suite::ModelRhp {
        checks.extend(model_rhp_checks()?);
    }
    if all || suite == Suite::Asymptotics {
        checks.extend(asymptotics_checks()?);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { suite, checks, passed })
}
