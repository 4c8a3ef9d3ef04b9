//! The oscillatory phase `theta(z; z0) = 16 z^5 - 80 z0^4 z` and the lower
//! bound on `Re(i theta)` along the steepest-descent rays through `z0`.

use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

fn check_z0(z0: f64) -> Result<()> {
    if !(z0.is_finite() && z0 > 0.0) {
        return Err(Error::input(format!("z0 must be positive and finite, got {z0}")));
    }
    Ok(())
}

/// Stationary point `z0 = (|x| / (80 t))^(1/4)` of the ray `x = -80 z0^4 t`.
pub fn stationary_point(x: f64, t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0 && x.is_finite()) {
        return Err(Error::input(format!("need t > 0 and finite x, got x={x}, t={t}")));
    }
    Ok((x.abs() / (80.0 * t)).powf(0.25))
}

pub fn theta(z: Complex64, z0: f64) -> Result<Complex64> {
    check_z0(z0)?;
    Ok(16.0 * z.powu(5) - 80.0 * z0.powi(4) * z)
}

pub fn theta_real(z: f64, z0: f64) -> Result<f64> {
    check_z0(z0)?;
    Ok(16.0 * z.powi(5) - 80.0 * z0.powi(4) * z)
}

pub fn theta_prime(z: Complex64, z0: f64) -> Result<Complex64> {
    check_z0(z0)?;
    Ok(80.0 * z.powu(4) - 80.0 * z0.powi(4))
}

/// The two real stationary points `(-z0, z0)`.
pub fn stationary_points(z0: f64) -> Result<(f64, f64)> {
    check_z0(z0)?;
    Ok((-z0, z0))
}

/// Point `z0 + u z0 e^{i(pi - alpha)}` on the upper-left ray leaving `z0`.
pub fn ray_point(z0: f64, u: f64, alpha: f64) -> Complex64 {
    z0 + u * z0 * Complex64::from_polar(1.0, PI - alpha)
}

/// `Re(i theta)` on the ray, from the factored polynomial form
/// `16 z0^5 u^2 (10 sin 2a - 10 u sin 3a + 5 u^2 sin 4a - u^3 sin 5a)`.
pub fn re_i_theta_on_ray(z0: f64, u: f64, alpha: f64) -> Result<f64> {
    check_z0(z0)?;
    let a = alpha;
    let bracket = 10.0 * (2.0 * a).sin() - 10.0 * u * (3.0 * a).sin()
        + 5.0 * u * u * (4.0 * a).sin()
        - u.powi(3) * (5.0 * a).sin();
    Ok(16.0 * z0.powi(5) * u * u * bracket)
}

/// Admissible sector constant
/// `c(a) = 10 sin 2a - 10 sin 3a / cos a + 5 sin 4a / cos^2 a - sin 5a / cos^3 a`.
///
/// Defined for `alpha` in `(0, pi/8]`, where it is positive.
pub fn sector_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= PI / 8.0 + 1e-15) {
        return Err(Error::input(format!("alpha must lie in (0, pi/8], got {alpha}")));
    }
    let c = alpha.cos();
    Ok(10.0 * (2.0 * alpha).sin() - 10.0 * (3.0 * alpha).sin() / c
        + 5.0 * (4.0 * alpha).sin() / (c * c)
        - (5.0 * alpha).sin() / (c * c * c))
}

/// Outcome of sampling the bound `Re(i theta) >= 16 c(alpha) z0^5 u^2` on the
/// ray segment `u in [0, 1/cos(alpha)]`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RayBoundReport {
    pub z0: f64,
    pub alpha: f64,
    pub samples: usize,
    pub violations: usize,
    /// Smallest `Re(i theta) - 16 c z0^5 u^2`, normalised by `16 z0^5 u^2`.
    pub min_margin: f64,
}

/// Samples the ray bound at `samples` points (including both ends). The
/// left-hand side is evaluated from `theta` directly, not from the factored
/// form, so the report is an independent check.
pub fn check_ray_bound(z0: f64, alpha: f64, samples: usize) -> Result<RayBoundReport> {
    check_z0(z0)?;
    let c = sector_constant(alpha)?;
    if samples < 2 {
        return Err(Error::input("need at least two samples"));
    }
    let umax = 1.0 / alpha.cos();
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for i in 0..samples {
        let u = umax * i as f64 / (samples - 1) as f64;
        if u == 0.0 {
            continue;
        }
        let z = ray_point(z0, u, alpha);
        let lhs = (Complex64::i() * theta(z, z0)?).re;
        let scale = 16.0 * z0.powi(5) * u * u;
        let margin = (lhs - c * scale) / scale;
        // Equality holds at the far end; allow rounding there.
        if margin < -1e-9 {
            violations += 1;
        }
        min_margin = min_margin.min(margin);
    }
    Ok(RayBoundReport { z0, alpha, samples, violations, min_margin })
}
