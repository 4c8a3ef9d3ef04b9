//! Leading-order long-time behaviour on the ray `x = -80 z0^4 t`.
//!
//! Two evaluations are provided: the closed cosine formula and an assembly
//! from the scalar factor `delta` and the model coefficient `beta12`. They
//! share `nu`, `z0` and the oscillation `-128 t z0^5 + nu log(2560 t z0^5)` but
//! are computed through different intermediate quantities.

use crate::model_rhp::{BetaBranch, ModelRhp};
use crate::phase::stationary_point;
use crate::scalar_rhp::ScalarRhp;
use crate::scattering::{fmt, ReflectionFunction};
use crate::special::log_gamma;
use crate::{Complex64, Error, Result};
use std::f64::consts::PI;
use std::path::Path;

/// One predicted sample.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct AsymptoticPrediction {
    pub x: f64,
    pub t: f64,
    pub z0: f64,
    pub nu: f64,
    pub envelope: f64,
    /// The prediction is `value = -envelope * cos(cos_arg)`.
    pub cos_arg: f64,
    pub value: f64,
    /// `log t / t`, the size of the first correction.
    pub error_scale: f64,
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Pieces shared by both evaluations at fixed `z0`.
#[derive(Debug, Clone)]
pub struct RayData {
    pub rhp: ScalarRhp,
    /// `(1/pi) int f(s)/(s + z0) ds`.
    pub phi_integral: f64,
    /// `phi = 5 pi/4 - arg conj r(-z0) - arg Gamma(-i nu) + phi_integral`, in `(-pi, pi]`.
    pub phi: f64,
}

impl RayData {
    pub fn new(refl: &ReflectionFunction, z0: f64) -> Result<Self> {
        let rhp = ScalarRhp::new(refl.clone(), z0)?;
        let phi_integral = rhp.phi_integral()?;
        let r = rhp.r_minus();
        let phi = if rhp.nu() > 0.0 {
            let arg_gamma = log_gamma(Complex64::new(0.0, -rhp.nu()))?.im;
            wrap_angle(5.0 * PI / 4.0 - r.conj().arg() - arg_gamma + phi_integral)
        } else {
            0.0
        };
        Ok(RayData { rhp, phi_integral, phi })
    }

    pub fn z0(&self) -> f64 {
        self.rhp.z0()
    }

    pub fn nu(&self) -> f64 {
        self.rhp.nu()
    }

    fn check_t(&self, x: f64, t: f64) -> Result<()> {
        let z0 = stationary_point(x, t)?;
        if (z0 - self.z0()).abs() > 1e-9 * self.z0() {
            return Err(Error::input(format!(
                "(x, t) = ({x}, {t}) lies on z0 = {z0}, not {}",
                self.z0()
            )));
        }
        if x > 0.0 {
            return Err(Error::input("the oscillatory region is x < 0"));
        }
        Ok(())
    }

    fn vanishing(&self, x: f64, t: f64) -> AsymptoticPrediction {
        AsymptoticPrediction {
            x,
            t,
            z0: self.z0(),
            nu: 0.0,
            envelope: 0.0,
            cos_arg: 0.0,
            value: 0.0,
            error_scale: t.ln() / t,
        }
    }

    /// `-2 sqrt(nu / (640 t z0^3)) cos(-128 t z0^5 + nu log(2560 t z0^5) + phi)`.
    pub fn closed_form(&self, x: f64, t: f64) -> Result<AsymptoticPrediction> {
        self.check_t(x, t)?;
        let (z0, nu) = (self.z0(), self.nu());
        if nu == 0.0 {
            return Ok(self.vanishing(x, t));
        }
        let envelope = 2.0 * (nu / (640.0 * t * z0.powi(3))).sqrt();
        let cos_arg = -128.0 * t * z0.powi(5) + nu * (2560.0 * t * z0.powi(5)).ln() + self.phi;
        Ok(AsymptoticPrediction {
            x,
            t,
            z0,
            nu,
            envelope,
            cos_arg,
            value: -envelope * cos_arg.cos(),
            error_scale: t.ln() / t,
        })
    }

    /// `delta_A^0 = e^{chi(-z0)} e^{-64 i t z0^5} (2 a z0)^{i nu}`, `a = sqrt(640 t z0^3)`.
    pub fn delta_a0(&self, t: f64) -> Result<Complex64> {
        let z0 = self.z0();
        let a = (640.0 * t * z0.powi(3)).sqrt();
        let chi = self.rhp.chi_at_minus_z0()?;
        let i = Complex64::new(0.0, 1.0);
        Ok((chi - i * 64.0 * t * z0.powi(5) + i * self.nu() * (2.0 * a * z0).ln()).exp())
    }

    /// `(-2/a) * 2 Re[(delta_A^0)^2 (m1)_12]` with `(m1)_12 = -i beta12`.
    pub fn assembled(&self, x: f64, t: f64, branch: BetaBranch) -> Result<AsymptoticPrediction> {
        self.check_t(x, t)?;
        let (z0, nu) = (self.z0(), self.nu());
        if nu == 0.0 {
            return Ok(self.vanishing(x, t));
        }
        let model = ModelRhp::new(nu, self.rhp.r_minus(), branch)?;
        let a = (640.0 * t * z0.powi(3)).sqrt();
        let d = self.delta_a0(t)?;
        let w = d * d * model.m1().0;
        let envelope = 4.0 * w.norm() / a;
        let cos_arg = w.arg();
        Ok(AsymptoticPrediction {
            x,
            t,
            z0,
            nu,
            envelope,
            cos_arg,
            value: -2.0 / a * 2.0 * w.re,
            error_scale: t.ln() / t,
        })
    }
}

/// Closed-form prediction at `(x, t)`, building the ray data on the fly.
pub fn leading_order_closed_form(refl: &ReflectionFunction, x: f64, t: f64) -> Result<AsymptoticPrediction> {
    RayData::new(refl, stationary_point(x, t)?)?.closed_form(x, t)
}

/// Assembled prediction at `(x, t)`, building the ray data on the fly.
pub fn leading_order_assembled(
    refl: &ReflectionFunction,
    x: f64,
    t: f64,
    branch: BetaBranch,
) -> Result<AsymptoticPrediction> {
    RayData::new(refl, stationary_point(x, t)?)?.assembled(x, t, branch)
}

pub fn write_predictions_csv(path: &Path, rows: &[AsymptoticPrediction]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "t", "z0", "nu", "envelope", "cos_arg", "value", "error_scale"])?;
    for p in rows {
        w.write_record(&[
            fmt(p.x),
            fmt(p.t),
            fmt(p.z0),
            fmt(p.nu),
            fmt(p.envelope),
            fmt(p.cos_arg),
            fmt(p.value),
            fmt(p.error_scale),
        ])?;
    }
    w.flush()?;
    Ok(())
}
