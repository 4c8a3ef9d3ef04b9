//! Complex log-gamma (Lanczos, g = 7) and the Pochhammer symbol.

use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_log_gamma(z: Complex64) -> Complex64 {
    // log Gamma(z) for Re z >= 1/2, written as log Gamma(w + 1) with w = z - 1.
    let w = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, &p) in LANCZOS.iter().enumerate().skip(1) {
        a += p / (w + k as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (w + 0.5) * t.ln() - t + a.ln()
}

/// Principal branch of `log Gamma(z)`: continuous on the plane cut along the
/// non-positive real axis and real for `z > 0`.
///
/// Arguments with `Re z < 1/2` are shifted upward by recurrence, which keeps
/// the result on the principal branch without tracking multiples of `2 pi i`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::input(format!("log_gamma argument not finite: {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::input(format!("log_gamma pole at {}", z.re)));
    }
    if z.re >= 0.5 {
        return Ok(lanczos_log_gamma(z));
    }
    let n = (0.5 - z.re).ceil() as usize;
    if n > 100_000 {
        return Err(Error::input(format!("log_gamma argument too far left: {z}")));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    Ok(lanczos_log_gamma(z + n as f64) - shift)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// `1 / Gamma(z)`, entire: zero at the non-positive integers.
pub fn recip_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((-log_gamma(z)?).exp())
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}
