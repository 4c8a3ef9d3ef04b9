//! Quadrature on real intervals for complex-valued integrands.

use crate::{Complex64, Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss-Legendre over the panels `[b_i, b_{i+1}]`.
pub fn composite<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], order: usize) -> Complex64 {
    let (x, w) = gauss_legendre(order);
    let mut sum = Complex64::new(0.0, 0.0);
    for p in breaks.windows(2) {
        let (a, b) = (p[0], p[1]);
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * h * f(m + h * xi);
        }
    }
    sum
}

/// Panel breaks on `[a, b]` with `uniform` equal panels, each end panel
/// further split geometrically `levels` times by a factor of 4.
pub fn graded_breaks(a: f64, b: f64, uniform: usize, levels: usize) -> Vec<f64> {
    let h = (b - a) / uniform as f64;
    let mut out = vec![a];
    for l in (1..=levels).rev() {
        out.push(a + h * 0.25f64.powi(l as i32));
    }
    for i in 1..uniform {
        out.push(a + h * i as f64);
    }
    for l in 1..=levels {
        out.push(b - h * 0.25f64.powi(l as i32));
    }
    out.push(b);
    out
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(m);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let s = f(m - h * XGK[j]) + f(m + h * XGK[j]);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-14, rel: 1e-13, max_panels: 50_000 }
    }
}

/// Globally adaptive Gauss-Kronrod (7/15) integration over the initial panel
/// breaks `breaks`, bisecting the panel with the largest error estimate.
///
/// Returns the integral and the summed error estimate. Fails if the integrand
/// produces non-finite values or the panel budget runs out before the
/// tolerance is met.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<(Complex64, f64)> {
    if breaks.len() < 2 {
        return Err(Error::input("need at least one quadrature panel"));
    }
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in breaks.windows(2) {
        if p[1] <= p[0] {
            continue;
        }
        let (value, e) = gk15(&f, p[0], p[1]);
        total += value;
        err += e;
        heap.push(Panel { a: p[0], b: p[1], value, err: e });
    }
    loop {
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::numerical("non-finite integrand in quadrature"));
        }
        if err <= tol.abs.max(tol.rel * total.norm()) {
            return Ok((total, err));
        }
        if heap.len() >= tol.max_panels {
            return Err(Error::numerical(format!(
                "quadrature did not converge: error estimate {err:.3e} after {} panels",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point; accept it.
            heap.push(Panel { err: 0.0, ..worst });
            err = heap.iter().map(|p| p.err).sum();
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
        if heap.len() % 256 == 0 {
            // Refresh the running sums to keep cancellation error bounded.
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
}
