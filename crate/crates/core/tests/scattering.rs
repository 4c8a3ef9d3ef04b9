use mkdv5_core::scattering::{
    evolve_reflection, linspace, scatter, Potential, ReflectionFunction, SampledPotential, ScatteringData,
};
use mkdv5_core::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Closed-form transfer across a constant potential `h` on `[0, w]`:
/// `exp(w [[iz, h], [h, -iz]])`.
fn box_reflection(h: f64, w: f64, z: f64) -> Complex64 {
    let i = Complex64::i();
    let k2 = Complex64::new(h * h - z * z, 0.0);
    let k = k2.sqrt();
    let (c, s) = if k.norm() < 1e-12 { (Complex64::new(1.0, 0.0), Complex64::new(w, 0.0)) } else { ((k * w).cosh(), (k * w).sinh() / k) };
    let m11 = c + s * i * z;
    let m21 = s * h;
    // S = e^{0} Phi^{-1} e^{i w z s3}; a = conj(m11) e^{i w z}, b = -conj(m21) e^{i w z}.
    let e = Complex64::from_polar(1.0, w * z);
    let a = m11.conj() * e;
    let b = -m21.conj() * e;
    -b.conj() / a.conj()
}

#[test]
fn box_matches_closed_form() {
    let zs = [-2.0, -0.7, 0.0, 0.3, 0.99, 1.0, 1.01, 3.0];
    let d = scatter(&Potential::Box { height: 1.0, width: 1.0 }, &zs).unwrap();
    for (z, r) in zs.iter().zip(&d.r) {
        let e = box_reflection(1.0, 1.0, *z);
        assert!((r - e).norm() < 1e-12, "z = {z}: {r} vs {e}");
    }
    assert!((d.r[2].norm() - 1f64.tanh()).abs() < 1e-12);
}

#[test]
fn sech_modulus_matches_closed_form() {
    for amp in [0.3, 0.7, 1.3] {
        let zs = [0.0, 0.4, 1.0, 2.0];
        let d = scatter(&Potential::Sech { amplitude: amp }, &zs).unwrap();
        let sh = (PI * amp).sinh();
        for (z, r) in zs.iter().zip(&d.r) {
            let exact = sh / ((PI * z).cosh().powi(2) + sh * sh).sqrt();
            assert!((r.norm() - exact).abs() < 1e-8, "A = {amp}, z = {z}");
        }
    }
}

#[test]
fn born_limit_orientation() {
    // For small q, r(z) ~ qhat(2z) with qhat(k) = int q e^{-ikx} dx.
    let eps = 1e-6;
    let shift = 0.8;
    let zs = [-1.0, 0.25, 0.9];
    let d = scatter(&Potential::Sampled(sampled(|x| eps * (-(x - shift) * (x - shift)).exp())), &zs).unwrap();
    for (z, r) in zs.iter().zip(&d.r) {
        let k = 2.0 * z;
        let qhat = Complex64::from_polar(eps * PI.sqrt() * (-k * k / 4.0).exp(), -k * shift);
        assert!((r - qhat).norm() < 1e-4 * qhat.norm() + 1e-16, "z = {z}: {r} vs {qhat}");
    }
}

fn sampled<F: Fn(f64) -> f64>(f: F) -> SampledPotential {
    let n = 512;
    let dx = 0.1;
    let x0 = -25.6;
    SampledPotential::new(x0, dx, (0..n).map(|j| f(x0 + dx * j as f64)).collect()).unwrap()
}

#[test]
fn sampled_and_analytic_gaussian_agree() {
    let zs = linspace(-2.0, 2.0, 21);
    let a = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &zs).unwrap();
    let b = scatter(&Potential::Sampled(sampled(|x| 0.3 * (-x * x).exp())), &zs).unwrap();
    for i in 0..zs.len() {
        assert!((a.r[i] - b.r[i]).norm() < 1e-9, "z = {}", zs[i]);
    }
}

#[test]
fn mass_fixes_origin_reflection() {
    // At z = 0 the problem is solved by rotation: |r(0)| = tanh(int q).
    let pot = Potential::Gaussian { amplitude: 0.4, width: 1.3 };
    let d = scatter(&pot, &[0.0]).unwrap();
    assert!((d.r[0].norm() - pot.mass().tanh()).abs() < 1e-12);
}

#[test]
fn csv_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let d = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &linspace(-1.0, 1.0, 11)).unwrap();
    d.write_csv(&path).unwrap();
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("z,re_a,im_a,re_b,im_b,re_r,im_r\n"));
    let back = ScatteringData::read_csv(&path).unwrap();
    assert_eq!(back.z, d.z);
    assert_eq!(back.r, d.r);
}

#[test]
fn csv_potential_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let mut text = String::from("x,q\n");
    for j in 0..256 {
        let x = -12.8 + 0.1 * j as f64;
        text.push_str(&format!("{x},{}\n", 0.3 * (-x * x).exp()));
    }
    std::fs::write(&path, text).unwrap();
    let p = Potential::parse(path.to_str().unwrap()).unwrap();
    let d = scatter(&p, &[0.0]).unwrap();
    assert!((d.r[0].norm() - (0.3 * PI.sqrt()).tanh()).abs() < 1e-10);
}

#[test]
fn rejects_bad_grids() {
    let p = Potential::Gaussian { amplitude: 0.3, width: 1.0 };
    assert!(scatter(&p, &[]).is_err());
    assert!(scatter(&p, &[f64::NAN]).is_err());
}

#[test]
fn evolve_reflection_shift() {
    let d = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &[1.0, 0.5]).unwrap();
    let e = evolve_reflection(&d, 1.0);
    let shift = (e.r[0] / d.r[0]).arg();
    let expect = (-16.0f64).rem_euclid(2.0 * PI);
    assert!((shift.rem_euclid(2.0 * PI) - expect).abs() < 1e-12);
    assert!((e.a[0] - d.a[0]).norm() == 0.0);
}

#[test]
fn reflection_interpolant_reproduces_samples() {
    let zs = linspace(-2.0, 2.0, 201);
    let d = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &zs).unwrap();
    let f = ReflectionFunction::from_data(&d).unwrap();
    let mid = scatter(&Potential::Gaussian { amplitude: 0.3, width: 1.0 }, &[0.123]).unwrap();
    assert!((f.eval(0.123).unwrap() - mid.r[0]).norm() < 1e-7);
    assert!(f.eval(2.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unitarity_and_symmetry(amp in -0.8f64..0.8, width in 0.3f64..2.0, z in 0.0f64..4.0) {
        let d = scatter(&Potential::Gaussian { amplitude: amp, width }, &[-z, z]).unwrap();
        prop_assert!(d.unitarity_defect() < 1e-10);
        prop_assert!((d.r[1] - d.r[0].conj()).norm() < 1e-12);
        prop_assert!(d.r[1].norm() < 1.0);
    }
}
