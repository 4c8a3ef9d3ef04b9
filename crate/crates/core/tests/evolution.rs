use mkdv5_core::evolution::{
    check_resolution, evolve, linear_evolve, nonlinear_rhs, step, EvolveOptions, Sponge, Startup, WaveField,
};

/// Explicit-form nonlinear terms for `q = A exp(-x^2)` from exact derivatives.
fn explicit_rhs(a: f64, x: f64) -> f64 {
    let g = (-x * x).exp();
    let q = a * g;
    let qx = a * g * (-2.0 * x);
    let qxx = a * g * (4.0 * x * x - 2.0);
    let qxxx = a * g * (-8.0 * x.powi(3) + 12.0 * x);
    30.0 * q.powi(4) * qx - 10.0 * q * q * qxxx - 40.0 * q * qx * qxx - 10.0 * qx.powi(3)
}

#[test]
fn flux_form_matches_explicit_form() {
    let a = 0.7;
    let f = WaveField::from_fn(512, 76.8, |x| a * (-x * x).exp()).unwrap();
    let rhs = nonlinear_rhs(&f);
    let scale = (0..f.len()).map(|j| explicit_rhs(a, f.x(j)).abs()).fold(0.0, f64::max);
    for (j, v) in rhs.iter().enumerate() {
        let e = explicit_rhs(a, f.x(j));
        assert!((v - e).abs() < 1e-10 * scale, "x = {}: {v} vs {e}", f.x(j));
    }
}

#[test]
fn linear_flow_is_exact_in_fourier_space() {
    let f = WaveField::from_fn(256, 38.4, |x| (-x * x).exp()).unwrap();
    let g = linear_evolve(&linear_evolve(&f, 0.3), -0.3);
    for (a, b) in f.samples.iter().zip(&g.samples) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn small_amplitude_follows_linear_flow() {
    let f = WaveField::from_fn(2048, 307.2, |x| 1e-4 * (-x * x).exp()).unwrap();
    let ev = evolve(&f, &[10.0], &EvolveOptions::default()).unwrap();
    let lin = linear_evolve(&f, 10.0);
    let err = ev.final_field().samples.iter().zip(&lin.samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "err = {err:e}");
}

#[test]
fn mass_is_conserved_to_rounding() {
    let f = WaveField::from_fn(1024, 153.6, |x| 0.3 * (-x * x).exp()).unwrap();
    let ev = evolve(&f, &[0.5, 1.0, 2.0], &EvolveOptions::default()).unwrap();
    assert!(ev.max_mass_drift() < 1e-12);
    assert_eq!(ev.checkpoints.len(), 3);
    assert!((ev.final_field().time - 2.0).abs() < 1e-15);
}

#[test]
fn startup_refinement_reduces_l2_drift() {
    let f = WaveField::from_fn(1024, 153.6, |x| 0.3 * (-x * x).exp()).unwrap();
    let plain = evolve(&f, &[2.0], &EvolveOptions::default()).unwrap();
    let fine = evolve(
        &f,
        &[2.0],
        &EvolveOptions { startup: Some(Startup { until: 1.0, dt: 5e-4 }), ..Default::default() },
    )
    .unwrap();
    assert!(fine.max_l2_drift() < plain.max_l2_drift());
    assert!(fine.max_l2_drift() < 1e-6);
}

#[test]
fn fourth_order_on_smooth_data() {
    let f = WaveField::from_fn(1024, 153.6, |x| 0.3 * (-(x / 4.0).powi(2)).exp()).unwrap();
    let run = |dt: f64| evolve(&f, &[1.0], &EvolveOptions { dt, ..Default::default() }).unwrap();
    // Coarser steps are still pre-asymptotic: the ratio climbs 6.6, 7.8, 9.5, 15.8.
    let reference = run(0.0025 / 8.0);
    let err = |dt: f64| {
        let r = run(dt);
        r.final_field().samples.iter().zip(&reference.final_field().samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let ratio = err(0.005) / err(0.0025);
    assert!((ratio - 16.0).abs() <= 3.0, "ratio = {ratio}");
}

#[test]
fn single_step_matches_evolve() {
    let f = WaveField::from_fn(256, 38.4, |x| 0.2 * (-x * x).exp()).unwrap();
    let a = step(&f, 0.01).unwrap();
    let b = evolve(&f, &[0.01], &EvolveOptions { dt: 0.01, ..Default::default() }).unwrap();
    assert_eq!(&a, b.final_field());
}

#[test]
fn blow_up_is_reported() {
    // An absurd time step on a large-amplitude field must fail cleanly.
    let f = WaveField::from_fn(256, 38.4, |x| 3.0 * (-x * x).exp()).unwrap();
    let err = evolve(&f, &[50.0], &EvolveOptions { dt: 0.5, ..Default::default() }).unwrap_err();
    assert!(err.to_string().contains("blew up"), "{err}");
}

#[test]
fn wrap_guard_trips_on_wide_field() {
    let f = WaveField::from_fn(256, 38.4, |x| 0.3 * (-(x / 6.0).powi(2)).exp()).unwrap();
    let opts = EvolveOptions { wrap_guard: Some(1e-8), ..Default::default() };
    assert!(evolve(&f, &[0.1], &opts).is_err());
}

#[test]
fn sponge_absorbs_outgoing_waves() {
    let f = WaveField::from_fn(4096, 614.4, |x| 0.3 * (-x * x).exp()).unwrap();
    let sponge = Sponge { lo: -200.0, hi: 100.0, ramp: 40.0, strength: 20.0 };
    // Small step: at dt = 5e-3 the time-step resonance leaves a 5e-5 floor.
    let opts = EvolveOptions { dt: 1e-3, ..Default::default() };
    let damped = evolve(&f, &[5.0], &EvolveOptions { sponge: Some(sponge), ..opts.clone() }).unwrap();
    let free = evolve(&f, &[5.0], &opts).unwrap();
    assert!(damped.final_field().edge_max(0.05) < 1e-3 * free.final_field().edge_max(0.05));
    assert!(damped.final_field().l2() < free.final_field().l2());
}

#[test]
fn rejects_bad_input() {
    let f = WaveField::from_fn(64, 9.6, |x| (-x * x).exp()).unwrap();
    assert!(evolve(&f, &[1.0], &EvolveOptions { dt: -1.0, ..Default::default() }).is_err());
    assert!(evolve(&f, &[0.0], &EvolveOptions::default()).is_err());
    assert!(evolve(&f, &[], &EvolveOptions::default()).is_err());
    let coarse = WaveField::from_fn(64, 64.0, |x| (-x * x).exp()).unwrap();
    assert!(check_resolution(&coarse).is_err());
    assert!(check_resolution(&f).is_ok());
}

#[test]
fn field_csv_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let f = WaveField::from_fn(64, 9.6, |x| (-x * x).exp()).unwrap();
    f.write_csv(&path).unwrap();
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("x,q\n"));
    let g = WaveField::read_csv(&path, 0.0).unwrap();
    assert_eq!(g.len(), 64);
    assert!((g.length - f.length).abs() < 1e-12);
    for (a, b) in f.samples.iter().zip(&g.samples) {
        assert!((a - b).abs() < 1e-15);
    }
}
