use mkdv5_core::harness::{BranchChoice, ConventionChoice, ExperimentConfig, SpongeConfig};

#[test]
fn defaults_are_valid() {
    let c = ExperimentConfig::default();
    c.validate().unwrap();
    assert_eq!(c.grid.n, 1 << 16);
    assert_eq!(c.times, vec![25.0, 50.0, 100.0, 200.0]);
    assert_eq!(c.z0, 0.7);
    assert_eq!(c.dt, 5e-3);
    assert_eq!(c.wrap_guard, Some(1e-8));
    assert_eq!(c.branch, BranchChoice::Auto);
    assert_eq!(c.convention, ConventionChoice::Auto);
}

#[test]
fn main_window_fits_the_schedule() {
    let c = ExperimentConfig::default();
    let xmax = c.ray_x(200.0).abs();
    assert!((xmax - 80.0 * 0.7f64.powi(4) * 200.0).abs() < 1e-9);
    // Length at least twice the largest |x| plus a quarter for spreading.
    assert!(c.grid.length() >= 2.0 * xmax * 1.25);
    let s = c.main_sponge().unwrap();
    assert!(s.lo < -(xmax + c.window_half_width()));
    assert!(s.lo > c.grid.x0() && s.hi < c.grid.x_right());
}

#[test]
fn partial_json_fills_defaults() {
    let c: ExperimentConfig = serde_json::from_str(r#"{"z0": 0.6, "sponge": "off"}"#).unwrap();
    assert_eq!(c.z0, 0.6);
    assert_eq!(c.sponge, SpongeConfig::Off);
    assert!(c.main_sponge().is_none());
    assert_eq!(c.grid, ExperimentConfig::default().grid);
}

#[test]
fn invalid_values_are_config_errors() {
    for text in [
        r#"{"times": [50, 25]}"#,
        r#"{"times": []}"#,
        r#"{"grid": {"n": 1000}}"#,
        r#"{"grid": {"dx": 0.5}}"#,
        r#"{"grid": {"left": 1.0}}"#,
        r#"{"z0": -1}"#,
        r#"{"z0": 1.2, "times": [200]}"#,
        r#"{"potential": "nothing"}"#,
    ] {
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        let err = c.validate().unwrap_err();
        assert!(matches!(err, mkdv5_core::Error::Config(_)), "{text}: {err}");
    }
    assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
}

#[test]
fn hash_tracks_content() {
    let a = ExperimentConfig::default();
    let mut b = a.clone();
    assert_eq!(a.hash(), b.hash());
    b.z0 = 0.71;
    assert_ne!(a.hash(), b.hash());
}

#[test]
fn growth_of_scaled_errors() {
    use mkdv5_core::harness::{decays_within_factor_two, max_growth};
    assert_eq!(max_growth(&[4.0, 1.0, 3.0]), 3.0);
    assert!(decays_within_factor_two(&[4.0, 1.0, 2.0]));
    assert!(!decays_within_factor_two(&[1.0, 0.5, 2.5]));
    assert!(max_growth(&[1.0, f64::NAN]).is_infinite());
}
