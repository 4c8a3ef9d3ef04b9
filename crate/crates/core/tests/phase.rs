use mkdv5_core::phase::{check_ray_bound, ray_point, re_i_theta_on_ray, sector_constant, theta, theta_real};
use mkdv5_core::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #[test]
    fn theta_is_odd(z in -5.0f64..5.0, z0 in 0.05f64..3.0) {
        let a = theta_real(z, z0).unwrap();
        let b = theta_real(-z, z0).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn ray_formula_matches_direct_evaluation(z0 in 0.1f64..3.0, u in 0.0f64..1.5, alpha in 0.01f64..1.5) {
        let z = ray_point(z0, u, alpha);
        let direct = (Complex64::i() * theta(z, z0).unwrap()).re;
        let formula = re_i_theta_on_ray(z0, u, alpha).unwrap();
        prop_assert!((direct - formula).abs() <= 1e-10 * (1.0 + direct.abs()));
    }

    #[test]
    fn bound_holds_in_admissible_sector(z0 in 0.2f64..3.0, alpha in 0.02f64..(PI / 8.0)) {
        let r = check_ray_bound(z0, alpha, 200).unwrap();
        prop_assert_eq!(r.violations, 0);
    }
}

#[test]
fn bound_at_reference_angle() {
    for z0 in [0.5, 1.0, 2.0] {
        let r = check_ray_bound(z0, PI / 16.0, 1000).unwrap();
        assert_eq!(r.violations, 0, "z0 = {z0}");
        assert!(r.min_margin > -1e-9);
    }
}

#[test]
fn sector_constant_is_positive_and_linear_near_zero() {
    let mut a = 1e-3;
    while a <= PI / 8.0 {
        assert!(sector_constant(a).unwrap() > 0.0);
        a += 1e-3;
    }
    let c = sector_constant(1e-6).unwrap() / 1e-6;
    assert!((c - 5.0).abs() < 1e-4);
}

#[test]
fn stationary_points_are_critical() {
    let z0 = 1.3;
    let h = 1e-5;
    for s in [-z0, z0] {
        let d = (theta_real(s + h, z0).unwrap() - theta_real(s - h, z0).unwrap()) / (2.0 * h);
        assert!(d.abs() < 1e-6);
    }
}
