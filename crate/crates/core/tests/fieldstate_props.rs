use ait_core::amplitudes::{amplitude_pair, AmplitudePair, Tails, Window};
use ait_core::fieldstate::{ait_ratio, find_ait_gap, transition_probability, FieldState};
use ait_core::worldline::{build_phase_function, PhaseFunction, WorldlineSpec};
use ait_core::{Complex64, Error};
use proptest::prelude::*;

fn fig1() -> (PhaseFunction, Window) {
    let spec = WorldlineSpec::PhaseSlope {
        v0: 1.041,
        v1: 1.070,
        v2: 0.4576,
        t1: 9.74350,
        t2: 1305.413,
    };
    let pf = build_phase_function(&spec, 1.0).unwrap();
    (pf, Window::padded(&spec, 0.1, Tails::Adiabatic).unwrap())
}

fn pair(im: Complex64, ip: Complex64) -> AmplitudePair {
    AmplitudePair {
        i_minus: im,
        i_plus: ip,
        omega: 0.3,
        k: 1.0,
        window: Window::sharp(0.0, 1.0).unwrap(),
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(r, i)| Complex64::new(r, i))
}

proptest! {
    #[test]
    fn probability_grows_with_occupation(im in complex(), ip in complex(), n in 0u64..1000,
                                         lambda in 1e-4f64..1.0) {
        let ap = pair(im, ip);
        let p = transition_probability(&ap, &FieldState::Fock { n }, 1.0, lambda);
        let q = transition_probability(&ap, &FieldState::Fock { n: n + 1 }, 1.0, lambda);
        prop_assert!(q.total >= p.total);
        prop_assert!(q.abs_term >= p.abs_term && q.unruh_term >= p.unruh_term);
    }

    #[test]
    fn thermal_ratio_falls_with_beta(im in complex(), ip in complex(), beta in 0.01f64..10.0,
                                     omega in 0.01f64..3.0) {
        prop_assume!(ip.norm() > 1e-3);
        let ap = pair(im, ip);
        let hot = ait_ratio(&ap, &FieldState::Thermal { beta }, omega).unwrap();
        let cold = ait_ratio(&ap, &FieldState::Thermal { beta: 2.0 * beta }, omega).unwrap();
        prop_assert!(cold <= hot);
    }

    #[test]
    fn ratio_matches_term_quotient_for_any_coupling(im in complex(), ip in complex(),
                                                    beta in 0.01f64..10.0, lambda in 1e-6f64..10.0) {
        prop_assume!(ip.norm() > 1e-3);
        let s = FieldState::Thermal { beta };
        let ap = pair(im, ip);
        let p = transition_probability(&ap, &s, 1.0, lambda);
        let r = ait_ratio(&ap, &s, 1.0).unwrap();
        prop_assert!((p.abs_term / p.unruh_term - r).abs() <= 1e-12 * r.max(1e-300));
    }

    #[test]
    fn ratio_ignores_common_phase(im in complex(), ip in complex(), c in -3.2f64..3.2) {
        prop_assume!(ip.norm() > 1e-3);
        let s = FieldState::Fock { n: 4 };
        let rot = Complex64::from_polar(1.0, c);
        let a = ait_ratio(&pair(im, ip), &s, 1.0).unwrap();
        let b = ait_ratio(&pair(im * rot, ip * rot.conj()), &s, 1.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn thermal_weight_identity(beta in 1e-3f64..50.0, omega in 1e-3f64..5.0) {
        let s = FieldState::Thermal { beta };
        let n = s.mean_occupation(omega);
        let w = s.absorption_weight(omega);
        prop_assert!((w - n / (n + 1.0)).abs() <= 1e-15 * w.max(f64::MIN_POSITIVE) + 1e-300);
    }

    #[test]
    fn fock_and_matched_thermal_agree(im in complex(), ip in complex(), n in 1u64..50,
                                      omega in 0.01f64..3.0) {
        let beta = (1.0 + 1.0 / n as f64).ln() / omega;
        let ap = pair(im, ip);
        let f = transition_probability(&ap, &FieldState::Fock { n }, omega, 0.1);
        let t = transition_probability(&ap, &FieldState::Thermal { beta }, omega, 0.1);
        prop_assert!((f.total - t.total).abs() <= 1e-12 * f.total.max(1e-300));
    }
}

#[test]
fn gap_search_is_deterministic_and_refines() {
    let (pf, w) = fig1();
    let s = FieldState::Thermal { beta: 0.1 };
    let a = find_ait_gap(&pf, &s, (0.004, 0.012), 64, &w).unwrap();
    let b = find_ait_gap(&pf, &s, (0.004, 0.012), 64, &w).unwrap();
    assert_eq!(a, b);
    let grid_min = a
        .scan_table
        .iter()
        .map(|p| p.i_minus_sq / p.i_plus_sq)
        .fold(f64::INFINITY, f64::min);
    assert!(a.amplitude_ratio_at_gap <= grid_min);
    let ap = amplitude_pair(&pf, a.gap, &w).unwrap();
    assert!((ap.amplitude_ratio() - a.amplitude_ratio_at_gap).abs() <= 1e-12 * grid_min);
}

#[test]
fn gap_location_does_not_depend_on_field_state() {
    let (pf, w) = fig1();
    let thermal = find_ait_gap(&pf, &FieldState::Thermal { beta: 0.3 }, (0.004, 0.012), 64, &w).unwrap();
    let fock = find_ait_gap(&pf, &FieldState::Fock { n: 2 }, (0.004, 0.012), 64, &w).unwrap();
    assert_eq!(thermal.gap, fock.gap);
}

#[test]
fn inertial_worldline_has_no_dip() {
    let spec = WorldlineSpec::PhaseSlope {
        v0: 1.0,
        v1: 1.0,
        v2: 1.0,
        t1: 10.0,
        t2: 100.0,
    };
    let pf = build_phase_function(&spec, 1.0).unwrap();
    let w = Window::sharp(-10.0, 110.0).unwrap();
    let r = find_ait_gap(&pf, &FieldState::Thermal { beta: 0.1 }, (0.01, 0.5), 32, &w);
    assert!(matches!(r, Err(Error::NoDip(_))));
}

#[test]
fn dip_on_scan_edge_is_reported() {
    let (pf, w) = fig1();
    // the dip lies well inside (0.004, 0.012); a range ending before it has its minimum on the edge
    let r = find_ait_gap(&pf, &FieldState::Vacuum, (0.0072, 0.0074), 16, &w);
    assert!(matches!(r, Err(Error::NoDip(_))), "{r:?}");
}

#[test]
fn bad_scan_inputs_are_rejected() {
    let (pf, w) = fig1();
    let s = FieldState::Vacuum;
    assert!(matches!(
        find_ait_gap(&pf, &s, (0.0, 0.1), 64, &w),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        find_ait_gap(&pf, &s, (0.1, 0.01), 64, &w),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        find_ait_gap(&pf, &s, (0.01, 0.1), 8, &w),
        Err(Error::InvalidInput(_))
    ));
    let bad = FieldState::Thermal { beta: -1.0 };
    assert!(find_ait_gap(&pf, &bad, (0.004, 0.012), 64, &w).is_err());
}
