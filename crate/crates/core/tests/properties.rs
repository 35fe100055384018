use std::f64::consts::PI;

use bounce_core::closed_form::{
    amplitudes, dressed_coefficients, site_coefficients, truncated_amplitudes,
    truncation_error_bound,
};
use bounce_core::observables::{observables_at, spin_exchange};
use bounce_core::oracle::{build_matching_system, dressed_series, solve_amplitudes_numeric};
use bounce_core::optimizer::{optimal_concurrence, unit_region_lower};
use bounce_core::{DimensionlessPoint, ModelKind, PhysicalPoint};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn omega() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 0.0..50.0f64, (-3.0..1.3f64).prop_map(|e| 10f64.powf(e))]
}

fn model() -> impl Strategy<Value = ModelKind> {
    prop_oneof![Just(ModelKind::SpinExchange), Just(ModelKind::HeisenbergContact)]
}

fn point() -> impl Strategy<Value = DimensionlessPoint> {
    (omega(), omega(), 0.0..PI, model())
        .prop_map(|(a, b, phase, m)| DimensionlessPoint::new(a, b, phase, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn closed_form_flux_is_unitary(pt in point()) {
        prop_assert!((amplitudes(&pt).flux() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form(pt in point()) {
        let numeric = solve_amplitudes_numeric(&pt).unwrap();
        let exact = amplitudes(&pt);
        prop_assert!(numeric.max_deviation(&exact) < 1e-10, "{}", pt);
        prop_assert!((numeric.flux() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_wave_functions_are_continuous(pt in point()) {
        let sol = build_matching_system(&pt).solve().unwrap();
        prop_assert!(sol.continuity_defect() < 1e-10);
    }

    #[test]
    fn site_coefficients_are_unitary(o in omega(), m in model()) {
        let s = site_coefficients(o, m).unwrap();
        prop_assert!((s.opposite_spin_flux() - 1.0).abs() < 1e-12);
        prop_assert!((s.same_spin_flux() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn observables_shift_by_pi(pt in point(), nu in -5i32..6) {
        let shifted = pt.with_phase(pt.phase() + nu as f64 * PI).unwrap();
        let (o1, o2) = (observables_at(&pt), observables_at(&shifted));
        for (s1, s2) in [(o1.transmitted, o2.transmitted), (o1.reflected, o2.reflected)] {
            prop_assert!((s1.probability - s2.probability).abs() < 1e-12);
            prop_assert!((s1.concurrence - s2.concurrence).abs() < 1e-12);
            prop_assert_eq!(s1.undefined, s2.undefined);
        }
    }

    #[test]
    fn amplitude_moduli_shift_by_pi(pt in point(), nu in -5i32..6) {
        // Transmitted amplitudes carry one extra e^{iφ}, so a shift by νπ
        // multiplies them by (−1)^ν and leaves the reflected ones alone.
        let shifted = pt.with_phase(pt.phase() + nu as f64 * PI).unwrap();
        let (a1, a2) = (amplitudes(&pt).to_array(), amplitudes(&shifted).to_array());
        let sign = if nu % 2 == 0 { 1.0 } else { -1.0 };
        for (i, (z1, z2)) in a1.iter().zip(a2.iter()).enumerate() {
            let expected = if i % 2 == 0 { z1 * sign } else { *z1 };
            prop_assert!((expected - z2).norm() < 1e-12, "component {}", i);
        }
    }

    #[test]
    fn probabilities_close(pt in point()) {
        let amps = amplitudes(&pt);
        let obs = observables_at(&pt);
        let closure = amps.t_noflip.norm_sqr() + amps.r_noflip.norm_sqr()
            + obs.transmitted.probability + obs.reflected.probability;
        prop_assert!((closure - 1.0).abs() < 1e-12);
        prop_assert!(obs.transmitted.concurrence <= 1.0 && obs.reflected.concurrence <= 1.0);
    }

    #[test]
    fn unit_round_trip(g_a in 0.0..30.0f64, g_b in 0.0..30.0f64, k in 1e-3..100.0f64, d in 0.1..4.0f64) {
        let phys = PhysicalPoint { g_a, g_b, k, d };
        let pt = phys.to_dimensionless(ModelKind::SpinExchange).unwrap();
        let back = PhysicalPoint::from_dimensionless(&pt, d).unwrap();
        let rel = |x: f64, y: f64| if x == 0.0 { y.abs() } else { ((x - y) / x).abs() };
        prop_assert!(rel(k, back.k) <= 1e-15);
        prop_assert!(rel(g_a, back.g_a) <= 1e-15);
        prop_assert!(rel(g_b, back.g_b) <= 1e-15);
    }

    #[test]
    fn concurrence_invariant_under_rescaling(pt in point(), scale in 0.1..10.0f64, arg in -PI..PI) {
        use bounce_core::observables::{concurrence_and_ratio, post_selected_state};
        use bounce_core::Side;
        let amps = amplitudes(&pt);
        let state = post_selected_state(&amps, Side::Reflected);
        let factor = num_complex::Complex64::from_polar(scale, arg);
        let (c1, c2) = (concurrence_and_ratio(&state), concurrence_and_ratio(&state.scaled(factor)));
        prop_assert!((c1.concurrence - c2.concurrence).abs() < 1e-12);
    }
}

fn spin_exchange_sample(rng: &mut ChaCha8Rng) -> DimensionlessPoint {
    DimensionlessPoint::new(
        rng.gen_range(0.0..50.0),
        rng.gen_range(0.0..50.0),
        rng.gen_range(0.0..PI),
        ModelKind::SpinExchange,
    )
    .unwrap()
}

#[test]
fn flux_unitarity_on_ten_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for model in ModelKind::ALL {
        for _ in 0..10_000 {
            let pt = spin_exchange_sample(&mut rng).with_model(model);
            let flux = amplitudes(&pt).flux();
            assert!((flux - 1.0).abs() < 1e-12, "{pt}: {flux}");
        }
    }
}

#[test]
fn spin_exchange_flip_moduli_match_across_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..2_000 {
        let amps = amplitudes(&spin_exchange_sample(&mut rng));
        assert!((amps.t_flipb.norm() - amps.r_flipb.norm()).abs() <= 1e-15);
        assert!((amps.t_flipa.norm() - amps.r_flipa.norm()).abs() <= 1e-15);
    }
}

#[test]
fn scalar_formulas_match_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let pt = spin_exchange_sample(&mut rng);
        let obs = observables_at(&pt);
        let s = pt.sin2_phase();
        let (a, b) = (pt.omega_a(), pt.omega_b());
        let p = spin_exchange::probability(a, b, s);
        let c = spin_exchange::concurrence(a, b, s);
        assert!((obs.transmitted.probability - p).abs() < 1e-12, "{pt}");
        assert!((obs.reflected.probability - p).abs() < 1e-12, "{pt}");
        assert!((obs.transmitted.concurrence - c).abs() < 1e-12, "{pt}");
        assert!(p <= 0.5);
        let ratio = spin_exchange::ratio(a, b, s);
        assert!((obs.transmitted.ratio - ratio).abs() <= 1e-12 * ratio.max(1.0), "{pt}");
    }
}

#[test]
fn probability_grows_with_sin2() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1_000 {
        let (a, b) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
        let mut last = spin_exchange::probability(a, b, 0.0);
        for i in 1..=100 {
            let p = spin_exchange::probability(a, b, i as f64 / 100.0);
            assert!(p >= last - 1e-15, "({a}, {b}) at s = {}", i as f64 / 100.0);
            last = p;
        }
    }
}

#[test]
fn ratio_stays_within_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2_000 {
        let (a, b) = (rng.gen_range(0.01..10.0), rng.gen_range(0.01..10.0));
        let phase = rng.gen_range(0.0..PI);
        let pt = DimensionlessPoint::new(a, b, phase, ModelKind::SpinExchange).unwrap();
        let ratio = observables_at(&pt).transmitted.ratio;
        let lo = a / b;
        let hi = lo * (1.0 + 2.0 * b * b);
        assert!(ratio >= lo * (1.0 - 1e-12) && ratio <= hi * (1.0 + 1e-12));
    }
}

#[test]
fn regime_rules_agree_on_shared_edges() {
    for b in [0.2, 0.7, 1.0, 3.0, 9.0] {
        for a in [unit_region_lower(b), b] {
            let report = optimal_concurrence(a, b).unwrap();
            // Left rule: resonance; right rule: node.
            let rule_phase = if a == b { 0.0 } else { 1.0 };
            assert!((report.concurrence - spin_exchange::concurrence(a, b, rule_phase)).abs() < 1e-12);
            assert!((report.probability - spin_exchange::probability(a, b, rule_phase)).abs() < 1e-12);
        }
    }
}

#[test]
fn optimal_concurrence_beats_dense_phase_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0));
        let best = optimal_concurrence(a, b).unwrap().concurrence;
        let scanned = (0..10_000)
            .map(|i| spin_exchange::concurrence(a, b, i as f64 / 9_999.0))
            .fold(0.0, f64::max);
        assert!(scanned <= best + 1e-10, "({a}, {b}): {scanned} > {best}");
    }
}

#[test]
fn truncation_error_obeys_geometric_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let pt = DimensionlessPoint::new(
            rng.gen_range(0.0..5.0),
            rng.gen_range(0.0..5.0),
            rng.gen_range(0.0..PI),
            ModelKind::SpinExchange,
        )
        .unwrap();
        let exact = amplitudes(&pt).to_array();
        for n in 0..=20 {
            let approx = truncated_amplitudes(&pt, n).unwrap().amplitudes.to_array();
            let bound = truncation_error_bound(&pt, n).unwrap();
            for i in 0..6 {
                let err = (exact[i] - approx[i]).norm();
                assert!(err <= bound[i] + 1e-14, "{pt} n={n} field {i}: {err} > {}", bound[i]);
            }
        }
    }
}

#[test]
fn dressed_coefficients_match_loop_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let pt = DimensionlessPoint::new(
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..PI),
            ModelKind::HeisenbergContact,
        )
        .unwrap();
        let d = dressed_coefficients(&pt).unwrap();
        let terms = bounce_core::oracle::dressed_series_terms(&pt, 1e-14).unwrap();
        let s = dressed_series(&pt, terms).unwrap();
        let closed = [d.t_a, d.r_a, d.t_b, d.r_b, d.sigma_a, d.sigma_b];
        for (x, y) in closed.iter().zip(s.iter()) {
            assert!((x - y).norm() < 1e-12, "{pt}");
        }
    }
}

#[test]
fn dressed_coefficients_fifty_terms_at_quarter_phase() {
    let pt = DimensionlessPoint::new(1.0, 1.0, PI / 4.0, ModelKind::HeisenbergContact).unwrap();
    let d = dressed_coefficients(&pt).unwrap();
    let s = dressed_series(&pt, 50).unwrap();
    assert!((d.sigma_a - s[4]).norm() < 1e-12);
    assert!((d.t_b - s[2]).norm() < 1e-12);
}
