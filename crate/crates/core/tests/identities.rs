//! Closed-form identities tying the circuit simulations to their Chebyshev
//! expressions, plus property tests over the schedule machinery.

use proptest::prelude::*;
use qpdkit_core::chebyshev::{
    chebyshev_t, chebyshev_t_recurrence, make_schedule, quasi_chebyshev, AngleSchedule,
};
use qpdkit_core::linalg::{cabs, C64};
use qpdkit_core::qpd::{ancilla_response, response_closed_form};
use qpdkit_core::rng::SplitMix64;

use std::f64::consts::PI;

#[test]
fn quasi_chebyshev_identity_thousand_samples() {
    let mut rng = SplitMix64::new(0xA11CE);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let gamma = rng.next_range(1e-3, 1.0);
        let depth = 2 * rng.next_below(49) + 1; // odd, <= 97
        let x = rng.next_range(-1.0, 1.0);
        let got = quasi_chebyshev(gamma, depth, x).unwrap();
        let expect = chebyshev_t(depth, x / gamma) / chebyshev_t(depth, 1.0 / gamma);
        let diff = cabs(got - C64::new(expect, 0.0));
        worst = worst.max(diff);
        assert!(diff < 1e-9, "gamma={gamma} L={depth} x={x}: diff {diff}");
    }
    assert!(worst < 1e-9, "worst {worst}");
}

#[test]
fn response_modulus_equals_chebyshev_ratio_on_grid() {
    // 50 gaps x 20 odd depths x 200 phases.
    let mut worst = 0.0f64;
    for li in 0..50 {
        let lambda = 0.05 + (PI - 0.1) * li as f64 / 49.0;
        for k in 0..20 {
            let depth = 2 * k + 3;
            let sched = AngleSchedule::with_depth(lambda, 0.5, depth).unwrap();
            for pk in 0..200 {
                let phi = -PI + 2.0 * PI * (pk as f64 + 1.0) / 200.0;
                let got = cabs(ancilla_response(phi, &sched));
                let expect = response_closed_form(phi, &sched);
                worst = worst.max((got - expect).abs());
            }
        }
    }
    assert!(worst < 1e-9, "worst deviation {worst}");
}

#[test]
fn one_sided_error_exact_at_zero() {
    let mut rng = SplitMix64::new(7);
    for _ in 0..300 {
        let lambda = rng.next_range(0.02, 3.1);
        let delta = rng.next_range(0.005, 0.95);
        let sched = make_schedule(lambda, delta, 2).unwrap();
        let m = cabs(ancilla_response(0.0, &sched));
        assert!(
            (1.0 - m).abs() < 1e-12,
            "lambda={lambda} delta={delta}: {m}"
        );
    }
}

proptest! {
    #[test]
    fn chebyshev_branches_agree_with_recurrence(degree in 0usize..=200, x in -10.0f64..10.0) {
        let a = chebyshev_t(degree, x);
        let b = chebyshev_t_recurrence(degree, x);
        let scale = 1.0f64.max(b.abs());
        prop_assert!((a - b).abs() / scale < 1e-10);
    }

    #[test]
    fn schedule_angles_are_antisymmetric(
        lambda in 0.01f64..3.13,
        delta in 0.01f64..0.99,
    ) {
        let sched = make_schedule(lambda, delta, 2).unwrap();
        let l = sched.depth;
        prop_assert_eq!(sched.thetas[0], 0.0);
        for n in 1..l {
            prop_assert!((sched.thetas[l - n] + sched.thetas[n]).abs() <= 1e-12);
        }
        // Sizing bound itself.
        prop_assert!(l as f64 >= (2.0 / delta).ln() / (lambda / 2.0));
        prop_assert_eq!(l % 2, 1);
    }

    #[test]
    fn quasi_chebyshev_identity_prop(
        gamma in 0.05f64..1.0,
        half in 0usize..49,
        x in -1.0f64..1.0,
    ) {
        let depth = 2 * half + 1;
        let got = quasi_chebyshev(gamma, depth, x).unwrap();
        let expect = chebyshev_t(depth, x / gamma) / chebyshev_t(depth, 1.0 / gamma);
        prop_assert!(cabs(got - C64::new(expect, 0.0)) < 1e-9);
    }
}
