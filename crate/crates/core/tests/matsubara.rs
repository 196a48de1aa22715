use fluctuforce::forces;
use fluctuforce::matsubara::{
    finite_difference_force, force_sum_exact, free_energy_difference, per_parameter_sums_drude, SumSpec,
};
use fluctuforce::{OscillatorParams, Sensitivity};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn tail_beats_plain_truncation() {
    let p = OscillatorParams::ohmic(2.0, 0.7, 0.05).unwrap();
    let s = Sensitivity::omega_only(1.0);
    let exact = forces::force_ohmic_exact(&p, &s).unwrap().value;
    for n in [100, 1_000, 10_000] {
        let with = force_sum_exact(&p, &s, &SumSpec::new(n)).unwrap();
        let without = force_sum_exact(&p, &s, &SumSpec::new(n).without_tail()).unwrap();
        assert!((with.value - exact).abs() < 1e-2 * (without.value - exact).abs(), "n = {n}");
        assert!((with.value - exact).abs() <= 2.0 * with.truncation_estimate.max(5e-9), "n = {n}");
    }
}

#[test]
fn tail_corrected_error_falls_as_one_over_n_cubed() {
    let p = OscillatorParams::ohmic(2.0, 0.7, 0.05).unwrap();
    let s = Sensitivity::omega_only(1.0);
    let exact = forces::force_ohmic_exact(&p, &s).unwrap().value;
    let err = |n| (force_sum_exact(&p, &s, &SumSpec::new(n)).unwrap().value - exact).abs();
    let ratio = err(1_000) / err(10_000);
    assert!((ratio / 1000.0 - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn plain_truncation_error_falls_as_one_over_n() {
    let p = OscillatorParams::ohmic(1.0, 0.3, 0.2).unwrap();
    let s = Sensitivity::omega_only(1.0);
    let exact = forces::force_ohmic_exact(&p, &s).unwrap().value;
    let err = |n| (force_sum_exact(&p, &s, &SumSpec::new(n).without_tail()).unwrap().value - exact).abs();
    let ratio = err(1_000) / err(10_000);
    assert!((ratio - 10.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn convergence_order_without_tail() {
    use fluctuforce::validation::loglog_slope;
    let p = OscillatorParams::drude(1.5, 0.4, 30.0, 0.3).unwrap();
    let s = Sensitivity { omega: 1.0, gamma0: 0.2, omega_d: -0.5 };
    let value = |n| force_sum_exact(&p, &s, &SumSpec::new(n).without_tail()).unwrap().value;
    let ns = [250.0, 1_000.0, 4_000.0, 16_000.0];
    let gaps: Vec<f64> = ns.iter().map(|&n| (value(n as u64) - value(4 * n as u64)).abs()).collect();
    let slope = loglog_slope(&ns, &gaps);
    assert!((slope + 1.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn auto_spec_grows_with_scale() {
    let cold = OscillatorParams::ohmic(10.0, 0.0, 1e-3).unwrap();
    let hot = OscillatorParams::ohmic(10.0, 0.0, 10.0).unwrap();
    assert!(SumSpec::auto(&cold, 1000).n_max > SumSpec::auto(&hot, 1000).n_max);
    assert_eq!(SumSpec::auto(&hot, 1_000_000).n_max, 1_000_000);
}

#[test]
fn difference_oracle_matches_gamma_ratio() {
    for (o1, o2, g, t) in [(1.0, 1.5, 0.4, 0.3), (0.5, 0.2, 3.0, 2.0), (4.0, 4.1, 8.0, 0.05)] {
        let p1 = OscillatorParams::ohmic(o1, g, t).unwrap();
        let p2 = OscillatorParams::ohmic(o2, g, t).unwrap();
        let closed = forces::free_energy_difference_gamma(&p1, &p2).unwrap();
        let sum = free_energy_difference(&p1, &p2, &SumSpec::new(200_000)).unwrap();
        assert!((closed.value - sum.value).abs() <= 1e-9f64.max(2.0 * sum.truncation_estimate), "{o1} {o2} {g} {t}");
    }
}

#[test]
fn finite_difference_of_a_polynomial() {
    let r = finite_difference_force(|x| Ok(x * x * x - 2.0 * x), 1.5, None).unwrap();
    assert!(rel(r.value, -(3.0 * 1.5 * 1.5 - 2.0)) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn force_sum_is_linear_in_sensitivity(
        omega in 0.1f64..10.0, gamma0 in 0.01f64..5.0, ratio in 10.0f64..1e3, t in 0.05f64..20.0,
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
    ) {
        let p = OscillatorParams::drude(omega, gamma0, ratio * omega.max(gamma0), t).unwrap();
        let spec = SumSpec::new(5_000);
        let sa = Sensitivity { omega: a, ..Default::default() };
        let sb = Sensitivity { gamma0: b, ..Default::default() };
        let sc = Sensitivity { omega_d: c, ..Default::default() };
        let parts: f64 = [sa, sb, sc].iter().map(|s| force_sum_exact(&p, s, &spec).unwrap().value).sum();
        let whole = force_sum_exact(&p, &Sensitivity { omega: a, gamma0: b, omega_d: c }, &spec).unwrap();
        prop_assert!((parts - whole.value).abs() <= 1e-12 * (parts.abs() + whole.value.abs()) + 1e-15);
    }

    #[test]
    fn per_parameter_sums_add_up(
        omega in 0.1f64..10.0, gamma0 in 0.01f64..5.0, ratio in 10.0f64..1e3, t in 0.05f64..20.0,
    ) {
        let p = OscillatorParams::drude(omega, gamma0, ratio * omega.max(gamma0), t).unwrap();
        let s = Sensitivity { omega: 1.0, gamma0: 0.3, omega_d: -2.0 };
        let spec = SumSpec::auto(&p, 10_000);
        let sums = per_parameter_sums_drude(&p, &s, &spec).unwrap();
        let direct = force_sum_exact(&p, &s, &spec).unwrap();
        let allowed = 2.0 * (sums.truncation_estimate() + direct.truncation_estimate) + 1e-10 * direct.value.abs();
        prop_assert!((sums.total() - direct.value).abs() <= allowed);
    }

    #[test]
    fn doubling_n_max_stays_within_truncation_estimate(
        omega in 0.1f64..10.0, gamma in 0.0f64..20.0, t in 0.01f64..100.0,
        drude in proptest::bool::ANY, ratio in 10.0f64..1e3,
    ) {
        let (p, s) = if drude {
            let p = OscillatorParams::drude(omega, gamma, ratio * omega.max(gamma), t).unwrap();
            (p, Sensitivity { omega: 1.0, gamma0: 0.5, omega_d: -0.5 })
        } else {
            (OscillatorParams::ohmic(omega, gamma, t).unwrap(), Sensitivity::omega_only(1.0))
        };
        let once = force_sum_exact(&p, &s, &SumSpec::new(10_000)).unwrap();
        let twice = force_sum_exact(&p, &s, &SumSpec::new(20_000)).unwrap();
        prop_assert!((once.value - twice.value).abs() <= once.truncation_estimate);
    }

    #[test]
    fn ohmic_sum_sign(omega in 0.1f64..10.0, gamma in 0.0f64..20.0, t in 0.01f64..100.0, d in -3.0f64..3.0) {
        prop_assume!(d.abs() > 1e-3);
        let p = OscillatorParams::ohmic(omega, gamma, t).unwrap();
        let r = force_sum_exact(&p, &Sensitivity::omega_only(d), &SumSpec::new(2_000)).unwrap();
        prop_assert!(r.value * d < 0.0);
    }
}
