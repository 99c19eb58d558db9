//! Large-N fidelity against the thermodynamic-limit scaling function.

use std::f64::consts::{FRAC_PI_2, LN_2};

use ising_fidelity::quadrature::{integrate, QuadOptions};
use ising_fidelity::*;

#[test]
fn complex_elliptic_e_matches_defining_integral() {
    let m: f64 = 4.0;
    let phi0 = (1.0 / m.sqrt()).asin();
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 20_000,
    };
    let re = integrate(
        |p: f64| (1.0 - m * p.sin().powi(2)).max(0.0).sqrt(),
        &[0.0, phi0],
        opts,
    )
    .unwrap()
    .value;
    let im = integrate(
        |p: f64| (m * p.sin().powi(2) - 1.0).max(0.0).sqrt(),
        &[phi0, FRAC_PI_2],
        opts,
    )
    .unwrap()
    .value;
    let e = elliptic_e(m).unwrap().value;
    assert!(
        (e.re - re).abs() < 1e-10 && (e.im - im).abs() < 1e-10,
        "{e} vs {re} + {im}i"
    );
}

#[test]
fn critical_fidelity_approaches_orthogonality_catastrophe() {
    let delta = 1e-3;
    let miss = |n: usize| {
        let f = fidelity(1.0, delta, n).unwrap();
        let leading = -delta * scaling_a(0.0).unwrap().a_value;
        // N (ln F/N + δ/4) → ln 2 / 2 once N|δ| >> 1
        (n as f64 * (f.log_per_site - leading) - 0.5 * LN_2).abs()
    };
    let small = miss(1_000);
    for n in [10_000, 100_000] {
        let m = miss(n);
        assert!(m < 1e-2 && m < small, "n = {n}: {m}");
    }
}

#[test]
fn critical_fidelity_per_site_is_linear_in_shift() {
    let n = 1_000_000;
    let points: Vec<(f64, f64)> = (0..=8)
        .map(|j| {
            let d = 1e-4 * 10f64.powf(0.25 * j as f64);
            let f = fidelity(1.0, d, n).unwrap();
            (d.ln(), (-f.log_per_site).ln())
        })
        .collect();
    let fit = linear_fit(&points).unwrap();
    assert!((0.99..=1.01).contains(&fit.slope), "{}", fit.slope);
}

#[test]
fn far_from_criticality_the_quadratic_form_holds() {
    let (n, delta, g) = (100_000, 1e-4, 1.01);
    let ln_f = fidelity(g, delta, n).unwrap().value.ln();
    let approx = -(n as f64) * delta * delta / (16.0 * (g - 1.0f64).abs());
    assert!(
        ((ln_f - approx) / approx).abs() < 0.05,
        "{ln_f} vs {approx}"
    );

    let d = 1e-5;
    let per_site = ln_fidelity_per_site(1.0 + 100.0 * d, d).unwrap();
    let quadratic = -d * d / (16.0 * 100.0 * d);
    assert!(((per_site - quadratic) / quadratic).abs() < 0.02);
}

#[test]
fn subleading_term_is_half_log_two() {
    for (n, delta) in [
        (100_000, 1e-3),
        (10_000, 1e-2),
        (100_000, std::f64::consts::PI / 1000.0),
    ] {
        let r = sum_minus_integral(1.0, delta, n).unwrap();
        assert!((r - 0.5 * LN_2).abs() < 1e-3, "n = {n}, δ = {delta}: {r}");
    }
}

#[test]
fn scaling_function_is_continuous_through_unit_c() {
    let at_one = scaling_a(1.0).unwrap().a_value;
    for c in [1.0 - 1e-6, 1.0 + 1e-6] {
        assert!((scaling_a(c).unwrap().a_value - at_one).abs() <= 1e-5);
    }
}
