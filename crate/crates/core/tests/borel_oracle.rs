mod common;

use common::half_line;
use pt_oscillator::borel::{borel_sum, borel_transform, pade_continue};
use pt_oscillator::perturbation::PowerSeries;
use statrs::function::gamma::gamma;

fn stieltjes(n: usize) -> PowerSeries {
    PowerSeries::from_coefficients(
        (0..=n)
            .map(|s| if s % 2 == 0 { 1.0 } else { -1.0 } * gamma(s as f64 + 1.0))
            .collect(),
    )
}

#[test]
fn stieltjes_against_adaptive_quadrature() {
    let g = 0.2;
    let want = half_line(|u| (-u).exp() / (1.0 + g * u), 1e-14);
    let got = borel_sum(&stieltjes(12), g, 1.0, 64, Some((6, 6))).unwrap();
    assert!((got.value - want).abs() < 1e-8, "{} vs {want}", got.value);
    assert!(!got.pole_warning);
    // the pole of 1/(1+t) sits on the negative axis
    assert!(got.continuation_poles.iter().any(|p| (p[0] + 1.0).abs() < 1e-8));
}

#[test]
fn laguerre_form_equals_raw_integral() {
    // (1/q) ∫ B(g t) e^{-t^{1/q}} dt for a smooth transform
    let series = PowerSeries::from_coefficients(vec![1.0, -0.5, 0.75, -1.5, 3.0, -7.0, 18.0]);
    for q in [0.5, 1.0, 1.5] {
        let b = borel_transform(&series, q);
        let pade = pade_continue(&b, (3, 3)).unwrap();
        let g = 0.1;
        let raw = half_line(|t| pade.eval(g * t) * (-t.powf(1.0 / q)).exp(), 1e-13) / q;
        let sum = borel_sum(&series, g, q, 64, Some((3, 3))).unwrap().value;
        let tol = if q == 1.0 { 1e-10 } else { 5e-3 };
        assert!((sum - raw).abs() <= tol * raw.abs(), "q={q}: {sum} vs {raw}");
    }
}
