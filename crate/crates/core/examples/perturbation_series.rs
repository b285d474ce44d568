//! Rayleigh-Schrodinger coefficients of the ground level of Q(g) for
//! W = x^3 and a fit of their factorial growth.
//!
//! ```bash
//! cargo run --release --example perturbation_series -- 20
//! ```

use pt_oscillator::basis::{BasisTruncation, MultiIndex};
use pt_oscillator::perturbation::{coefficient_growth_fit, required_cutoff, rs_coefficients};
use pt_oscillator::potential::parse_potential;

fn main() -> pt_oscillator::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let w = parse_potential("x1^3", 1)?;
    let level = MultiIndex::new(vec![0]);
    let t = BasisTruncation::new(1, required_cutoff(&level, n, &w))?;
    let series = rs_coefficients(&t, &w, &level, n)?;

    series.write_csv(&mut std::io::stdout().lock())?;
    let fit = coefficient_growth_fit(&series)?;
    println!("# |mu_s| ~ {:.3} * {:.3}^s * Gamma({:.2} s)", fit.a, fit.c, fit.q_fit);
    Ok(())
}
