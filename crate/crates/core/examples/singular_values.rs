//! Singular values of H(g) read off the Hermitian matrix Q = P H, with the
//! sign carried by each eigenvalue of Q and the parity of the level it
//! continues from g = 0.
//!
//! ```bash
//! cargo run --release --example singular_values
//! ```

use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::cli::singular_rows;
use pt_oscillator::linalg::eig_hermitian;
use pt_oscillator::operators::{Discretization, OperatorMatrix};
use pt_oscillator::potential::parse_potential;

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^3", 1)?;
    let disc = Discretization::new(&BasisTruncation::new(1, 50)?, &w)?;
    let g = 0.2;

    for r in singular_rows(&disc, g)?.iter().take(6) {
        println!(
            "k={} mu={:.12} signed={:+.12} parity={}",
            r.index,
            r.mu,
            r.signed,
            r.parity.map_or("?".into(), |p| p.to_string())
        );
    }

    // same numbers from H^dagger H
    let h = disc.h_real(g);
    let hh = OperatorMatrix::new(*disc.basis(), h.matrix().adjoint().matmul(h.matrix()));
    let mut sv: Vec<f64> = eig_hermitian(&hh)?.real_values().iter().map(|x| x.max(0.0).sqrt()).collect();
    sv.sort_by(f64::total_cmp);
    println!("sqrt(eig(H^dagger H)) lowest: {:?}", &sv[..4]);
    Ok(())
}
