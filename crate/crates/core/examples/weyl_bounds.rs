//! Slack in Weyl's sum and product inequalities between |lambda_j| and the
//! singular values, in both orderings.
//!
//! ```bash
//! cargo run --release --example weyl_bounds
//! ```

use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::linalg::{eig_general, eig_hermitian};
use pt_oscillator::operators::Discretization;
use pt_oscillator::potential::parse_potential;
use pt_oscillator::verify::{weyl_slacks, WeylOrder};

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^3", 1)?;
    let disc = Discretization::new(&BasisTruncation::new(1, 40)?, &w)?;
    let g = 0.2;
    let lambdas = eig_general(&disc.h_real(g))?.values;
    let mu: Vec<f64> = eig_hermitian(&disc.q_real(g))?.real_values().iter().map(|x| x.abs()).collect();

    for order in [WeylOrder::IncreasingModulus, WeylOrder::DecreasingModulus] {
        println!("{order:?}");
        for s in weyl_slacks(&lambdas, &mu, 6, order) {
            println!("  k={:<2} sum {:+.3e}  product {:+.3e}", s.k, s.sum_slack, s.product_slack);
        }
    }
    Ok(())
}
