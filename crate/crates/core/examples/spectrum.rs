//! Eigenvalues of H(g) = H0 + i g x^3 in one dimension.
//!
//! ```bash
//! cargo run --release --example spectrum -- 0.5
//! ```

use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::linalg::eig_general;
use pt_oscillator::operators::Discretization;
use pt_oscillator::potential::parse_potential;

fn main() -> pt_oscillator::Result<()> {
    let g: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let w = parse_potential("x1^3", 1)?;
    let disc = Discretization::new(&BasisTruncation::new(1, 60)?, &w)?;

    let spec = eig_general(&disc.h_real(g))?;
    println!("H(g) at g = {g}, {} basis states", disc.size());
    for (k, z) in spec.values.iter().take(8).enumerate() {
        println!("  lambda_{k} = {:>22.15} {:+.3e}i", z.re, z.im);
    }
    Ok(())
}
