//! H = sum_k q_k P psi_k psi_k^dagger, checked on random vectors, and the
//! overlap matrix showing psi and P psi are not biorthogonal.
//!
//! ```bash
//! cargo run --release --example canonical_expansion
//! ```

use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::operators::Discretization;
use pt_oscillator::potential::parse_potential;
use pt_oscillator::verify::check_canonical_expansion;

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^3", 1)?;
    let disc = Discretization::new(&BasisTruncation::new(1, 40)?, &w)?;
    for g in [0.0, 0.1, 0.4] {
        let r = check_canonical_expansion(&disc, g, 20, 7)?;
        println!("g = {g}: worst residual {:.3e} (tolerance {:.3e})", r.measured_discrepancy, r.tolerance);
        for d in &r.details {
            println!("    {:<36} {:.3e}", d.index, d.value);
        }
    }
    Ok(())
}
