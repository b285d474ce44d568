//! Borel-Leroy sum of the divergent ground-level series against the value
//! obtained by diagonalizing Q(g).
//!
//! ```bash
//! cargo run --release --example borel_resummation
//! ```

use pt_oscillator::basis::{BasisTruncation, MultiIndex};
use pt_oscillator::borel::borel_sum;
use pt_oscillator::operators::Discretization;
use pt_oscillator::perturbation::{branch_eigenvalue, required_cutoff, rs_coefficients};
use pt_oscillator::potential::parse_potential;

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^3", 1)?;
    let level = MultiIndex::new(vec![0]);
    let n = 16;
    let series = rs_coefficients(&BasisTruncation::new(1, required_cutoff(&level, n, &w))?, &w, &level, n)?;
    let direct = Discretization::new(&BasisTruncation::new(1, 60)?, &w)?;
    let q = w.borel_order();

    println!("{:>6} {:>20} {:>20} {:>20} {:>10}", "g", "partial sum", "borel", "direct", "rel dev");
    for g in [0.01, 0.02, 0.05, 0.1, 0.2] {
        let b = borel_sum(&series, g, q, 64, Some((8, 8)))?;
        let d = branch_eigenvalue(&direct, &level, g)?;
        println!(
            "{g:>6} {:>20.15} {:>20.15} {:>20.15} {:>10.2e}",
            series.partial_sum(g, n),
            b.value,
            d,
            (b.value - d).abs() / d
        );
    }
    let b = borel_sum(&series, 0.05, q, 64, Some((8, 8)))?;
    println!("Pade poles in the Borel plane:");
    for p in &b.continuation_poles {
        println!("  {:+.6} {:+.6}i", p[0], p[1]);
    }
    Ok(())
}
