//! Two-dimensional Henon-Heiles coupling W = x1^2 x2: the lowest singular
//! values as the basis cutoff grows.
//!
//! ```bash
//! cargo run --release --example henon_heiles
//! ```

use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::operators::Discretization;
use pt_oscillator::potential::parse_potential;
use pt_oscillator::verify::{convergence_study, Quantity};

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^2*x2", 2)?;
    let discs = [10, 14, 18, 22]
        .iter()
        .map(|&l| Discretization::new(&BasisTruncation::new(2, l)?, &w))
        .collect::<pt_oscillator::Result<Vec<_>>>()?;

    let table = convergence_study(&discs, 0.1, Quantity::SingularValues, 6)?;
    for row in &table.rows {
        let vals: Vec<String> = row.values.iter().map(|v| format!("{v:.10}")).collect();
        println!("L={:<3} {}  change {:?}", row.cutoff, vals.join(" "), row.change);
    }
    println!("converged at {:?}", table.converged_at);
    Ok(())
}
