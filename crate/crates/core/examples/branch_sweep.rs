//! Follow the lowest Q-branches across a coupling grid by eigenvector
//! overlap, printing CSV.
//!
//! ```bash
//! cargo run --release --example branch_sweep > branches.csv
//! ```

use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::cli::{parse_grid, track_branches};
use pt_oscillator::operators::Discretization;
use pt_oscillator::potential::parse_potential;

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^3", 1)?;
    let disc = Discretization::new(&BasisTruncation::new(1, 50)?, &w)?;
    let grid = parse_grid("0:1:41").map_err(pt_oscillator::Error::Config)?;

    println!("g,branch,signed_q,overlap");
    for r in track_branches(&disc, &grid, 4)? {
        println!("{},{},{},{}", r.g, r.branch, r.signed, r.overlap);
    }
    Ok(())
}
