//! Write Q(g) in the text dump format and read it back.
//!
//! ```bash
//! cargo run --example matrix_dump
//! ```

use std::io::BufReader;

use num_complex::Complex64;
use pt_oscillator::basis::BasisTruncation;
use pt_oscillator::operators::{read_matrix_dump, write_matrix_dump, Discretization};
use pt_oscillator::potential::parse_potential;

fn main() -> pt_oscillator::Result<()> {
    let w = parse_potential("x1^2*x2", 2)?;
    let disc = Discretization::new(&BasisTruncation::new(2, 3)?, &w)?;
    let q = disc.q_real(0.25);

    let mut buf = Vec::new();
    write_matrix_dump(&mut buf, "Q", &q, &w, Complex64::new(0.25, 0.0))?;
    print!("{}", String::from_utf8_lossy(&buf).lines().take(9).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    let (header, m) = read_matrix_dump(BufReader::new(buf.as_slice()))?;
    println!("read back {} x {} ({}), max diff {:e}", m.rows(), m.cols(), header.ordering, m.sub(q.matrix()).max_abs());
    Ok(())
}
