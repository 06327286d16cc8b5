//! Builds a Malmquist–Takenaka basis and checks it is orthonormal on the grid.
//!
//! ```text
//! cargo run --example mt_basis
//! ```

use rvp::disc::DiscPoint;
use rvp::mt::{build_mt_matrix, PoleVector};

fn main() -> rvp::Result<()> {
    let poles = [
        DiscPoint::from_polar(0.4, 0.5)?,
        DiscPoint::from_polar(0.8, -1.2)?,
    ];
    // first pole twice, second three times
    let b = PoleVector::expand(&poles, &[2, 3])?;
    let m = 512;
    let basis = build_mt_matrix(&b, m)?;
    println!("{} samples x {} basis functions", basis.rows(), basis.cols());

    let gram = basis.gram();
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.re - target).hypot(g.im));
        }
    }
    println!("max |G - I| = {worst:.2e}");

    // With all poles at zero the basis is the DFT system.
    let dft = build_mt_matrix(&PoleVector::zeros(4), 8)?;
    for k in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| format!("{:+.3}", dft.get(k, j)))
            .collect();
        println!("{}", row.join("  "));
    }
    Ok(())
}
