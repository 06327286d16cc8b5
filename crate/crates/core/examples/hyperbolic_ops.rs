//! Möbius addition, subtraction and scaling in the Poincaré disc.
//!
//! ```text
//! cargo run --example hyperbolic_ops
//! ```

use rvp::disc::{hyp_add, hyp_metric, hyp_scale_origin, hyp_sub, DiscPoint};

fn main() -> rvp::Result<()> {
    let w1 = DiscPoint::new(0.5, 0.2)?;
    let w2 = DiscPoint::from_polar(0.7, 2.0)?;
    let origin = DiscPoint::new(0.0, 0.0)?;

    let sum = hyp_add(w1, w2);
    println!("w1 ⊕ w2 = {:.6} (|.| = {:.6})", sum.value(), sum.modulus());
    println!("w1 ⊖ w1 = {:.3e}", hyp_sub(w1, w1).modulus());
    println!("w1 ⊕ 0  = {:.6}", hyp_add(w1, origin).value());

    // Points near the boundary stay inside.
    let edge = DiscPoint::from_polar(0.999, 0.3)?;
    println!("edge ⊕ edge: |.| = {:.12}", hyp_add(edge, edge).modulus());

    // Scaling from the origin multiplies hyperbolic distance.
    let d = hyp_metric(origin, w2);
    for lambda in [0.25, 0.5, 1.0, 2.0] {
        let s = hyp_scale_origin(lambda, w2);
        println!(
            "λ = {lambda:<4}  ρ(0, λ⊙w2) = {:.6}  λ ρ(0, w2) = {:.6}",
            hyp_metric(origin, s),
            lambda * d
        );
    }
    Ok(())
}
