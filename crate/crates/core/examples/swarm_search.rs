//! MDHPSO choosing both the architecture row and the poles of a signal.
//!
//! ```text
//! cargo run --release --example swarm_search [seed]
//! ```

use rvp::architecture::{architecture_lookup, ArchitectureSpace};
use rvp::disc::DiscPoint;
use rvp::quant::{dequantize_pole, PolarCode};
use rvp::mt::{build_mt_matrix, PoleVector};
use rvp::swarm::{mdhpso_optimize_observed, SearchSpace, SwarmParams};
use rvp::varpro::generalized_cost;
use rvp::Complex64;

const ALPHA: f64 = 0.9;

fn main() -> rvp::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let m = 256;

    // Target built at dim 5.
    let config = architecture_lookup(5)?;
    let poles: Vec<DiscPoint> = (0..config.n() as u32)
        .map(|i| dequantize_pole(PolarCode { angle: 5 * i + 1, magnitude: 9 + i }))
        .collect();
    let basis = build_mt_matrix(&PoleVector::expand(&poles, config.multiplicities())?, m)?;
    let c: Vec<Complex64> = (0..basis.cols())
        .map(|k| Complex64::from_polar(1.0 / (1.0 + k as f64), 0.7 * k as f64))
        .collect();
    let signal = basis.combine(&c);
    let scale = signal.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
    let signal: Vec<Complex64> = signal.iter().map(|z| z / scale).collect();

    let space = SearchSpace::from_architecture(&ArchitectureSpace::standard());
    let fitness = |p: &[DiscPoint], d: usize| {
        generalized_cost(p, d, &signal, ALPHA, true).map_or(f64::INFINITY, |c| c.total)
    };
    let params = SwarmParams::default();
    let out = mdhpso_optimize_observed(&fitness, &space, &[], &params, seed, |state| {
        println!(
            "iteration {:>2}: best dim {:>2}, cost {:.4}",
            state.iteration(),
            state.best_dim(),
            state.best_cost()
        );
    })?;
    let found = generalized_cost(&out.best_poles, out.best_dim, &signal, ALPHA, true)?;
    let truth = generalized_cost(&poles, 5, &signal, ALPHA, true)?;
    println!("true model:  dim  5, PRD {:.3} %, cost {:.4}", truth.prd, truth.total);
    println!(
        "swarm model: dim {:>2}, PRD {:.3} %, cost {:.4} ({} evaluations)",
        out.best_dim, found.prd, found.total, out.evaluations
    );
    Ok(())
}
