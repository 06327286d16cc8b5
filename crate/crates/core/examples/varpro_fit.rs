//! Variable projection on a signal made from two known grid poles, and the
//! quantized model that the codec would store.
//!
//! ```text
//! cargo run --example varpro_fit
//! ```

use rvp::architecture::architecture_lookup;
use rvp::disc::DiscPoint;
use rvp::quant::{dequantize_pole, PolarCode};
use rvp::mt::{build_mt_matrix, PoleVector};
use rvp::varpro::{fit_quantized, generalized_cost, vp_residual};
use rvp::Complex64;

fn main() -> rvp::Result<()> {
    let m = 300;
    let config = architecture_lookup(4)?;
    println!("dim 4 multiplicities {:?}", config.multiplicities());

    // poles on the storage grid, so quantization keeps them exactly
    let truth: Vec<DiscPoint> = [(1, 8), (6, 12)]
        .iter()
        .map(|&(angle, magnitude)| dequantize_pole(PolarCode { angle, magnitude }))
        .collect();
    let basis = build_mt_matrix(&PoleVector::expand(&truth, config.multiplicities())?, m)?;
    let coeffs: Vec<Complex64> = (0..basis.cols())
        .map(|k| Complex64::from_polar(3.0 / (k + 1) as f64, k as f64))
        .collect();
    // the storage grids assume a beat of unit norm
    let signal = basis.combine(&coeffs);
    let scale = signal.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
    let signal: Vec<Complex64> = signal.iter().map(|z| z / scale).collect();

    println!("residual at the true poles: {:.3e}", vp_residual(&truth, &config, &signal)?);
    let off: Vec<DiscPoint> = truth
        .iter()
        .map(|p| DiscPoint::from_polar(p.modulus() * 0.9, p.value().arg() + 0.1))
        .collect::<rvp::Result<_>>()?;
    println!("residual at perturbed poles: {:.3e}", vp_residual(&off, &config, &signal)?);

    for alpha in [1.0, 0.5] {
        let c = generalized_cost(&truth, 4, &signal, alpha, true)?;
        println!(
            "alpha {alpha}: PRD {:.3} %, RCR {:.3} %, cost {:.3}",
            c.prd, c.rcr, c.total
        );
    }

    let q = fit_quantized(&truth, &config, &signal)?;
    println!("pole codes {:?}", q.pole_codes);
    println!("{} coefficient codes", q.coefficient_codes.len());
    Ok(())
}
