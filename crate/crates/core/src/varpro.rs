//! Orthogonal projection onto MT subspaces, the variable-projection
//! residual, and the dimension-penalized cost the swarm minimizes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::architecture::{architecture_lookup, PoleConfiguration};
use crate::disc::DiscPoint;
use crate::error::{Error, Result};
use crate::linalg::PivotedQr;
use crate::mt::{build_mt_matrix, MtBasisMatrix, PoleVector};
use crate::quant::{
    dequantize_coefficients, dequantize_pole, quantize_coefficients, quantize_pole, PolarCode,
};

/// Smallest accepted ratio between the last and first pivot of the basis
/// factorization.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub coefficients: Vec<Complex64>,
    pub residual_l2: f64,
    pub reconstruction: Vec<Complex64>,
}

fn l2_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Least-squares coefficients `Θ⁺ f` and the orthogonal projection `Θ Θ⁺ f`.
pub fn project(basis: &MtBasisMatrix, signal: &[Complex64]) -> Result<ProjectionResult> {
    if signal.len() != basis.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis.rows(),
            actual: signal.len(),
        });
    }
    let qr = PivotedQr::factor(basis.as_slice(), basis.rows(), basis.cols());
    let coefficients = qr.solve_least_squares(signal, RANK_TOLERANCE)?;
    let reconstruction = basis.combine(&coefficients);
    let residual_l2 = l2_distance(signal, &reconstruction);
    Ok(ProjectionResult {
        coefficients,
        residual_l2,
        reconstruction,
    })
}

fn expanded_basis(
    poles: &[DiscPoint],
    config: &PoleConfiguration,
    m: usize,
) -> Result<MtBasisMatrix> {
    if poles.len() != config.n() {
        return Err(Error::DimensionMismatch {
            expected: config.n(),
            actual: poles.len(),
        });
    }
    let b = PoleVector::expand(poles, config.multiplicities())?;
    build_mt_matrix(&b, m)
}

/// `‖f - Θ(a) Θ(a)⁺ f‖₂` with `Θ` built from `poles` repeated per `config`.
pub fn vp_residual(
    poles: &[DiscPoint],
    config: &PoleConfiguration,
    signal: &[Complex64],
) -> Result<f64> {
    let basis = expanded_basis(poles, config, signal.len())?;
    Ok(project(&basis, signal)?.residual_l2)
}

/// A beat model as it is stored: grid codes for the poles and coefficients,
/// plus the complex reconstruction those codes decode to.
#[derive(Debug, Clone)]
pub struct QuantizedModel {
    pub pole_codes: Vec<PolarCode>,
    pub coefficient_codes: Vec<PolarCode>,
    pub reconstruction: Vec<Complex64>,
}

/// Snaps `poles` to the pole grid, refits the coefficients against the
/// snapped basis, then quantizes the coefficients.
pub fn fit_quantized(
    poles: &[DiscPoint],
    config: &PoleConfiguration,
    signal: &[Complex64],
) -> Result<QuantizedModel> {
    let pole_codes: Vec<PolarCode> = poles.iter().map(|&p| quantize_pole(p)).collect();
    let snapped: Vec<DiscPoint> = pole_codes.iter().map(|&c| dequantize_pole(c)).collect();
    let basis = expanded_basis(&snapped, config, signal.len())?;
    let fit = project(&basis, signal)?;
    let coefficient_codes = quantize_coefficients(&fit.coefficients, signal.len());
    let coefficients = dequantize_coefficients(&coefficient_codes, signal.len());
    Ok(QuantizedModel {
        pole_codes,
        reconstruction: basis.combine(&coefficients),
        coefficient_codes,
    })
}

/// Decodes stored codes into the complex model on `m` samples.
pub fn reconstruct_quantized(
    pole_codes: &[PolarCode],
    coefficient_codes: &[PolarCode],
    config: &PoleConfiguration,
    m: usize,
) -> Result<Vec<Complex64>> {
    let poles: Vec<DiscPoint> = pole_codes.iter().map(|&c| dequantize_pole(c)).collect();
    if coefficient_codes.len() != config.total_n() {
        return Err(Error::DimensionMismatch {
            expected: config.total_n(),
            actual: coefficient_codes.len(),
        });
    }
    let basis = expanded_basis(&poles, config, m)?;
    Ok(basis.combine(&dequantize_coefficients(coefficient_codes, m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Percent error of the real part of the model.
    pub prd: f64,
    /// Reciprocal compression ratio proxy `2 (n + N) / M · 100`.
    pub rcr: f64,
    pub total: f64,
    pub alpha: f64,
    pub dim_index: usize,
}

pub fn rcr_percent(config: &PoleConfiguration, m: usize) -> f64 {
    2.0 * config.complexity() as f64 / m as f64 * 100.0
}

/// `alpha · PRD + (1 - alpha) · RCR` for the configuration at `dim_index` of
/// the standard architecture table.
///
/// `signal` is the analytic extension of a real beat with unit ℓ₂ norm. The
/// PRD term measures the real part of the residual, which is what a decoder
/// reproduces; for such a beat it equals the percent error of the
/// reconstruction. With `quantize` set the poles and coefficients go through
/// the storage grids first, so the cost reflects the stored model.
pub fn generalized_cost(
    poles: &[DiscPoint],
    dim_index: usize,
    signal: &[Complex64],
    alpha: f64,
    quantize: bool,
) -> Result<CostBreakdown> {
    let config = architecture_lookup(dim_index)?;
    generalized_cost_for(poles, &config, signal, alpha, quantize)
}

/// [`generalized_cost`] for an explicit configuration.
pub fn generalized_cost_for(
    poles: &[DiscPoint],
    config: &PoleConfiguration,
    signal: &[Complex64],
    alpha: f64,
    quantize: bool,
) -> Result<CostBreakdown> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} not in (0, 1]")));
    }
    let reconstruction = if quantize {
        fit_quantized(poles, config, signal)?.reconstruction
    } else {
        let basis = expanded_basis(poles, config, signal.len())?;
        project(&basis, signal)?.reconstruction
    };
    let err: f64 = signal
        .iter()
        .zip(&reconstruction)
        .map(|(s, r)| (s.re - r.re).powi(2))
        .sum::<f64>()
        .sqrt();
    let prd = 100.0 * err;
    let rcr = rcr_percent(config, signal.len());
    Ok(CostBreakdown {
        prd,
        rcr,
        total: alpha * prd + (1.0 - alpha) * rcr,
        alpha,
        dim_index: config.dim_index(),
    })
}
