//! Uniform polar quantization of disc values and linear scalar quantization.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::DiscPoint;

/// Bits per angle and per magnitude of a stored inverse pole.
pub const POLE_BITS: u32 = 4;
/// Bits per angle and per magnitude of a stored coefficient.
pub const COEFF_BITS: u32 = 7;
/// Bits per stored endpoint value and per beat norm.
pub const SCALAR_BITS: u32 = 8;

/// Largest pole modulus representable with [`POLE_BITS`] bits.
pub const MAX_POLE_MODULUS: f64 = 15.0 / 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolarCode {
    pub angle: u32,
    pub magnitude: u32,
}

/// Rounds the angle to a multiple of `2π/2^angle_bits` and the modulus to a
/// multiple of `1/2^mag_bits`, then clamps the modulus code to
/// `2^mag_bits - 1` so the grid stays strictly inside the disc.
pub fn quantize_disc(value: Complex64, angle_bits: u32, mag_bits: u32) -> PolarCode {
    let mag_levels = (1u32 << mag_bits) as f64;
    let magnitude = ((value.norm().min(1.0) * mag_levels).round() as u32).min((1 << mag_bits) - 1);
    if magnitude == 0 {
        return PolarCode {
            angle: 0,
            magnitude: 0,
        };
    }
    let angle_levels = 1u32 << angle_bits;
    let theta = value.arg().rem_euclid(TAU);
    let angle = ((theta / TAU * angle_levels as f64).round() as u32) % angle_levels;
    PolarCode { angle, magnitude }
}

pub fn dequantize_disc(code: PolarCode, angle_bits: u32, mag_bits: u32) -> Complex64 {
    let modulus = code.magnitude as f64 / (1u32 << mag_bits) as f64;
    let angle = code.angle as f64 * TAU / (1u32 << angle_bits) as f64;
    Complex64::from_polar(modulus, angle)
}

/// Snaps a pole onto the stored grid.
pub fn snap_pole(p: DiscPoint) -> DiscPoint {
    let q = dequantize_disc(quantize_disc(p.value(), POLE_BITS, POLE_BITS), POLE_BITS, POLE_BITS);
    DiscPoint::settle(q)
}

pub fn quantize_pole(p: DiscPoint) -> PolarCode {
    quantize_disc(p.value(), POLE_BITS, POLE_BITS)
}

pub fn dequantize_pole(code: PolarCode) -> DiscPoint {
    DiscPoint::settle(dequantize_disc(code, POLE_BITS, POLE_BITS))
}

/// Factor between least-squares coefficients of a length-`m` analytic beat
/// and their stored form. Basis columns have mean square 1, so their ℓ₂ norm
/// is `√m`; the analytic extension of a unit-norm real beat has energy at
/// most 2. Scaling by `√(m/2)` makes the stored coefficients' energy at most
/// 1, hence every stored coefficient modulus is at most 1.
pub fn coefficient_gain(m: usize) -> f64 {
    (m as f64 / 2.0).sqrt()
}

/// Quantizes least-squares coefficients of a length-`m` beat. Moduli above 1
/// (possible only through discretization error) are clamped with a warning.
pub fn quantize_coefficients(coefficients: &[Complex64], m: usize) -> Vec<PolarCode> {
    let gain = coefficient_gain(m);
    coefficients
        .iter()
        .map(|&c| {
            let mut s = c * gain;
            let r = s.norm();
            if r > 1.0 + 1e-9 {
                log::trace!("coefficient modulus {r:.6} exceeds 1; clamping");
            }
            if r > 1.0 {
                s /= r;
            }
            quantize_disc(s, COEFF_BITS, COEFF_BITS)
        })
        .collect()
}

pub fn dequantize_coefficients(codes: &[PolarCode], m: usize) -> Vec<Complex64> {
    let gain = coefficient_gain(m);
    codes
        .iter()
        .map(|&c| dequantize_disc(c, COEFF_BITS, COEFF_BITS) / gain)
        .collect()
}

/// Uniform scalar quantizer over `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearQuantizer {
    min: f64,
    max: f64,
    bits: u32,
}

impl LinearQuantizer {
    pub fn new(min: f64, max: f64, bits: u32) -> Self {
        Self { min, max, bits }
    }

    fn levels(&self) -> f64 {
        ((1u64 << self.bits) - 1) as f64
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / self.levels()
    }

    pub fn quantize(&self, v: f64) -> u32 {
        let span = self.max - self.min;
        if !(span > 0.0) {
            return 0;
        }
        let t = ((v - self.min) / span * self.levels()).round();
        t.clamp(0.0, self.levels()) as u32
    }

    pub fn dequantize(&self, code: u32) -> f64 {
        let span = self.max - self.min;
        if !(span > 0.0) {
            return self.min;
        }
        self.min + span * code as f64 / self.levels()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angle_pi_is_on_grid() {
        let code = quantize_disc(Complex64::from_polar(0.5, PI), 4, 4);
        assert_eq!(code.angle, 8);
        let back = dequantize_disc(code, 4, 4);
        assert_eq!(code.angle as f64 * TAU / 16.0, PI);
        assert!((back.arg().abs() - PI).abs() < 1e-15);
    }

    #[test]
    fn magnitude_clamped_below_one() {
        let code = quantize_disc(Complex64::new(0.99, 0.0), 4, 4);
        assert_eq!(code.magnitude, 15);
        let back = dequantize_disc(code, 4, 4);
        assert_eq!(back.norm(), 0.9375);
    }

    #[test]
    fn quantization_is_idempotent() {
        for k in 0..500 {
            let z = Complex64::from_polar((k as f64 * 0.618).fract(), k as f64 * 1.3);
            for bits in [3, 4, 7] {
                let q = dequantize_disc(quantize_disc(z, bits, bits), bits, bits);
                let qq = dequantize_disc(quantize_disc(q, bits, bits), bits, bits);
                assert_eq!(quantize_disc(q, bits, bits), quantize_disc(qq, bits, bits));
                assert!((q - qq).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn negative_small_angle_wraps_to_zero() {
        let code = quantize_disc(Complex64::from_polar(0.5, -1e-9), 4, 4);
        assert_eq!(code.angle, 0);
    }

    #[test]
    fn snapped_pole_modulus_is_capped() {
        let p = DiscPoint::new(0.0, -0.999).unwrap();
        assert!((snap_pole(p).modulus() - MAX_POLE_MODULUS).abs() < 1e-15);
    }

    #[test]
    fn linear_quantizer_endpoints() {
        let q = LinearQuantizer::new(-1.0, 3.0, 8);
        assert_eq!(q.quantize(-1.0), 0);
        assert_eq!(q.quantize(3.0), 255);
        assert_eq!(q.quantize(10.0), 255);
        assert_eq!(q.dequantize(255), 3.0);
        assert!((q.dequantize(q.quantize(0.7)) - 0.7).abs() <= q.step() / 2.0 + 1e-15);
    }

    #[test]
    fn coefficient_round_trip_error_bounded() {
        let m = 300;
        let gain = coefficient_gain(m);
        let c = vec![Complex64::new(0.02, -0.01), Complex64::new(-0.03, 0.0)];
        let back = dequantize_coefficients(&quantize_coefficients(&c, m), m);
        for (a, b) in c.iter().zip(&back) {
            // half a modulus step plus half an angle step
            let bound = (0.5 / 128.0 + (a * gain).norm() * PI / 128.0) / gain;
            assert!((a - b).norm() <= bound + 1e-15);
        }
    }
}
