//! Five-level periodic wavelet decomposition with the 4-tap Daubechies
//! filter bank.

use crate::error::{Error, Result};

pub const LEVELS: usize = 5;
/// Inputs are extended to a multiple of this length.
pub const BLOCK: usize = 1 << LEVELS;

/// Low-pass analysis filter `((1+√3), (3+√3), (3−√3), (1−√3)) / (4√2)`.
pub fn db2_lowpass() -> [f64; 4] {
    let s3 = 3f64.sqrt();
    let n = 4.0 * 2f64.sqrt();
    [(1.0 + s3) / n, (3.0 + s3) / n, (3.0 - s3) / n, (1.0 - s3) / n]
}

/// High-pass analysis filter `g_k = (−1)^k h_{3−k}`.
pub fn db2_highpass() -> [f64; 4] {
    let h = db2_lowpass();
    [h[3], -h[2], h[1], -h[0]]
}

/// Detail bands `d1` (finest) to `d5`, then the level-5 approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandDecomposition {
    pub bands: [Vec<f64>; LEVELS + 1],
}

impl SubbandDecomposition {
    pub fn coefficient_count(&self) -> usize {
        self.bands.iter().map(Vec::len).sum()
    }

    pub fn energy(&self) -> f64 {
        self.bands.iter().flatten().map(|v| v * v).sum()
    }
}

/// Extends `x` to the next multiple of [`BLOCK`] by mirroring it at its end
/// (the last sample is repeated).
pub fn symmetric_pad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let target = n.div_ceil(BLOCK) * BLOCK;
    let mut out = x.to_vec();
    let period = 2 * n;
    for j in 0..target - n {
        let k = (n + j) % period;
        out.push(if k < n { x[k] } else { x[period - 1 - k] });
    }
    out
}

fn analysis_step(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let h = db2_lowpass();
    let g = db2_highpass();
    let n = x.len();
    let half = n / 2;
    let mut a = Vec::with_capacity(half);
    let mut d = Vec::with_capacity(half);
    for i in 0..half {
        let mut sa = 0.0;
        let mut sd = 0.0;
        for k in 0..4 {
            let v = x[(2 * i + k) % n];
            sa += h[k] * v;
            sd += g[k] * v;
        }
        a.push(sa);
        d.push(sd);
    }
    (a, d)
}

/// Decomposes `x` after padding it with [`symmetric_pad`].
pub fn wavelet_decompose_5(x: &[f64]) -> Result<SubbandDecomposition> {
    if x.len() < BLOCK {
        return Err(Error::TooShort(x.len()));
    }
    let mut approx = symmetric_pad(x);
    let mut details: Vec<Vec<f64>> = Vec::with_capacity(LEVELS);
    for _ in 0..LEVELS {
        let (a, d) = analysis_step(&approx);
        details.push(d);
        approx = a;
    }
    let mut it = details.into_iter();
    let mut next = || it.next().expect("five detail bands");
    Ok(SubbandDecomposition {
        bands: [next(), next(), next(), next(), next(), approx],
    })
}
