//! Malmquist–Takenaka rational systems sampled on a uniform torus grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::disc::{blaschke_unchecked, DiscPoint};
use crate::error::{Error, Result};

/// Inverse poles repeated by multiplicity, equal values adjacent.
///
/// Basis function `j` uses entry `j` as its own pole and the Blaschke product
/// of all earlier entries, so the ordering fixes the ordering of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleVector {
    entries: Vec<DiscPoint>,
}

impl PoleVector {
    /// Expands distinct poles by their multiplicities, in order.
    pub fn expand(poles: &[DiscPoint], multiplicities: &[usize]) -> Result<Self> {
        if poles.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch {
                expected: multiplicities.len(),
                actual: poles.len(),
            });
        }
        let mut entries = Vec::with_capacity(multiplicities.iter().sum());
        for (&p, &m) in poles.iter().zip(multiplicities) {
            entries.extend(std::iter::repeat_n(p, m));
        }
        Ok(Self { entries })
    }

    /// Takes an already expanded list. Equal values must be contiguous.
    pub fn from_entries(entries: Vec<DiscPoint>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if i > 0 && entries[i - 1] == *e {
                continue;
            }
            if entries[..i].contains(e) {
                return Err(Error::InvalidParameter(format!(
                    "pole {} at position {i} repeats a non-adjacent entry",
                    e.value()
                )));
            }
        }
        Ok(Self { entries })
    }

    /// `n` zero poles: the trigonometric system.
    pub fn zeros(n: usize) -> Self {
        Self {
            entries: vec![DiscPoint::ORIGIN; n],
        }
    }

    pub fn entries(&self) -> &[DiscPoint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `Φ_j(z)` for a point `z` on the unit circle.
pub fn mt_basis_value(j: usize, z: Complex64, poles: &PoleVector) -> Result<Complex64> {
    if j >= poles.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: poles.len(),
        });
    }
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "evaluation point {z} is not on the unit circle"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut product = one;
    for a in &poles.entries[..j] {
        product *= blaschke_unchecked(z, a.value());
    }
    let aj = poles.entries[j].value();
    Ok((1.0 - aj.norm_sqr()).sqrt() / (one - aj.conj() * z) * product)
}

/// The `M x N` matrix of basis values at `t_k = 2πk/M`, column-major.
#[derive(Debug, Clone)]
pub struct MtBasisMatrix {
    values: Vec<Complex64>,
    rows: usize,
    poles: PoleVector,
}

/// Sample point `e^{i 2πk/M}` of the uniform torus grid.
#[inline]
pub fn torus_point(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

pub fn build_mt_matrix(poles: &PoleVector, m_samples: usize) -> Result<MtBasisMatrix> {
    let n = poles.len();
    if m_samples < n || m_samples == 0 {
        return Err(Error::UnderdeterminedSystem {
            samples: m_samples,
            basis: n,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let scale: Vec<f64> = poles
        .entries
        .iter()
        .map(|a| (1.0 - a.value().norm_sqr()).sqrt())
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); m_samples * n];
    for k in 0..m_samples {
        let z = torus_point(k, m_samples);
        let mut product = one;
        for (j, a) in poles.entries.iter().enumerate() {
            let a = a.value();
            let inv = one / (one - a.conj() * z);
            values[j * m_samples + k] = product * inv * scale[j];
            product *= (z - a) * inv;
        }
    }
    Ok(MtBasisMatrix {
        values,
        rows: m_samples,
        poles: poles.clone(),
    })
}

impl MtBasisMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.poles.len()
    }

    pub fn pole_vector(&self) -> &PoleVector {
        &self.poles
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[col * self.rows + row]
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.values[col * self.rows..(col + 1) * self.rows]
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.values
    }

    /// `Θ c`.
    pub fn combine(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coefficients.len(), self.cols());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (j, &c) in coefficients.iter().enumerate() {
            for (o, &v) in out.iter_mut().zip(self.column(j)) {
                *o += v * c;
            }
        }
        out
    }

    /// `(1/M) Θᴴ Θ`, the discrete approximation of the continuous Gram matrix.
    pub fn gram(&self) -> Vec<Vec<Complex64>> {
        let n = self.cols();
        let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = self
                    .column(i)
                    .iter()
                    .zip(self.column(j))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                g[i][j] = s / self.rows as f64;
                g[j][i] = g[i][j].conj();
            }
        }
        g
    }
}
