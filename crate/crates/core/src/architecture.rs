//! The catalog of 30 pole-multiplicity configurations searched by the swarm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DIM_MIN: usize = 1;
pub const DIM_MAX: usize = 30;
/// Maximum number of distinct poles in any configuration.
pub const MAX_POLES: usize = 3;

const TABLE: [&[usize]; DIM_MAX] = [
    &[2, 4],
    &[8],
    &[4, 4],
    &[2, 6],
    &[2, 2, 4],
    &[4, 6],
    &[2, 8],
    &[2, 4, 4],
    &[2, 2, 6],
    &[6, 6],
    &[4, 8],
    &[4, 4, 4],
    &[2, 2, 8],
    &[2, 4, 6],
    &[6, 8],
    &[4, 4, 6],
    &[2, 6, 6],
    &[2, 4, 8],
    &[8, 8],
    &[2, 6, 8],
    &[4, 6, 6],
    &[4, 4, 8],
    &[2, 8, 8],
    &[4, 6, 8],
    &[6, 6, 6],
    &[4, 8, 8],
    &[6, 6, 8],
    &[6, 8, 8],
    &[8, 8, 8],
    &[8, 14, 8],
];

/// One row of the architecture space: pole multiplicities and the derived
/// pole count `n` and basis size `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleConfiguration {
    dim_index: usize,
    multiplicities: Vec<usize>,
}

impl PoleConfiguration {
    pub fn new(dim_index: usize, multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.is_empty()
            || multiplicities.len() > MAX_POLES
            || multiplicities.contains(&0)
        {
            return Err(Error::InvalidParameter(format!(
                "multiplicities {multiplicities:?} must hold 1 to {MAX_POLES} positive entries"
            )));
        }
        Ok(Self {
            dim_index,
            multiplicities,
        })
    }

    pub fn dim_index(&self) -> usize {
        self.dim_index
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Number of distinct poles.
    pub fn n(&self) -> usize {
        self.multiplicities.len()
    }

    /// Number of basis functions (sum of multiplicities).
    pub fn total_n(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `n + N`, the count of stored complex parameters.
    pub fn complexity(&self) -> usize {
        self.n() + self.total_n()
    }
}

/// Table row `d` (1-based).
pub fn architecture_lookup(d: usize) -> Result<PoleConfiguration> {
    if !(DIM_MIN..=DIM_MAX).contains(&d) {
        return Err(Error::InvalidDimension(d));
    }
    Ok(PoleConfiguration {
        dim_index: d,
        multiplicities: TABLE[d - 1].to_vec(),
    })
}

/// An ordered set of configurations addressed by virtual dimension 1..=len.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchitectureSpace {
    rows: Vec<PoleConfiguration>,
}

impl Default for ArchitectureSpace {
    fn default() -> Self {
        Self::standard()
    }
}

impl ArchitectureSpace {
    /// The built-in 30-row ECG catalog.
    pub fn standard() -> Self {
        Self {
            rows: (DIM_MIN..=DIM_MAX)
                .map(|d| architecture_lookup(d).expect("table index"))
                .collect(),
        }
    }

    /// Builds a space from multiplicity rows, renumbering them 1..=len.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.is_empty() || rows.len() > DIM_MAX {
            return Err(Error::InconsistentArchitectureTable(format!(
                "{} rows (expected 1..={DIM_MAX})",
                rows.len()
            )));
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, m)| PoleConfiguration::new(i + 1, m))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InconsistentArchitectureTable(e.to_string()))?;
        Ok(Self { rows })
    }

    pub fn get(&self, d: usize) -> Result<&PoleConfiguration> {
        if d == 0 || d > self.rows.len() {
            return Err(Error::InvalidDimension(d));
        }
        Ok(&self.rows[d - 1])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[PoleConfiguration] {
        &self.rows
    }

    pub fn max_dim(&self) -> usize {
        self.rows.len()
    }
}
