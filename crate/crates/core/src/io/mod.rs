//! Signal and annotation files, QRS detection and synthetic ECG.

pub mod annotations;
pub mod csv;
pub mod qrs;
pub mod synth;
pub mod wfdb;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sampling rate assumed when a file does not declare one.
pub const DEFAULT_RATE: f64 = 360.0;
/// Resolution assumed when a file does not declare one.
pub const DEFAULT_BITS: u32 = 11;

/// One channel of samples in physical units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub samples: Vec<f64>,
    pub sampling_rate: f64,
    pub resolution_bits: u32,
    pub name: String,
}

impl Record {
    pub fn new(
        samples: Vec<f64>,
        sampling_rate: f64,
        resolution_bits: u32,
        name: impl Into<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("record has no samples".into()));
        }
        if !(sampling_rate > 0.0 && sampling_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sampling rate {sampling_rate} must be positive"
            )));
        }
        Ok(Self {
            samples,
            sampling_rate,
            resolution_bits,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The first `seconds` of the record.
    pub fn truncated(&self, seconds: f64) -> Self {
        let n = ((seconds * self.sampling_rate) as usize).clamp(1, self.len());
        Self {
            samples: self.samples[..n].to_vec(),
            ..self.clone()
        }
    }

    /// Size of the record at its native resolution.
    pub fn bits(&self) -> u64 {
        self.samples.len() as u64 * self.resolution_bits as u64
    }
}

/// Sorted, duplicate-free QRS peak indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BeatAnnotations {
    indices: Vec<usize>,
}

impl BeatAnnotations {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Indices below `len`.
    pub fn within(&self, len: usize) -> Self {
        Self {
            indices: self.indices.iter().copied().filter(|&i| i < len).collect(),
        }
    }
}
