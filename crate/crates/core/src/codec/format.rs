//! The compressed file layout.
//!
//! After the 4-byte magic `RVP1` every field is bit-packed MSB first:
//!
//! | field | bits |
//! |---|---|
//! | architecture table, 30 rows of 3 multiplicities | 30 · 3 · 4 |
//! | beat count | 16 |
//! | mean, std of the raw record (f32) | 32 + 32 |
//! | amp_min, amp_max, norm_max (f32) | 3 · 32 |
//! | mode (0 basic, 1 aligned) | 1 |
//! | template beat, aligned mode only | one beat payload |
//! | beats | one beat payload each |
//!
//! A beat payload is `dim` (6), `length` (16), `f0` and `f_last` (8 each) and,
//! when `dim > 0`, `norm` (8), then `n` poles of 4 + 4 bits (angle,
//! magnitude) and `N` coefficients of 7 + 7 bits. `dim = 0` marks a flat beat
//! stored as its linear trend only. The stream is zero-padded to a whole byte
//! at the end.

use serde::Serialize;

use crate::architecture::{ArchitectureSpace, DIM_MAX, MAX_POLES};
use crate::codec::bitstream::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::quant::{LinearQuantizer, PolarCode, COEFF_BITS, POLE_BITS, SCALAR_BITS};

pub const MAGIC: &[u8; 4] = b"RVP1";
pub const MULTIPLICITY_BITS: u32 = 4;
pub const BEAT_COUNT_BITS: u32 = 16;
pub const DIM_BITS: u32 = 6;
pub const LENGTH_BITS: u32 = 16;
pub const MAX_BEAT_LEN: usize = (1 << LENGTH_BITS) - 1;
pub const MAX_BEATS: usize = (1 << BEAT_COUNT_BITS) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Basic,
    Aligned,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Basic => "basic",
            Mode::Aligned => "aligned",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(Mode::Basic),
            "aligned" => Ok(Mode::Aligned),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

/// The fitted part of a beat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeatModel {
    pub dim: usize,
    pub norm: u32,
    pub poles: Vec<PolarCode>,
    pub coefficients: Vec<PolarCode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeatPayload {
    pub length: usize,
    pub f0: u32,
    pub f_last: u32,
    /// `None` for flat beats.
    pub model: Option<BeatModel>,
}

impl BeatPayload {
    pub fn dim(&self) -> usize {
        self.model.as_ref().map_or(0, |m| m.dim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub architecture: Vec<Vec<usize>>,
    pub mean: f32,
    pub std: f32,
    pub amp_min: f32,
    pub amp_max: f32,
    pub norm_max: f32,
    pub mode: Mode,
}

impl Header {
    pub fn amplitude_quantizer(&self) -> LinearQuantizer {
        LinearQuantizer::new(self.amp_min as f64, self.amp_max as f64, SCALAR_BITS)
    }

    pub fn norm_quantizer(&self) -> LinearQuantizer {
        LinearQuantizer::new(0.0, self.norm_max as f64, SCALAR_BITS)
    }

    pub fn architecture_space(&self) -> Result<ArchitectureSpace> {
        ArchitectureSpace::from_rows(self.architecture.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressedRecord {
    pub header: Header,
    pub template: Option<BeatPayload>,
    pub beats: Vec<BeatPayload>,
}

fn write_beat(w: &mut BitWriter, beat: &BeatPayload) {
    w.write(beat.dim() as u64, DIM_BITS);
    w.write(beat.length as u64, LENGTH_BITS);
    w.write(beat.f0 as u64, SCALAR_BITS);
    w.write(beat.f_last as u64, SCALAR_BITS);
    if let Some(m) = &beat.model {
        w.write(m.norm as u64, SCALAR_BITS);
        for p in &m.poles {
            w.write(p.angle as u64, POLE_BITS);
            w.write(p.magnitude as u64, POLE_BITS);
        }
        for c in &m.coefficients {
            w.write(c.angle as u64, COEFF_BITS);
            w.write(c.magnitude as u64, COEFF_BITS);
        }
    }
}

fn read_beat(r: &mut BitReader, space: &ArchitectureSpace) -> Result<BeatPayload> {
    let dim = r.read(DIM_BITS)? as usize;
    let length = r.read(LENGTH_BITS)? as usize;
    let f0 = r.read(SCALAR_BITS)? as u32;
    let f_last = r.read(SCALAR_BITS)? as u32;
    let model = if dim == 0 {
        None
    } else {
        let config = space.get(dim)?;
        let norm = r.read(SCALAR_BITS)? as u32;
        let mut poles = Vec::with_capacity(config.n());
        for _ in 0..config.n() {
            let angle = r.read(POLE_BITS)? as u32;
            let magnitude = r.read(POLE_BITS)? as u32;
            poles.push(PolarCode { angle, magnitude });
        }
        let mut coefficients = Vec::with_capacity(config.total_n());
        for _ in 0..config.total_n() {
            let angle = r.read(COEFF_BITS)? as u32;
            let magnitude = r.read(COEFF_BITS)? as u32;
            coefficients.push(PolarCode { angle, magnitude });
        }
        Some(BeatModel {
            dim,
            norm,
            poles,
            coefficients,
        })
    };
    if length == 0 {
        return Err(Error::InvalidParameter("beat of length 0".into()));
    }
    Ok(BeatPayload {
        length,
        f0,
        f_last,
        model,
    })
}

fn check_beat(beat: &BeatPayload, space: &ArchitectureSpace) -> Result<()> {
    if beat.length == 0 || beat.length > MAX_BEAT_LEN {
        return Err(Error::InvalidParameter(format!(
            "beat length {} outside 1..={MAX_BEAT_LEN}",
            beat.length
        )));
    }
    if let Some(m) = &beat.model {
        let config = space.get(m.dim)?;
        if m.poles.len() != config.n() || m.coefficients.len() != config.total_n() {
            return Err(Error::DimensionMismatch {
                expected: config.complexity(),
                actual: m.poles.len() + m.coefficients.len(),
            });
        }
    }
    Ok(())
}

impl CompressedRecord {
    /// Serializes the record. Fails when a field does not fit its width.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        Ok(self.write()?.finish())
    }

    /// Exact size of the serialized stream in bits, before byte padding.
    pub fn bit_len(&self) -> Result<usize> {
        Ok(self.write()?.bit_len())
    }

    fn write(&self) -> Result<BitWriter> {
        let h = &self.header;
        let space = h.architecture_space()?;
        if h.architecture.len() != DIM_MAX {
            return Err(Error::InconsistentArchitectureTable(format!(
                "{} rows, the format stores {DIM_MAX}",
                h.architecture.len()
            )));
        }
        if self.beats.len() > MAX_BEATS {
            return Err(Error::InvalidParameter(format!(
                "{} beats exceed the {MAX_BEATS} the format can count",
                self.beats.len()
            )));
        }
        if self.template.is_some() != (h.mode == Mode::Aligned) {
            return Err(Error::InvalidParameter(
                "a template is stored exactly in aligned mode".into(),
            ));
        }
        for b in self.template.iter().chain(&self.beats) {
            check_beat(b, &space)?;
        }

        let mut w = BitWriter::new();
        w.write_bytes(MAGIC);
        for row in &h.architecture {
            for i in 0..MAX_POLES {
                w.write(row.get(i).copied().unwrap_or(0) as u64, MULTIPLICITY_BITS);
            }
        }
        w.write(self.beats.len() as u64, BEAT_COUNT_BITS);
        w.write_f32(h.mean);
        w.write_f32(h.std);
        w.write_f32(h.amp_min);
        w.write_f32(h.amp_max);
        w.write_f32(h.norm_max);
        w.write((h.mode == Mode::Aligned) as u64, 1);
        if let Some(t) = &self.template {
            write_beat(&mut w, t);
        }
        for b in &self.beats {
            write_beat(&mut w, b);
        }
        Ok(w)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() {
            return Err(if MAGIC.starts_with(bytes) {
                Error::TruncatedStream
            } else {
                Error::BadMagic
            });
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        let mut r = BitReader::new(&bytes[4..]);
        let mut architecture = Vec::with_capacity(DIM_MAX);
        for d in 1..=DIM_MAX {
            let mut row = Vec::with_capacity(MAX_POLES);
            let mut seen_zero = false;
            for _ in 0..MAX_POLES {
                let m = r.read(MULTIPLICITY_BITS)? as usize;
                if m == 0 {
                    seen_zero = true;
                } else if seen_zero {
                    return Err(Error::InconsistentArchitectureTable(format!(
                        "row {d} has a gap between multiplicities"
                    )));
                } else {
                    row.push(m);
                }
            }
            if row.is_empty() {
                return Err(Error::InconsistentArchitectureTable(format!("row {d} is empty")));
            }
            architecture.push(row);
        }
        let space = ArchitectureSpace::from_rows(architecture.clone())?;
        let count = r.read(BEAT_COUNT_BITS)? as usize;
        let mean = r.read_f32()?;
        let std = r.read_f32()?;
        let amp_min = r.read_f32()?;
        let amp_max = r.read_f32()?;
        let norm_max = r.read_f32()?;
        let mode = if r.read(1)? == 1 {
            Mode::Aligned
        } else {
            Mode::Basic
        };
        let template = match mode {
            Mode::Aligned => Some(read_beat(&mut r, &space)?),
            Mode::Basic => None,
        };
        let mut beats = Vec::with_capacity(count);
        for _ in 0..count {
            beats.push(read_beat(&mut r, &space)?);
        }
        let rest = r.remaining();
        if rest >= 8 || r.read(rest as u32)? != 0 {
            return Err(Error::TrailingData(rest));
        }
        Ok(Self {
            header: Header {
                architecture,
                mean,
                std,
                amp_min,
                amp_max,
                norm_max,
                mode,
            },
            template,
            beats,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architecture::ArchitectureSpace;

    fn header(mode: Mode) -> Header {
        Header {
            architecture: ArchitectureSpace::standard()
                .rows()
                .iter()
                .map(|r| r.multiplicities().to_vec())
                .collect(),
            mean: 0.1,
            std: 0.5,
            amp_min: -1.0,
            amp_max: 2.0,
            norm_max: 3.0,
            mode,
        }
    }

    fn beat(dim: usize, length: usize) -> BeatPayload {
        let space = ArchitectureSpace::standard();
        let model = (dim > 0).then(|| {
            let c = space.get(dim).unwrap();
            BeatModel {
                dim,
                norm: 77,
                poles: (0..c.n() as u32)
                    .map(|i| PolarCode { angle: i, magnitude: 15 - i })
                    .collect(),
                coefficients: (0..c.total_n() as u32)
                    .map(|i| PolarCode { angle: 127 - i, magnitude: i })
                    .collect(),
            }
        });
        BeatPayload {
            length,
            f0: 3,
            f_last: 250,
            model,
        }
    }

    #[test]
    fn round_trip() {
        let rec = CompressedRecord {
            header: header(Mode::Aligned),
            template: Some(beat(30, 320)),
            beats: vec![beat(1, 300), beat(0, 40), beat(17, 65535)],
        };
        let bytes = rec.to_bytes().unwrap();
        assert_eq!(&bytes[..4], MAGIC);
        assert_eq!(bytes.len(), rec.bit_len().unwrap().div_ceil(8));
        assert_eq!(CompressedRecord::from_bytes(&bytes).unwrap(), rec);
    }

    #[test]
    fn rejects_bad_streams() {
        let rec = CompressedRecord {
            header: header(Mode::Basic),
            template: None,
            beats: vec![beat(5, 280)],
        };
        let bytes = rec.to_bytes().unwrap();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(CompressedRecord::from_bytes(&bad), Err(Error::BadMagic)));
        assert!(matches!(CompressedRecord::from_bytes(b"RV"), Err(Error::TruncatedStream)));
        assert!(matches!(
            CompressedRecord::from_bytes(&bytes[..bytes.len() - 3]),
            Err(Error::TruncatedStream)
        ));
        let mut long = bytes.clone();
        long.extend_from_slice(&[0, 0]);
        assert!(matches!(CompressedRecord::from_bytes(&long), Err(Error::TrailingData(_))));
        // first row emptied
        let mut gap = bytes.clone();
        gap[4] = 0;
        gap[5] &= 0x0F;
        assert!(matches!(
            CompressedRecord::from_bytes(&gap),
            Err(Error::InconsistentArchitectureTable(_))
        ));
    }

    #[test]
    fn template_must_match_mode() {
        let rec = CompressedRecord {
            header: header(Mode::Basic),
            template: Some(beat(30, 300)),
            beats: vec![],
        };
        assert!(rec.to_bytes().is_err());
        let rec = CompressedRecord {
            header: header(Mode::Aligned),
            template: None,
            beats: vec![],
        };
        assert!(rec.to_bytes().is_err());
    }
}
