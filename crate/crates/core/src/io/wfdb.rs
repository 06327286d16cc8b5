//! WFDB records stored in format 212, the packing used by the MIT-BIH
//! databases: two 12-bit two's-complement samples in three bytes.

use std::fs;
use std::path::Path;

use super::Record;
use crate::error::{Error, Result};

const DEFAULT_GAIN: f64 = 200.0;

/// Splits a byte stream into 12-bit samples. A trailing pair of bytes holds
/// one last sample.
pub fn unpack_212(bytes: &[u8]) -> Result<Vec<i16>> {
    if bytes.len() % 3 == 1 {
        return Err(Error::TruncatedData(format!(
            "{} bytes do not hold whole 12-bit samples",
            bytes.len()
        )));
    }
    let sign = |v: u16| -> i16 { ((v << 4) as i16) >> 4 };
    let mut out = Vec::with_capacity(bytes.len() / 3 * 2 + 1);
    for g in bytes.chunks(3) {
        out.push(sign(g[0] as u16 | ((g[1] as u16 & 0x0F) << 8)));
        if g.len() == 3 {
            out.push(sign(g[2] as u16 | ((g[1] as u16 & 0xF0) << 4)));
        }
    }
    Ok(out)
}

/// Inverse of [`unpack_212`]. Values are truncated to 12 bits.
pub fn pack_212(samples: &[i16]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len().div_ceil(2) * 3);
    for pair in samples.chunks(2) {
        let a = pair[0] as u16 & 0x0FFF;
        out.push((a & 0xFF) as u8);
        match pair.get(1) {
            Some(&b) => {
                let b = b as u16 & 0x0FFF;
                out.push(((a >> 8) | ((b >> 8) << 4)) as u8);
                out.push((b & 0xFF) as u8);
            }
            None => out.push((a >> 8) as u8),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub file: String,
    pub gain: f64,
    pub baseline: i32,
    pub units: String,
    pub adc_resolution: u32,
    pub adc_zero: i32,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WfdbHeader {
    pub name: String,
    pub sampling_rate: f64,
    pub samples_per_signal: Option<usize>,
    pub signals: Vec<SignalSpec>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::UnsupportedFormat(msg.into())
}

/// `gain(baseline)/units` with every part but the gain optional.
fn parse_gain(field: &str) -> Result<(f64, Option<i32>, String)> {
    let (head, units) = match field.split_once('/') {
        Some((h, u)) => (h, u.to_string()),
        None => (field, "mV".to_string()),
    };
    let (gain, baseline) = match head.split_once('(') {
        Some((g, b)) => {
            let b = b.trim_end_matches(')');
            (g, Some(b.parse().map_err(|_| bad(format!("bad baseline '{b}'")))?))
        }
        None => (head, None),
    };
    let gain: f64 = gain.parse().map_err(|_| bad(format!("bad gain '{gain}'")))?;
    Ok((if gain == 0.0 { DEFAULT_GAIN } else { gain }, baseline, units))
}

pub fn parse_header(text: &str) -> Result<WfdbHeader> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let record_line = lines.next().ok_or_else(|| bad("empty header"))?;
    let mut f = record_line.split_whitespace();
    let name = f.next().ok_or_else(|| bad("missing record name"))?;
    if name.contains('/') {
        return Err(bad("multi-segment records are not supported"));
    }
    let nsig: usize = f
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("missing signal count"))?;
    let sampling_rate = match f.next() {
        Some(v) => {
            let v = v.split(['/', '(']).next().unwrap_or(v);
            v.parse().map_err(|_| bad(format!("bad sampling frequency '{v}'")))?
        }
        None => 250.0,
    };
    let samples_per_signal = f.next().and_then(|v| v.parse().ok());

    let mut signals = Vec::with_capacity(nsig);
    for _ in 0..nsig {
        let line = lines.next().ok_or_else(|| bad("fewer signal lines than declared"))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(bad(format!("short signal line '{line}'")));
        }
        let format = fields[1].split(['x', ':', '+']).next().unwrap_or("");
        if format != "212" {
            return Err(bad(format!("format {} (only 212 is supported)", fields[1])));
        }
        let (gain, baseline, units) = match fields.get(2) {
            Some(g) => parse_gain(g)?,
            None => (DEFAULT_GAIN, None, "mV".into()),
        };
        let adc_resolution = fields.get(3).and_then(|v| v.parse().ok()).filter(|&v| v > 0).unwrap_or(12);
        let adc_zero = fields.get(4).and_then(|v| v.parse().ok()).unwrap_or(0);
        signals.push(SignalSpec {
            file: fields[0].to_string(),
            gain,
            baseline: baseline.unwrap_or(adc_zero),
            units,
            adc_resolution,
            adc_zero,
            description: fields.get(8..).map(|d| d.join(" ")).unwrap_or_default(),
        });
    }
    if signals.is_empty() {
        return Err(bad("record declares no signals"));
    }
    if signals.iter().any(|s| s.file != signals[0].file) {
        return Err(bad("signals spread over several files"));
    }
    Ok(WfdbHeader {
        name: name.to_string(),
        sampling_rate,
        samples_per_signal,
        signals,
    })
}

/// Reads a format-212 record, one [`Record`] per signal, in physical units
/// `(raw - baseline) / gain`.
pub fn read_wfdb_212(header_path: impl AsRef<Path>, dat_path: impl AsRef<Path>) -> Result<Vec<Record>> {
    let header = parse_header(&fs::read_to_string(header_path)?)?;
    let bytes = fs::read(dat_path)?;
    records_from_212(&header, &bytes)
}

/// Reads `<dir>/<name>.hea` and the data file it names.
pub fn read_wfdb_record(dir: impl AsRef<Path>, name: &str) -> Result<Vec<Record>> {
    let dir = dir.as_ref();
    let header = parse_header(&fs::read_to_string(dir.join(format!("{name}.hea")))?)?;
    let bytes = fs::read(dir.join(&header.signals[0].file))?;
    records_from_212(&header, &bytes)
}

pub fn records_from_212(header: &WfdbHeader, bytes: &[u8]) -> Result<Vec<Record>> {
    let nsig = header.signals.len();
    let raw = unpack_212(bytes)?;
    let available = raw.len() / nsig;
    let frames = match header.samples_per_signal {
        Some(n) if n > 0 => {
            if n > available {
                return Err(Error::TruncatedData(format!(
                    "header declares {n} samples per signal, data holds {available}"
                )));
            }
            n
        }
        _ => available,
    };
    if frames == 0 {
        return Err(Error::TruncatedData("no complete sample frame".into()));
    }
    header
        .signals
        .iter()
        .enumerate()
        .map(|(c, s)| {
            let samples = (0..frames)
                .map(|t| (raw[t * nsig + c] as f64 - s.baseline as f64) / s.gain)
                .collect();
            let name = if s.description.is_empty() {
                format!("{}:{c}", header.name)
            } else {
                format!("{}:{}", header.name, s.description)
            };
            Record::new(samples, header.sampling_rate, s.adc_resolution, name)
        })
        .collect()
}
