//! Reconstruction of samples from a compressed record.

use crate::architecture::ArchitectureSpace;
use crate::codec::format::{BeatPayload, CompressedRecord, Header};
use crate::codec::preprocess::{linear_correct, linear_trend};
use crate::error::Result;
use crate::varpro::reconstruct_quantized;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedBeat {
    /// Offset of the beat within the decoded samples.
    pub start: usize,
    pub length: usize,
    /// Architecture row used, 0 for a flat beat.
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct DecodedRecord {
    pub record: CompressedRecord,
    /// Concatenated beats at their original lengths.
    pub samples: Vec<f64>,
    pub beats: Vec<DecodedBeat>,
    /// Decoded average beat in aligned mode.
    pub template: Option<Vec<f64>>,
}

/// Parses and reconstructs a compressed stream.
pub fn decode_record(bytes: &[u8]) -> Result<DecodedRecord> {
    reconstruct(CompressedRecord::from_bytes(bytes)?)
}

/// Trend plus the rescaled real part of the rational model, with the
/// model's own endpoint trend removed so the beat starts at `f0` and ends at
/// `f_last` exactly.
pub fn decode_beat(
    payload: &BeatPayload,
    header: &Header,
    space: &ArchitectureSpace,
) -> Result<Vec<f64>> {
    let amp = header.amplitude_quantizer();
    let m = payload.length;
    let mut out = linear_trend(amp.dequantize(payload.f0), amp.dequantize(payload.f_last), m);
    if let Some(model) = &payload.model {
        let config = space.get(model.dim)?;
        let norm = header.norm_quantizer().dequantize(model.norm);
        let shape = reconstruct_quantized(&model.poles, &model.coefficients, config, m)?;
        // pin the endpoints to the stored values
        let (shape, _, _) = linear_correct(&shape.iter().map(|z| z.re).collect::<Vec<_>>());
        for (o, v) in out.iter_mut().zip(&shape) {
            *o += norm * v;
        }
    }
    Ok(out)
}

/// The part of the average beat subtracted from a beat of length `m`: the
/// template cropped or zero-padded to `m` samples, with its own endpoint
/// trend removed so the beat keeps zero endpoints.
pub fn template_share(template: Option<&[f64]>, m: usize) -> Vec<f64> {
    match template {
        None => vec![0.0; m],
        Some(t) => {
            let mut crop: Vec<f64> = t.iter().copied().take(m).collect();
            crop.resize(m, 0.0);
            linear_correct(&crop).0
        }
    }
}

/// Reconstructs samples from an already parsed record.
pub fn reconstruct(record: CompressedRecord) -> Result<DecodedRecord> {
    let space = record.header.architecture_space()?;
    let template = match &record.template {
        Some(t) => Some(decode_beat(t, &record.header, &space)?),
        None => None,
    };
    // a flat template contributes nothing once its trend is removed
    let active = match (&record.template, &template) {
        (Some(p), Some(t)) if p.model.is_some() => Some(t.as_slice()),
        _ => None,
    };
    let total: usize = record.beats.iter().map(|b| b.length).sum();
    let mut samples = Vec::with_capacity(total);
    let mut beats = Vec::with_capacity(record.beats.len());
    for payload in &record.beats {
        let start = samples.len();
        let mut beat = decode_beat(payload, &record.header, &space)?;
        if active.is_some() {
            for (b, s) in beat.iter_mut().zip(template_share(active, payload.length)) {
                *b += s;
            }
        }
        samples.extend_from_slice(&beat);
        beats.push(DecodedBeat {
            start,
            length: payload.length,
            dim: payload.dim(),
        });
    }
    Ok(DecodedRecord {
        record,
        samples,
        beats,
        template,
    })
}
