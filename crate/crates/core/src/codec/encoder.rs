//! Beat-wise encoding in basic and aligned mode.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::architecture::{architecture_lookup, ArchitectureSpace, DIM_MAX};
use crate::codec::decoder::{decode_beat, decode_record, template_share, DecodedRecord};
use crate::codec::format::{
    BeatModel, BeatPayload, CompressedRecord, Header, Mode, MAX_BEATS, MAX_BEAT_LEN,
};
use crate::codec::preprocess::{analytic_extend, l2_norm, linear_correct, normalize, segment_bounds};
use crate::disc::DiscPoint;
use crate::error::{Error, Result};
use crate::quant::{quantize_pole, PolarCode};
use crate::swarm::{mdhpso_optimize, SearchSpace, SwarmParams, SwarmSeed};
use crate::varpro::{fit_quantized, rcr_percent, CostBreakdown};
use crate::Complex64;

/// Optima of this many preceding beats seed the swarm of the next one.
pub const SEED_BUFFER: usize = 5;
/// Beats averaged into the aligned-mode template.
pub const TEMPLATE_BEATS: usize = 30;

#[derive(Debug, Clone)]
pub struct EncoderConfig {
    pub mode: Mode,
    /// Weight of the error term in the cost, in `(0, 1]`.
    pub alpha: f64,
    pub swarm: SwarmParams,
    pub seed: u64,
    /// Encode beats concurrently. Beats are then optimized without seeds
    /// from their predecessors, which changes the output.
    pub parallel: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Basic,
            alpha: 0.5,
            swarm: SwarmParams::default(),
            seed: 0,
            parallel: false,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {} not in (0, 1]",
                self.alpha
            )));
        }
        self.swarm.validate()
    }
}

#[derive(Debug, Clone)]
pub struct EncodedBeat {
    pub payload: BeatPayload,
    /// Norm of the beat before normalization.
    pub norm: f64,
    /// Cost of the stored model, absent for flat beats.
    pub cost: Option<CostBreakdown>,
    /// The swarm's winner, reusable as a seed.
    pub optimum: Option<SwarmSeed>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BeatReport {
    /// First sample of the beat in the input record.
    pub start: usize,
    pub length: usize,
    pub dim: usize,
    pub cost: Option<CostBreakdown>,
}

#[derive(Debug, Clone)]
pub struct EncodedRecord {
    pub bytes: Vec<u8>,
    /// Stream size before byte padding.
    pub bit_len: usize,
    /// Input samples covered by the beats, `[start, end)`.
    pub span: (usize, usize),
    pub beats: Vec<BeatReport>,
    /// The stream as a decoder sees it.
    pub decoded: DecodedRecord,
}

/// Per-record settings shared by every beat.
#[derive(Debug, Clone, Copy)]
pub struct BeatEncoder<'a> {
    pub header: &'a Header,
    pub alpha: f64,
    pub swarm: &'a SwarmParams,
    pub space: &'a SearchSpace,
}

impl BeatEncoder<'_> {
    /// Encodes one linearly corrected beat (or residual) whose original
    /// endpoints were `f0` and `f_last`.
    pub fn encode(
        &self,
        corrected: &[f64],
        f0: f64,
        f_last: f64,
        seeds: &[SwarmSeed],
        rng_seed: u64,
    ) -> Result<EncodedBeat> {
        if corrected.is_empty() || corrected.len() > MAX_BEAT_LEN {
            return Err(Error::InvalidParameter(format!(
                "beat length {} outside 1..={MAX_BEAT_LEN}",
                corrected.len()
            )));
        }
        let amp = self.header.amplitude_quantizer();
        let mut payload = BeatPayload {
            length: corrected.len(),
            f0: amp.quantize(f0),
            f_last: amp.quantize(f_last),
            model: None,
        };
        let Some((unit, norm)) = normalize(corrected) else {
            log::debug!("flat beat of length {} stored as trend", corrected.len());
            return Ok(EncodedBeat {
                payload,
                norm: l2_norm(corrected),
                cost: None,
                optimum: None,
            });
        };
        let signal = analytic_extend(&unit);
        let alpha = self.alpha;

        // the cost only depends on the snapped poles
        let memo: Mutex<HashMap<(usize, Vec<PolarCode>), f64>> = Mutex::new(HashMap::new());
        let fitness = |poles: &[DiscPoint], dim: usize| -> f64 {
            let key = (dim, poles.iter().map(|&p| quantize_pole(p)).collect::<Vec<_>>());
            if let Some(&c) = memo.lock().expect("memo lock").get(&key) {
                return c;
            }
            let c = match pinned_cost(poles, dim, &signal, alpha) {
                Ok(b) => b.total,
                Err(e) => {
                    log::trace!("cost evaluation failed at dim {dim}: {e}");
                    f64::INFINITY
                }
            };
            memo.lock().expect("memo lock").insert(key, c);
            c
        };
        let best = mdhpso_optimize(fitness, self.space, seeds, self.swarm, rng_seed)?;

        let config = architecture_lookup(best.best_dim)?;
        let model = fit_quantized(&best.best_poles, &config, &signal)?;
        let cost = pinned_cost(&best.best_poles, best.best_dim, &signal, alpha)?;
        payload.model = Some(BeatModel {
            dim: best.best_dim,
            norm: self.header.norm_quantizer().quantize(norm),
            poles: model.pole_codes,
            coefficients: model.coefficient_codes,
        });
        Ok(EncodedBeat {
            payload,
            norm,
            cost: Some(cost),
            optimum: Some(SwarmSeed {
                dim: best.best_dim,
                poles: best.best_poles,
            }),
        })
    }
}

/// The quantize-aware cost of a beat as the decoder reproduces it: the real
/// part of the stored model with its endpoint trend removed.
pub fn pinned_cost(
    poles: &[DiscPoint],
    dim: usize,
    signal: &[Complex64],
    alpha: f64,
) -> Result<CostBreakdown> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} not in (0, 1]")));
    }
    let config = architecture_lookup(dim)?;
    let model = fit_quantized(poles, &config, signal)?;
    let re: Vec<f64> = model.reconstruction.iter().map(|z| z.re).collect();
    let (shape, _, _) = linear_correct(&re);
    let err = signal
        .iter()
        .zip(&shape)
        .map(|(s, v)| (s.re - v).powi(2))
        .sum::<f64>()
        .sqrt();
    let prd = 100.0 * err;
    let rcr = rcr_percent(&config, signal.len());
    Ok(CostBreakdown {
        prd,
        rcr,
        total: alpha * prd + (1.0 - alpha) * rcr,
        alpha,
        dim_index: dim,
    })
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Swarm seed for beat `index`; the template uses `u64::MAX`.
pub fn beat_rng_seed(seed: u64, index: u64) -> u64 {
    splitmix(seed ^ splitmix(index))
}

fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// How the aligned-mode template is chosen.
#[derive(Debug, Clone)]
pub(crate) enum TemplateSource {
    /// Average of the first [`TEMPLATE_BEATS`] corrected beats.
    Average,
    /// A given template, used by tests.
    #[allow(dead_code)]
    Forced(Vec<f64>),
}

/// Compresses `samples` cut at `annotations` (QRS peak indices).
pub fn encode_record(
    samples: &[f64],
    annotations: &[usize],
    config: &EncoderConfig,
) -> Result<EncodedRecord> {
    encode_record_with(samples, annotations, config, TemplateSource::Average)
}

pub(crate) fn encode_record_with(
    samples: &[f64],
    annotations: &[usize],
    config: &EncoderConfig,
    source: TemplateSource,
) -> Result<EncodedRecord> {
    config.validate()?;
    let bounds = segment_bounds(annotations, samples.len())?;
    if bounds.len() > MAX_BEATS {
        return Err(Error::InvalidParameter(format!(
            "{} beats exceed the format limit of {MAX_BEATS}",
            bounds.len()
        )));
    }
    if let Some(&(a, b)) = bounds.iter().find(|(a, b)| b - a > MAX_BEAT_LEN) {
        return Err(Error::InvalidParameter(format!(
            "beat at {a} has {} samples, more than {MAX_BEAT_LEN}",
            b - a
        )));
    }
    let corrected: Vec<(Vec<f64>, f64, f64)> = bounds
        .iter()
        .map(|&(a, b)| linear_correct(&samples[a..b]))
        .collect();
    let (mean, std) = mean_std(samples);

    let architecture = ArchitectureSpace::standard();
    let space = SearchSpace::from_architecture(&architecture);
    let aligned = config.mode == Mode::Aligned;

    let mut amp_min = f64::INFINITY;
    let mut amp_max = f64::NEG_INFINITY;
    for (_, f0, fl) in &corrected {
        amp_min = amp_min.min(f0.min(*fl));
        amp_max = amp_max.max(f0.max(*fl));
    }
    if aligned {
        // the template's endpoints are zero
        amp_min = amp_min.min(0.0);
        amp_max = amp_max.max(0.0);
    }
    let mut norm_max = corrected
        .iter()
        .map(|(c, _, _)| l2_norm(c))
        .fold(0.0, f64::max);

    let template_src: Option<Vec<f64>> = aligned.then(|| match &source {
        TemplateSource::Forced(t) => t.clone(),
        TemplateSource::Average => {
            let k = corrected.len().min(TEMPLATE_BEATS);
            let len = corrected[..k].iter().map(|(c, _, _)| c.len()).max().unwrap_or(0);
            let mut avg = vec![0.0; len];
            for (c, _, _) in &corrected[..k] {
                for (a, v) in avg.iter_mut().zip(c) {
                    *a += v;
                }
            }
            avg.iter_mut().for_each(|a| *a /= k as f64);
            avg
        }
    });
    let template_src = template_src.map(|t| linear_correct(&t));
    if let Some((t, _, _)) = &template_src {
        norm_max = norm_max.max(l2_norm(t));
    }

    let make_header = |norm_max: f64| Header {
        architecture: architecture
            .rows()
            .iter()
            .map(|r| r.multiplicities().to_vec())
            .collect(),
        mean: mean as f32,
        std: std as f32,
        amp_min: amp_min as f32,
        amp_max: amp_max as f32,
        norm_max: norm_max as f32,
        mode: config.mode,
    };
    let mut header = make_header(norm_max);

    let mut template_payload = None;
    let mut residuals: Vec<Vec<f64>> = corrected.iter().map(|(c, _, _)| c.clone()).collect();
    if let Some((t, tf0, tfl)) = &template_src {
        let template_space = SearchSpace::single(DIM_MAX, architecture.get(DIM_MAX)?.n())?;
        let encoder = BeatEncoder {
            header: &header,
            alpha: config.alpha,
            swarm: &config.swarm,
            space: &template_space,
        };
        let swarm_seed = beat_rng_seed(config.seed, u64::MAX);
        let encoded = encoder.encode(t, *tf0, *tfl, &[], swarm_seed)?;
        // Residual norms depend on the decoded template, whose norm code
        // depends on the norm range; widen the range until every norm fits.
        for attempt in 0..4 {
            header = make_header(norm_max);
            let mut payload = encoded.payload.clone();
            if let Some(m) = payload.model.as_mut() {
                m.norm = header.norm_quantizer().quantize(encoded.norm);
            }
            let active = if payload.model.is_some() {
                Some(decode_beat(&payload, &header, &architecture)?)
            } else {
                None
            };
            residuals = corrected
                .iter()
                .map(|(c, _, _)| {
                    let share = template_share(active.as_deref(), c.len());
                    c.iter().zip(&share).map(|(a, b)| a - b).collect()
                })
                .collect();
            template_payload = Some(payload);
            let needed = residuals.iter().map(|r| l2_norm(r)).fold(0.0, f64::max);
            if needed <= header.norm_max as f64 || attempt == 3 {
                break;
            }
            norm_max = needed;
        }
    }

    let encoder = BeatEncoder {
        header: &header,
        alpha: config.alpha,
        swarm: &config.swarm,
        space: &space,
    };
    let encode_one = |i: usize, seeds: &[SwarmSeed]| {
        let (_, f0, fl) = &corrected[i];
        encoder.encode(&residuals[i], *f0, *fl, seeds, beat_rng_seed(config.seed, i as u64))
    };
    let encoded: Vec<EncodedBeat> = if config.parallel {
        (0..corrected.len())
            .into_par_iter()
            .map(|i| encode_one(i, &[]))
            .collect::<Result<_>>()?
    } else {
        let mut buffer: VecDeque<SwarmSeed> = VecDeque::with_capacity(SEED_BUFFER);
        let mut out = Vec::with_capacity(corrected.len());
        for i in 0..corrected.len() {
            let seeds: Vec<SwarmSeed> = buffer.iter().cloned().collect();
            let beat = encode_one(i, &seeds)?;
            if let Some(s) = &beat.optimum {
                buffer.push_front(s.clone());
                buffer.truncate(SEED_BUFFER);
            }
            log::debug!(
                "beat {i}: dim {} cost {:?}",
                beat.payload.dim(),
                beat.cost.map(|c| c.total)
            );
            out.push(beat);
        }
        out
    };

    let record = CompressedRecord {
        header,
        template: template_payload,
        beats: encoded.iter().map(|b| b.payload.clone()).collect(),
    };
    let bit_len = record.bit_len()?;
    let bytes = record.to_bytes()?;
    let decoded = decode_record(&bytes)?;
    let beats = bounds
        .iter()
        .zip(&encoded)
        .map(|(&(a, b), e)| BeatReport {
            start: a,
            length: b - a,
            dim: e.payload.dim(),
            cost: e.cost,
        })
        .collect();
    Ok(EncodedRecord {
        bytes,
        bit_len,
        span: (bounds[0].0, bounds[bounds.len() - 1].1),
        beats,
        decoded,
    })
}
