//! A Pan–Tompkins style QRS detector.
//!
//! The signal is band-passed to 5–15 Hz (zero phase, in the frequency
//! domain), differentiated, squared and integrated over a 150 ms window.
//! Peaks of the integrated signal are classified with running signal and
//! noise levels; a 200 ms refractory period separates detections and long
//! gaps are searched again at half the threshold. Each detection is moved
//! to the largest band-passed excursion nearby.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{BeatAnnotations, Record};

const LOW_HZ: f64 = 5.0;
const HIGH_HZ: f64 = 15.0;
const REFRACTORY_S: f64 = 0.2;
const WINDOW_S: f64 = 0.15;

fn band_pass(x: &[f64], fs: f64) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, b) in buf.iter_mut().enumerate() {
        let f = k.min(n - k) as f64 * fs / n as f64;
        // raised-cosine edges, 2 Hz wide
        let gain = if f < LOW_HZ - 1.0 || f > HIGH_HZ + 1.0 {
            0.0
        } else if f < LOW_HZ + 1.0 {
            0.5 - 0.5 * (std::f64::consts::PI * (f - (LOW_HZ - 1.0)) / 2.0).cos()
        } else if f > HIGH_HZ - 1.0 {
            0.5 + 0.5 * (std::f64::consts::PI * (f - (HIGH_HZ - 1.0)) / 2.0).cos()
        } else {
            1.0
        };
        *b *= gain / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|z| z.re).collect()
}

fn local_peaks(x: &[f64]) -> Vec<usize> {
    (1..x.len().saturating_sub(1))
        .filter(|&i| x[i] > x[i - 1] && x[i] >= x[i + 1])
        .collect()
}

/// Approximate R-peak indices. Returns no beats for flat input or sampling
/// rates outside 100..=1000 Hz.
pub fn detect_qrs(record: &Record) -> BeatAnnotations {
    let fs = record.sampling_rate;
    let x = &record.samples;
    if !(100.0..=1000.0).contains(&fs) || x.len() < (fs * 0.5) as usize {
        return BeatAnnotations::default();
    }
    let filtered = band_pass(x, fs);
    let scale = filtered.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale < 1e-12 {
        return BeatAnnotations::default();
    }

    // five-point derivative, squaring, centered moving-window integration
    let n = filtered.len();
    let mut energy = vec![0.0; n];
    for i in 2..n.saturating_sub(2) {
        let d = (2.0 * filtered[i + 1] + filtered[i + 2] - filtered[i - 2] - 2.0 * filtered[i - 1])
            / 8.0
            * fs;
        energy[i] = d * d;
    }
    let w = ((WINDOW_S * fs) as usize).max(1);
    let mut integrated = vec![0.0; n];
    let mut acc = 0.0;
    for i in 0..n + w / 2 {
        if i < n {
            acc += energy[i];
        }
        if i >= w {
            acc -= energy[i - w];
        }
        if i >= w / 2 && i - w / 2 < n {
            integrated[i - w / 2] = acc / w as f64;
        }
    }

    let refractory = (REFRACTORY_S * fs) as usize;
    let learn = ((2.0 * fs) as usize).min(n);
    let peak_max = integrated[..learn].iter().fold(0.0_f64, |m, &v| m.max(v));
    let mut spk = 0.25 * peak_max;
    let mut npk = 0.5 * integrated[..learn].iter().sum::<f64>() / learn as f64;
    let threshold = |spk: f64, npk: f64| npk + 0.25 * (spk - npk);

    let candidates = local_peaks(&integrated);
    let mut qrs: Vec<usize> = Vec::new();
    let mut rr_mean: Option<f64> = None;
    let mut last_checked = 0usize;
    for (ci, &p) in candidates.iter().enumerate() {
        let v = integrated[p];
        if let Some(&last) = qrs.last() {
            if p - last < refractory {
                // keep the larger of two close peaks
                if v > integrated[last] && v > threshold(spk, npk) {
                    qrs.pop();
                } else {
                    continue;
                }
            }
        }
        // search back for a missed beat in a long gap
        if let (Some(&last), Some(rr)) = (qrs.last(), rr_mean) {
            if (p - last) as f64 > 1.66 * rr {
                let half = 0.5 * threshold(spk, npk);
                let missed = candidates[last_checked..ci]
                    .iter()
                    .copied()
                    .filter(|&c| c > last + refractory && c + refractory < p)
                    .filter(|&c| integrated[c] > half)
                    .max_by(|&a, &b| integrated[a].total_cmp(&integrated[b]));
                if let Some(m) = missed {
                    spk = 0.25 * integrated[m] + 0.75 * spk;
                    qrs.push(m);
                }
            }
        }
        if v > threshold(spk, npk) && v > 0.0 {
            spk = 0.125 * v + 0.875 * spk;
            if let Some(&last) = qrs.last() {
                let rr = (p - last) as f64;
                rr_mean = Some(rr_mean.map_or(rr, |m| 0.875 * m + 0.125 * rr));
            }
            qrs.push(p);
            last_checked = ci + 1;
        } else {
            npk = 0.125 * v + 0.875 * npk;
        }
    }

    // move each detection to the largest band-passed excursion nearby
    let reach = w;
    let refined: Vec<usize> = qrs
        .iter()
        .map(|&p| {
            let lo = p.saturating_sub(reach);
            let hi = (p + reach + 1).min(n);
            (lo..hi)
                .max_by(|&a, &b| filtered[a].abs().total_cmp(&filtered[b].abs()))
                .unwrap_or(p)
        })
        .collect();
    BeatAnnotations::new(refined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::synth::{synth_record, SynthConfig};

    #[test]
    fn flat_signal_has_no_beats() {
        let r = Record::new(vec![0.0; 3600], 360.0, 11, "flat").unwrap();
        assert!(detect_qrs(&r).is_empty());
    }

    #[test]
    fn finds_template_beats() {
        let (rec, truth) = synth_record(&SynthConfig::default()).unwrap();
        let found = detect_qrs(&rec);
        assert_eq!(found.len(), truth.len(), "{:?}", found);
        for (a, b) in found.indices().iter().zip(truth.indices()) {
            assert!(a.abs_diff(*b) <= 10, "{a} vs {b}");
        }
    }

    #[test]
    fn single_beat() {
        let (rec, truth) = synth_record(&SynthConfig {
            beats: 1,
            ..SynthConfig::default()
        })
        .unwrap();
        let found = detect_qrs(&rec);
        assert_eq!(found.len(), 1);
        assert!(found.indices()[0].abs_diff(truth.indices()[0]) <= 10);
    }
}
