//! Beat segmentation and the per-beat transforms applied before fitting.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Samples kept before each QRS peak when cutting beats.
pub const FIDUCIAL_OFFSET: usize = 130;
/// Shortest beat that is encoded on its own.
pub const MIN_BEAT_LEN: usize = 32;
/// Norm below which a corrected beat is stored as trend only.
pub const FLAT_NORM: f64 = 1e-10;

/// Beat boundaries `[start, end)` for peaks `annotations` in a record of
/// `len` samples. Beat `i` starts `FIDUCIAL_OFFSET` samples before peak `i`
/// (clamped to 0) and the last beat runs to the end of the record. A cut
/// that would leave a beat shorter than [`MIN_BEAT_LEN`] is skipped, so the
/// preceding beat keeps those samples and the output stays contiguous. The
/// last beat always has more than 130 samples since its peak lies inside
/// the record.
pub fn segment_bounds(annotations: &[usize], len: usize) -> Result<Vec<(usize, usize)>> {
    if annotations.is_empty() {
        return Err(Error::NoBeats);
    }
    if let Some(&bad) = annotations.iter().find(|&&q| q >= len) {
        return Err(Error::AnnotationOutOfRange { index: bad, len });
    }
    let mut cuts: Vec<usize> = Vec::with_capacity(annotations.len());
    for &q in annotations {
        let c = q.saturating_sub(FIDUCIAL_OFFSET);
        match cuts.last() {
            Some(&prev) if c < prev + MIN_BEAT_LEN => {
                log::warn!("annotation at {q} leaves a beat shorter than {MIN_BEAT_LEN}; merged");
            }
            _ => cuts.push(c),
        }
    }
    if len - cuts[0] < MIN_BEAT_LEN {
        return Err(Error::NoBeats);
    }
    let mut bounds: Vec<(usize, usize)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    bounds.push((*cuts.last().unwrap(), len));
    Ok(bounds)
}

/// Slices of `samples` cut per [`segment_bounds`].
pub fn segment(samples: &[f64], annotations: &[usize]) -> Result<Vec<Vec<f64>>> {
    Ok(segment_bounds(annotations, samples.len())?
        .into_iter()
        .map(|(a, b)| samples[a..b].to_vec())
        .collect())
}

/// The straight line through the first and last sample, evaluated at every
/// index.
pub fn linear_trend(f0: f64, f_last: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![f0];
    }
    let slope = (f_last - f0) / (m - 1) as f64;
    (0..m)
        .map(|i| if i == m - 1 { f_last } else { f0 + i as f64 * slope })
        .collect()
}

/// Subtracts the line through the endpoints. Returns the corrected beat and
/// the original endpoints.
pub fn linear_correct(samples: &[f64]) -> (Vec<f64>, f64, f64) {
    let f0 = samples[0];
    let f_last = samples[samples.len() - 1];
    let trend = linear_trend(f0, f_last, samples.len());
    let corrected = samples.iter().zip(&trend).map(|(s, t)| s - t).collect();
    (corrected, f0, f_last)
}

pub fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Unit-norm copy and the norm, or `None` when the beat is flat.
pub fn normalize(corrected: &[f64]) -> Option<(Vec<f64>, f64)> {
    let norm = l2_norm(corrected);
    if norm < FLAT_NORM {
        return None;
    }
    Some((corrected.iter().map(|v| v / norm).collect(), norm))
}

/// Discrete periodic analytic signal `f + i H f`: negative-frequency bins
/// zeroed, positive bins doubled, DC and Nyquist kept.
pub fn analytic_extend(x: &[f64]) -> Vec<Complex64> {
    let m = x.len();
    if m == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(m).process(&mut buf);
    let half = m / 2;
    for (k, b) in buf.iter_mut().enumerate().skip(1) {
        if k < half || (k == half && m % 2 == 1) {
            *b *= 2.0;
        } else if k > half {
            *b = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.iter_mut().for_each(|b| *b *= scale);
    // the real part is exact up to rounding; restore it bit for bit
    for (b, &v) in buf.iter_mut().zip(x) {
        b.re = v;
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn cut_rule() {
        assert_eq!(segment_bounds(&[130, 430], 700).unwrap(), vec![(0, 300), (300, 700)]);
        assert_eq!(segment_bounds(&[50, 430], 700).unwrap(), vec![(0, 300), (300, 700)]);
        assert_eq!(segment_bounds(&[500], 700).unwrap(), vec![(370, 700)]);
        assert!(matches!(segment_bounds(&[], 700), Err(Error::NoBeats)));
        assert!(matches!(
            segment_bounds(&[700], 700),
            Err(Error::AnnotationOutOfRange { index: 700, len: 700 })
        ));
    }

    #[test]
    fn short_beats_merge() {
        assert_eq!(
            segment_bounds(&[130, 140, 430], 700).unwrap(),
            vec![(0, 300), (300, 700)]
        );
        assert_eq!(segment_bounds(&[130, 150], 700).unwrap(), vec![(0, 700)]);
        assert!(matches!(segment_bounds(&[10], 20), Err(Error::NoBeats)));
    }

    #[test]
    fn correction_zeroes_endpoints() {
        let x = [3.0, -1.0, 2.5, 7.0, 0.25];
        let (c, f0, fl) = linear_correct(&x);
        assert_eq!((f0, fl), (3.0, 0.25));
        assert_eq!(c[0], 0.0);
        assert_eq!(c[4], 0.0);
        let ramp: Vec<f64> = (0..50).map(|i| 0.5 * i as f64 - 2.0).collect();
        assert!(linear_correct(&ramp).0.iter().all(|v| v.abs() < 1e-12));
        let (c, f0, fl) = linear_correct(&[4.0; 9]);
        assert!(c.iter().all(|&v| v == 0.0));
        assert_eq!((f0, fl), (4.0, 4.0));
    }

    #[test]
    fn normalization() {
        let x: Vec<f64> = (0..40).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let (u, n) = normalize(&x).unwrap();
        assert!((l2_norm(&u) - 1.0).abs() < 1e-12);
        let scaled: Vec<f64> = x.iter().map(|v| 7.0 * v).collect();
        let (u7, n7) = normalize(&scaled).unwrap();
        assert!((n7 - 7.0 * n).abs() < 1e-12 * n7);
        assert!(u.iter().zip(&u7).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(normalize(&[0.0; 10]).is_none());
    }

    #[test]
    fn hilbert_pairs() {
        for m in [64, 65] {
            for k in [1, 3] {
                let x: Vec<f64> = (0..m).map(|i| (TAU * (k * i) as f64 / m as f64).cos()).collect();
                let a = analytic_extend(&x);
                for (i, z) in a.iter().enumerate() {
                    let s = (TAU * (k * i) as f64 / m as f64).sin();
                    assert!((z.im - s).abs() < 1e-12);
                }
            }
            let c = analytic_extend(&vec![2.5; m]);
            assert!(c.iter().all(|z| z.re == 2.5 && z.im.abs() < 1e-12));
        }
    }
}
