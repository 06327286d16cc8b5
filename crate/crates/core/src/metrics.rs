//! Distortion and compression measures.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codec::EncodedRecord;
use crate::error::{Error, Result};
use crate::wavelet::{wavelet_decompose_5, LEVELS};

/// Band weights for `d1..d5` and the level-5 approximation, in 27ths.
pub const WWPRD_WEIGHTS: [f64; LEVELS + 1] = [
    6.0 / 27.0,
    9.0 / 27.0,
    7.0 / 27.0,
    3.0 / 27.0,
    1.0 / 27.0,
    1.0 / 27.0,
];

fn same_len(f: &[f64], g: &[f64]) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch(f.len(), g.len()));
    }
    Ok(())
}

fn diff_norm(f: &[f64], g: &[f64]) -> f64 {
    f.iter().zip(g).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// `100 ‖f − f̃‖ / ‖f‖`.
pub fn prd(f: &[f64], g: &[f64]) -> Result<f64> {
    same_len(f, g)?;
    let den = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator { what: "PRD" });
    }
    Ok(100.0 * diff_norm(f, g) / den)
}

/// `100 ‖f − f̃‖ / ‖f − mean(f)‖`.
pub fn prdn(f: &[f64], g: &[f64]) -> Result<f64> {
    same_len(f, g)?;
    let m = mean(f);
    let den = f.iter().map(|v| (v - m).powi(2)).sum::<f64>().sqrt();
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator { what: "PRDN" });
    }
    Ok(100.0 * diff_norm(f, g) / den)
}

/// Weighted sum of per-band relative errors of the mean-removed signals.
pub fn wwprd(f: &[f64], g: &[f64]) -> Result<f64> {
    same_len(f, g)?;
    let (mf, mg) = (mean(f), mean(g));
    let f0: Vec<f64> = f.iter().map(|v| v - mf).collect();
    let g0: Vec<f64> = g.iter().map(|v| v - mg).collect();
    let a = wavelet_decompose_5(&f0)?;
    let b = wavelet_decompose_5(&g0)?;
    let scale = a.energy().sqrt();
    let mut total = 0.0;
    for (j, w) in WWPRD_WEIGHTS.iter().enumerate() {
        let den = a.bands[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(den > 1e-14 * scale) || den == 0.0 {
            return Err(Error::ZeroBandEnergy(j));
        }
        total += w * diff_norm(&a.bands[j], &b.bands[j]) / den;
    }
    Ok(100.0 * total)
}

/// Original size over compressed size.
pub fn compression_ratio(samples: usize, resolution_bits: u32, compressed_bits: u64) -> Result<f64> {
    if compressed_bits == 0 {
        return Err(Error::ZeroDenominator { what: "compression ratio" });
    }
    Ok(samples as f64 * resolution_bits as f64 / compressed_bits as f64)
}

pub fn quality_score(cr: f64, distortion: f64) -> f64 {
    cr / distortion
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QualityClass {
    Excellent,
    VeryGood,
    Good,
    NotBad,
    Bad,
}

impl fmt::Display for QualityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Prdn,
    Wwprd,
}

impl MetricKind {
    /// Upper edges of the first four classes.
    pub fn boundaries(self) -> [f64; 4] {
        match self {
            MetricKind::Prdn => [4.33, 7.8, 11.59, 22.5],
            MetricKind::Wwprd => [7.4, 15.45, 25.18, 37.4],
        }
    }
}

/// Quality class of a PRDN or WWPRD value; a value on a boundary gets the
/// better class.
pub fn classify(value: f64, kind: MetricKind) -> QualityClass {
    const CLASSES: [QualityClass; 4] = [
        QualityClass::Excellent,
        QualityClass::VeryGood,
        QualityClass::Good,
        QualityClass::NotBad,
    ];
    kind.boundaries()
        .iter()
        .zip(CLASSES)
        .find(|(&edge, _)| value <= edge)
        .map_or(QualityClass::Bad, |(_, c)| c)
}

/// The record-level summary emitted by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub prd: f64,
    pub prdn: f64,
    pub wwprd: f64,
    pub cr: f64,
    pub qs: f64,
    pub qsn: f64,
    pub prdn_class: QualityClass,
    pub wwprd_class: QualityClass,
    pub rho_xy: Option<f64>,
    pub sigma_rr: Option<f64>,
}

pub const REPORT_FIELDS: [&str; 10] = [
    "prd",
    "prdn",
    "wwprd",
    "cr",
    "qs",
    "qsn",
    "prdn_class",
    "wwprd_class",
    "rho_xy",
    "sigma_rr",
];

impl QualityReport {
    pub fn new(prd: f64, prdn: f64, wwprd: f64, cr: f64) -> Self {
        Self {
            prd,
            prdn,
            wwprd,
            cr,
            qs: quality_score(cr, prd),
            qsn: quality_score(cr, prdn),
            prdn_class: classify(prdn, MetricKind::Prdn),
            wwprd_class: classify(wwprd, MetricKind::Wwprd),
            rho_xy: None,
            sigma_rr: None,
        }
    }

    pub fn with_regularity(mut self, r: Regularity) -> Self {
        self.rho_xy = Some(r.rho_xy);
        self.sigma_rr = Some(r.sigma_rr);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn csv_header() -> String {
        REPORT_FIELDS.join(",")
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.prd,
            self.prdn,
            self.wwprd,
            self.cr,
            self.qs,
            self.qsn,
            self.prdn_class,
            self.wwprd_class,
            opt(self.rho_xy),
            opt(self.sigma_rr)
        )
    }
}

/// Whole-signal report.
pub fn evaluate(original: &[f64], reconstructed: &[f64], cr: f64) -> Result<QualityReport> {
    Ok(QualityReport::new(
        prd(original, reconstructed)?,
        prdn(original, reconstructed)?,
        wwprd(original, reconstructed)?,
        cr,
    ))
}

/// Report whose distortion figures are averages over beats `[start, end)`.
/// Beats on which a figure is undefined (zero energy) are left out of that
/// average.
pub fn evaluate_beats(
    original: &[f64],
    reconstructed: &[f64],
    bounds: &[(usize, usize)],
    cr: f64,
) -> Result<QualityReport> {
    same_len(original, reconstructed)?;
    if bounds.is_empty() {
        return Err(Error::NoBeats);
    }
    let mut sums = [0.0; 3];
    let mut counts = [0usize; 3];
    for &(a, b) in bounds {
        if b > original.len() || a >= b {
            return Err(Error::IndexOutOfRange {
                index: b,
                len: original.len(),
            });
        }
        let (f, g) = (&original[a..b], &reconstructed[a..b]);
        for (k, v) in [prd(f, g), prdn(f, g), wwprd(f, g)].into_iter().enumerate() {
            if let Ok(v) = v {
                sums[k] += v;
                counts[k] += 1;
            }
        }
    }
    let avg = |k: usize| {
        if counts[k] == 0 {
            f64::NAN
        } else {
            sums[k] / counts[k] as f64
        }
    };
    Ok(QualityReport::new(avg(0), avg(1), avg(2), cr))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regularity {
    /// Mean Pearson correlation between each beat and the average beat.
    pub rho_xy: f64,
    /// Population standard deviation of R-R intervals, in seconds.
    pub sigma_rr: f64,
}

/// Beats that form the average beat.
pub const AVERAGE_BEATS: usize = 30;

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Correlation of every beat with the average of the first
/// [`AVERAGE_BEATS`] beats (all zero-padded to the longest beat), and the
/// spread of the R-R intervals given by `r_peaks`.
pub fn regularity_analysis(
    beats: &[Vec<f64>],
    r_peaks: &[usize],
    sampling_rate: f64,
) -> Result<Regularity> {
    if beats.len() < 2 {
        return Err(Error::InsufficientBeats(beats.len()));
    }
    if r_peaks.len() < 2 {
        return Err(Error::InsufficientBeats(r_peaks.len()));
    }
    let len = beats.iter().map(Vec::len).max().unwrap_or(0);
    let k = beats.len().min(AVERAGE_BEATS);
    let mut avg = vec![0.0; len];
    for b in &beats[..k] {
        for (a, v) in avg.iter_mut().zip(b) {
            *a += v / k as f64;
        }
    }
    let mut padded = vec![0.0; len];
    let mut rhos = Vec::with_capacity(beats.len());
    for b in beats {
        padded[..b.len()].copy_from_slice(b);
        padded[b.len()..].iter_mut().for_each(|v| *v = 0.0);
        if let Some(r) = pearson(&padded, &avg) {
            rhos.push(r);
        }
    }
    let rho_xy = if rhos.is_empty() {
        f64::NAN
    } else {
        rhos.iter().sum::<f64>() / rhos.len() as f64
    };
    let rr: Vec<f64> = r_peaks
        .windows(2)
        .map(|w| (w[1] as f64 - w[0] as f64) / sampling_rate)
        .collect();
    let m = mean(&rr);
    let sigma_rr = (rr.iter().map(|v| (v - m).powi(2)).sum::<f64>() / rr.len() as f64).sqrt();
    Ok(Regularity { rho_xy, sigma_rr })
}

/// `QSN_aligned − QSN_basic`.
pub fn delta_qsn(aligned: &QualityReport, basic: &QualityReport) -> f64 {
    aligned.qsn - basic.qsn
}

/// Report for a compressed record: distortion averaged over the encoded
/// beats, CR over the encoded span, and regularity of the original beats
/// when there are enough of them.
pub fn compression_report(
    original: &[f64],
    encoded: &EncodedRecord,
    resolution_bits: u32,
    sampling_rate: f64,
    r_peaks: &[usize],
) -> Result<QualityReport> {
    let (lo, hi) = encoded.span;
    if hi > original.len() || hi - lo != encoded.decoded.samples.len() {
        return Err(Error::LengthMismatch(hi - lo, encoded.decoded.samples.len()));
    }
    let bounds: Vec<(usize, usize)> = encoded
        .beats
        .iter()
        .map(|b| (b.start - lo, b.start - lo + b.length))
        .collect();
    let cr = compression_ratio(hi - lo, resolution_bits, encoded.bit_len as u64)?;
    let report = evaluate_beats(&original[lo..hi], &encoded.decoded.samples, &bounds, cr)?;
    let beats: Vec<Vec<f64>> = encoded
        .beats
        .iter()
        .map(|b| original[b.start..b.start + b.length].to_vec())
        .collect();
    Ok(match regularity_analysis(&beats, r_peaks, sampling_rate) {
        Ok(r) => report.with_regularity(r),
        Err(_) => report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                (20.0 * t).sin() + 0.3 * (90.0 * t).cos() + 0.05 * ((i * 31) % 7) as f64
            })
            .collect()
    }

    #[test]
    fn prd_basics() {
        let f = wave(200);
        assert_eq!(prd(&f, &f).unwrap(), 0.0);
        assert_eq!(prdn(&f, &f).unwrap(), 0.0);
        let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = f.iter().map(|v| v / norm).collect();
        assert!((prd(&unit, &vec![0.0; 200]).unwrap() - 100.0).abs() < 1e-12);
        let g: Vec<f64> = f.iter().map(|v| v * 0.97 + 0.01).collect();
        let fs: Vec<f64> = f.iter().map(|v| v + 5.0).collect();
        let gs: Vec<f64> = g.iter().map(|v| v + 5.0).collect();
        assert!((prdn(&f, &g).unwrap() - prdn(&fs, &gs).unwrap()).abs() < 1e-10);
        assert!(matches!(prd(&[0.0; 3], &[1.0; 3]), Err(Error::ZeroDenominator { .. })));
        assert!(matches!(prdn(&[2.0; 3], &[1.0; 3]), Err(Error::ZeroDenominator { .. })));
    }

    #[test]
    fn wwprd_basics() {
        assert_eq!(WWPRD_WEIGHTS.iter().sum::<f64>(), 1.0);
        let f = wave(256);
        assert_eq!(wwprd(&f, &f).unwrap(), 0.0);
        assert!((wwprd(&f, &vec![0.0; 256]).unwrap() - 100.0).abs() < 1e-9);
        let g: Vec<f64> = f.iter().map(|v| v * 0.9 + 0.02).collect();
        let f3: Vec<f64> = f.iter().map(|v| v * -3.0).collect();
        let g3: Vec<f64> = g.iter().map(|v| v * -3.0).collect();
        assert!((wwprd(&f, &g).unwrap() - wwprd(&f3, &g3).unwrap()).abs() < 1e-9);
        assert!(matches!(wwprd(&[1.0; 64], &[0.0; 64]), Err(Error::ZeroBandEnergy(0))));
    }

    #[test]
    fn classes() {
        assert_eq!(classify(5.0, MetricKind::Prdn), QualityClass::VeryGood);
        assert_eq!(classify(40.0, MetricKind::Wwprd), QualityClass::Bad);
        assert_eq!(classify(0.0, MetricKind::Prdn), QualityClass::Excellent);
        assert_eq!(classify(4.33, MetricKind::Prdn), QualityClass::Excellent);
        assert_eq!(classify(22.5, MetricKind::Prdn), QualityClass::NotBad);
        assert_eq!(classify(15.45, MetricKind::Wwprd), QualityClass::VeryGood);
    }

    #[test]
    fn compression_ratio_arithmetic() {
        assert_eq!(compression_ratio(650_000, 11, 650_000).unwrap(), 11.0);
        assert_eq!(compression_ratio(100, 11, 1100).unwrap(), 1.0);
        assert!(compression_ratio(100, 11, 0).is_err());
    }

    #[test]
    fn report_identities_and_schema() {
        let r = QualityReport::new(2.5, 5.0, 9.0, 20.0);
        assert_eq!(r.qs, 20.0 / 2.5);
        assert_eq!(r.qsn, 20.0 / 5.0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = REPORT_FIELDS.to_vec();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(QualityReport::csv_header().split(',').count(), r.to_csv_row().split(',').count());
    }

    #[test]
    fn regularity() {
        let b = wave(120);
        let same = vec![b.clone(); 5];
        let r = regularity_analysis(&same, &[0, 300, 600, 900], 360.0).unwrap();
        assert!((r.rho_xy - 1.0).abs() < 1e-12);
        assert_eq!(r.sigma_rr, 0.0);
        assert!(matches!(
            regularity_analysis(&same[..1], &[0, 1], 360.0),
            Err(Error::InsufficientBeats(1))
        ));
        // beat orthogonal to the average after mean removal
        let n = 64;
        let c: Vec<f64> = (0..n).map(|i| (std::f64::consts::TAU * i as f64 / n as f64).cos()).collect();
        let s: Vec<f64> = (0..n).map(|i| (std::f64::consts::TAU * i as f64 / n as f64).sin()).collect();
        assert!(pearson(&c, &s).unwrap().abs() < 1e-12);
    }
}
