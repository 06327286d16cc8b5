//! Synthetic ECG built from Gaussian P, QRS and T waves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{BeatAnnotations, Record, DEFAULT_BITS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub amplitude: f64,
    /// Position in samples; within a record it is relative to the R peak.
    pub center: f64,
    /// Standard deviation in samples.
    pub width: f64,
}

impl Wave {
    pub fn new(amplitude: f64, center: f64, width: f64) -> Self {
        Self {
            amplitude,
            center,
            width,
        }
    }

    fn value(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        self.amplitude * (-0.5 * x * x).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatShape {
    pub p: Wave,
    pub qrs: Wave,
    pub t: Wave,
}

impl Default for BeatShape {
    /// A normal sinus beat at 360 Hz with the R peak at sample 130.
    fn default() -> Self {
        Self {
            p: Wave::new(0.15, 60.0, 10.0),
            qrs: Wave::new(1.0, 130.0, 5.0),
            t: Wave::new(0.3, 230.0, 20.0),
        }
    }
}

impl BeatShape {
    /// Random relative perturbation of every amplitude, center offset and
    /// width by up to `spread`.
    pub fn jittered<R: Rng>(&self, rng: &mut R, spread: f64) -> Self {
        let mut j = |w: Wave| {
            let mut f = || 1.0 + spread * (2.0 * rng.random::<f64>() - 1.0);
            Wave::new(w.amplitude * f(), w.center + (f() - 1.0) * 20.0, w.width * f())
        };
        Self {
            p: j(self.p),
            qrs: j(self.qrs),
            t: j(self.t),
        }
    }

    /// Same shape with every center moved by `offset` samples.
    pub fn shifted(&self, offset: f64) -> Self {
        let s = |w: Wave| Wave::new(w.amplitude, w.center + offset, w.width);
        Self {
            p: s(self.p),
            qrs: s(self.qrs),
            t: s(self.t),
        }
    }

    fn value(&self, t: f64) -> f64 {
        self.p.value(t) + self.qrs.value(t) + self.t.value(t)
    }
}

/// `m` samples of `shape`.
pub fn synth_beat(m: usize, shape: &BeatShape) -> Result<Vec<f64>> {
    for w in [shape.p, shape.qrs, shape.t] {
        if !(w.width > 0.0) {
            return Err(Error::InvalidParameter("wave widths must be positive".into()));
        }
        if !(0.0..m as f64).contains(&w.center) {
            return Err(Error::InvalidParameter(format!(
                "wave center {} outside [0, {m})",
                w.center
            )));
        }
    }
    Ok((0..m).map(|i| shape.value(i as f64)).collect())
}

/// A default beat perturbed by `rng`; equal seeds give equal beats.
pub fn synth_random_beat<R: Rng>(m: usize, rng: &mut R) -> Vec<f64> {
    let scale = m as f64 / 360.0;
    let base = BeatShape::default();
    let s = |w: Wave| Wave::new(w.amplitude, w.center * scale, w.width * scale);
    let shape = BeatShape {
        p: s(base.p),
        qrs: s(base.qrs),
        t: s(base.t),
    }
    .jittered(rng, 0.2);
    (0..m).map(|i| shape.value(i as f64)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub beats: usize,
    pub sampling_rate: f64,
    /// Mean R-R interval in samples.
    pub rr: f64,
    /// Uniform R-R variation, as a fraction of `rr`.
    pub rr_jitter: f64,
    /// Relative morphology variation between beats.
    pub shape_jitter: f64,
    /// Standard deviation of additive white noise.
    pub noise: f64,
    /// Slow sinusoidal baseline wander amplitude.
    pub wander: f64,
    pub shape: BeatShape,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            beats: 10,
            sampling_rate: 360.0,
            rr: 300.0,
            rr_jitter: 0.0,
            shape_jitter: 0.0,
            noise: 0.0,
            wander: 0.0,
            shape: BeatShape::default(),
            seed: 0,
        }
    }
}

/// A record and the true R-peak positions. Wave centers of `config.shape`
/// are taken relative to its QRS center.
pub fn synth_record(config: &SynthConfig) -> Result<(Record, BeatAnnotations)> {
    if config.beats == 0 || !(config.rr > 0.0) {
        return Err(Error::InvalidParameter("need beats and a positive R-R interval".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lead = 150.0_f64.max(config.rr * 0.5);
    let mut peaks = Vec::with_capacity(config.beats);
    let mut t = lead;
    for _ in 0..config.beats {
        peaks.push(t.round());
        let j = 1.0 + config.rr_jitter * (2.0 * rng.random::<f64>() - 1.0);
        t += config.rr * j;
    }
    let len = (peaks[peaks.len() - 1] + config.rr.max(lead)).ceil() as usize;
    let base = config.shape.shifted(-config.shape.qrs.center);
    let mut samples = vec![0.0; len];
    for &r in &peaks {
        let shape = base.jittered(&mut rng, config.shape_jitter).shifted(r);
        let lo = (r - config.rr).max(0.0) as usize;
        let hi = ((r + config.rr * 1.2) as usize).min(len);
        for (i, s) in samples.iter_mut().enumerate().take(hi).skip(lo) {
            *s += shape.value(i as f64);
        }
    }
    if config.wander > 0.0 {
        let period = 3.0 * config.sampling_rate;
        for (i, s) in samples.iter_mut().enumerate() {
            *s += config.wander * (std::f64::consts::TAU * i as f64 / period).sin();
        }
    }
    if config.noise > 0.0 {
        let normal = Normal::new(0.0, config.noise).expect("finite noise level");
        for s in samples.iter_mut() {
            *s += normal.sample(&mut rng);
        }
    }
    let record = Record::new(samples, config.sampling_rate, DEFAULT_BITS, "synthetic")?;
    Ok((record, BeatAnnotations::new(peaks.iter().map(|&p| p as usize).collect())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitudes_give_zero_beat() {
        let w = |c| Wave::new(0.0, c, 4.0);
        let shape = BeatShape {
            p: w(10.0),
            qrs: w(130.0),
            t: w(200.0),
        };
        assert!(synth_beat(300, &shape).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn qrs_only_peaks_at_center() {
        let w = |a, c| Wave::new(a, c, 5.0);
        let shape = BeatShape {
            p: w(0.0, 10.0),
            qrs: w(1.0, 130.0),
            t: w(0.0, 200.0),
        };
        let b = synth_beat(300, &shape).unwrap();
        let argmax = (0..b.len()).max_by(|&i, &j| b[i].total_cmp(&b[j])).unwrap();
        assert_eq!(argmax, 130);
        assert!(synth_beat(300, &shape.shifted(500.0)).is_err());
    }

    #[test]
    fn equal_seeds_equal_beats() {
        let a = synth_random_beat(280, &mut ChaCha8Rng::seed_from_u64(9));
        let b = synth_random_beat(280, &mut ChaCha8Rng::seed_from_u64(9));
        let c = synth_random_beat(280, &mut ChaCha8Rng::seed_from_u64(10));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn record_peaks_are_maxima() {
        let (rec, ann) = synth_record(&SynthConfig::default()).unwrap();
        assert_eq!(ann.len(), 10);
        for &p in ann.indices() {
            assert!(rec.samples[p] > rec.samples[p - 3] && rec.samples[p] > rec.samples[p + 3]);
        }
    }
}
