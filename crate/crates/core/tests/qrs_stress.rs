use rvp::io::qrs::detect_qrs;
use rvp::io::synth::{synth_record, SynthConfig};

fn score(noise: f64, seed: u64) -> (usize, usize, usize) {
    let (rec, truth) = synth_record(&SynthConfig {
        beats: 100,
        rr_jitter: 0.15,
        shape_jitter: 0.1,
        noise,
        wander: 0.2,
        seed,
        ..SynthConfig::default()
    })
    .unwrap();
    let found = detect_qrs(&rec);
    let tol = 18;
    let hits = truth
        .indices()
        .iter()
        .filter(|&&t| found.indices().iter().any(|&f| f.abs_diff(t) <= tol))
        .count();
    (truth.len(), found.len(), hits)
}

#[test]
fn hundred_noisy_beats() {
    for seed in 0..5 {
        let (n, found, hits) = score(0.05, seed);
        assert!(hits >= n - 1, "seed {seed}: {hits}/{n}");
        assert!(found <= n + 1, "seed {seed}: {found} detections");
    }
}

#[test]
fn heavier_noise_degrades_gracefully() {
    let (n, found, hits) = score(0.15, 9);
    assert!(hits as f64 >= 0.95 * n as f64, "{hits}/{n}");
    assert!(found as f64 <= 1.05 * n as f64);
}
