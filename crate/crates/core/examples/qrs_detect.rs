//! QRS detection on a noisy synthetic record, scored against the truth.
//!
//! ```text
//! cargo run --release --example qrs_detect [noise]
//! ```

use rvp::io::qrs::detect_qrs;
use rvp::io::synth::{synth_record, SynthConfig};

fn main() -> rvp::Result<()> {
    let noise: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let (record, truth) = synth_record(&SynthConfig {
        beats: 100,
        rr_jitter: 0.15,
        shape_jitter: 0.1,
        noise,
        wander: 0.2,
        seed: 11,
        ..SynthConfig::default()
    })?;
    let found = detect_qrs(&record);

    let tol = (0.05 * record.sampling_rate) as usize;
    let hits = truth
        .indices()
        .iter()
        .filter(|&&t| found.indices().iter().any(|&f| f.abs_diff(t) <= tol))
        .count();
    println!("noise {noise}: {} true beats, {} detected", truth.len(), found.len());
    println!(
        "sensitivity {:.1} %, positive predictivity {:.1} %",
        100.0 * hits as f64 / truth.len() as f64,
        100.0 * hits as f64 / found.len().max(1) as f64
    );
    Ok(())
}
