//! Distortion measures and quality classes for a few degraded signals.
//!
//! ```text
//! cargo run --example metrics_report
//! ```

use rvp::io::synth::{synth_record, SynthConfig};
use rvp::metrics::{evaluate, regularity_analysis, QualityReport};

fn main() -> rvp::Result<()> {
    let (record, peaks) = synth_record(&SynthConfig {
        beats: 12,
        ..SynthConfig::default()
    })?;
    let f = &record.samples;

    let cases: Vec<(&str, Vec<f64>)> = vec![
        ("identical", f.clone()),
        ("scaled 0.95", f.iter().map(|v| 0.95 * v).collect()),
        ("offset 0.05", f.iter().map(|v| v + 0.05).collect()),
        (
            "smoothed",
            (0..f.len())
                .map(|i| {
                    let lo = i.saturating_sub(3);
                    let hi = (i + 4).min(f.len());
                    f[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
                })
                .collect(),
        ),
    ];
    println!("{:<12} {}", "case", QualityReport::csv_header());
    for (name, g) in &cases {
        // CR of 10 stands in for a real stream.
        let r = evaluate(f, g, 10.0)?;
        println!("{name:<12} {}", r.to_csv_row());
    }

    let beats: Vec<Vec<f64>> = peaks
        .indices()
        .iter()
        .map(|&p| f[p - 130..(p + 170).min(f.len())].to_vec())
        .collect();
    let reg = regularity_analysis(&beats, peaks.indices(), record.sampling_rate)?;
    println!("rho_xy {:.4}, sigma_rr {:.4} s", reg.rho_xy, reg.sigma_rr);
    Ok(())
}
