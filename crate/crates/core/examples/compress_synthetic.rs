//! Compresses a synthetic ECG in both modes and decodes the stream.
//!
//! ```text
//! cargo run --release --example compress_synthetic
//! ```

use rvp::codec::{decode_record, encode_record, EncoderConfig, Mode};
use rvp::io::synth::{synth_record, SynthConfig};
use rvp::metrics::compression_report;

fn main() -> rvp::Result<()> {
    let (record, peaks) = synth_record(&SynthConfig {
        beats: 40,
        rr_jitter: 0.05,
        shape_jitter: 0.05,
        noise: 0.01,
        wander: 0.1,
        seed: 3,
        ..SynthConfig::default()
    })?;
    println!("{} samples, {} beats", record.len(), peaks.len());

    for mode in [Mode::Basic, Mode::Aligned] {
        let config = EncoderConfig {
            mode,
            ..EncoderConfig::default()
        };
        let encoded = encode_record(&record.samples, peaks.indices(), &config)?;
        let report = compression_report(
            &record.samples,
            &encoded,
            record.resolution_bits,
            record.sampling_rate,
            peaks.indices(),
        )?;
        println!(
            "{mode:>7}: {} bytes, CR {:.2}, PRD {:.2}, PRDN {:.2} ({}), WWPRD {:.2} ({})",
            encoded.bytes.len(),
            report.cr,
            report.prd,
            report.prdn,
            report.prdn_class,
            report.wwprd,
            report.wwprd_class
        );

        let decoded = decode_record(&encoded.bytes)?;
        assert_eq!(decoded.samples, encoded.decoded.samples);
    }
    Ok(())
}
