//! Writes a small two-channel format-212 record and reads it back.
//!
//! ```text
//! cargo run --example read_wfdb [record.hea]
//! ```
//!
//! With a path, reads that header and its data file instead (for example a
//! record from the MIT-BIH Arrhythmia Database).

use std::fs;
use std::path::PathBuf;

use rvp::io::wfdb::{pack_212, parse_header, read_wfdb_212};

fn main() -> rvp::Result<()> {
    let hea = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let dir = std::env::temp_dir().join("rvp_wfdb_example");
            fs::create_dir_all(&dir)?;
            let frames = 720;
            let mut raw = Vec::with_capacity(2 * frames);
            for t in 0..frames {
                let phase = t as f64 / 360.0 * std::f64::consts::TAU;
                raw.push(1024 + (200.0 * phase.sin()) as i16);
                raw.push((100.0 * phase.cos()) as i16);
            }
            fs::write(dir.join("demo.dat"), pack_212(&raw))?;
            fs::write(
                dir.join("demo.hea"),
                format!(
                    "demo 2 360 {frames}\n\
                     demo.dat 212 200 11 1024 0 0 0 MLII\n\
                     demo.dat 212 200 11 0 0 0 0 V5\n"
                ),
            )?;
            dir.join("demo.hea")
        }
    };
    let header = parse_header(&fs::read_to_string(&hea)?)?;
    println!(
        "{}: {} signals at {} Hz",
        header.name,
        header.signals.len(),
        header.sampling_rate
    );
    let records = read_wfdb_212(&hea, hea.with_file_name(&header.signals[0].file))?;
    for r in &records {
        let (lo, hi) = r
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        println!(
            "  {:<12} {} samples, {} bits, range [{lo:.3}, {hi:.3}]",
            r.name,
            r.len(),
            r.resolution_bits
        );
    }
    Ok(())
}
