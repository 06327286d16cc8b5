#![allow(dead_code)]

use rvp::codec::CompressedRecord;

/// Size of a compressed stream from the field widths of the file layout
/// alone: magic, a 30 x 3 table of 4-bit multiplicities, a 16-bit beat count,
/// five f32 scalars, a mode bit, then per beat 6 + 16 + 8 + 8 bits and, for
/// a modelled beat, an 8-bit norm, 4 + 4 bits per pole and 7 + 7 bits per
/// coefficient.
pub fn expected_bits(record: &CompressedRecord) -> usize {
    let header = 32 + 30 * 3 * 4 + 16 + 5 * 32 + 1;
    let rows = &record.header.architecture;
    let beat_bits = |b: &rvp::codec::format::BeatPayload| {
        let fixed = 6 + 16 + 8 + 8;
        match &b.model {
            None => fixed,
            Some(m) => {
                let row = &rows[m.dim - 1];
                let n = row.len();
                let total: usize = row.iter().sum();
                fixed + 8 + 8 * n + 14 * total
            }
        }
    };
    header
        + record.template.iter().map(beat_bits).sum::<usize>()
        + record.beats.iter().map(beat_bits).sum::<usize>()
}
