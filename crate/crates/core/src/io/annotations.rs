//! QRS peak indices: CSV with one integer per line, or WFDB `.atr` files.

use std::fs;
use std::path::Path;

use super::BeatAnnotations;
use crate::error::{Error, Result};

pub fn parse_annotations(text: &str, path: &Path) -> Result<BeatAnnotations> {
    let mut indices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or(line).trim();
        let v: usize = field.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("'{field}' is not a sample index"),
        })?;
        indices.push(v);
    }
    Ok(BeatAnnotations::new(indices))
}

pub fn read_annotations_csv(path: impl AsRef<Path>) -> Result<BeatAnnotations> {
    let path = path.as_ref();
    parse_annotations(&fs::read_to_string(path)?, path)
}

pub fn write_annotations_csv(path: impl AsRef<Path>, ann: &BeatAnnotations) -> Result<()> {
    let text: String = ann.indices().iter().map(|i| format!("{i}\n")).collect();
    fs::write(path, text)?;
    Ok(())
}

/// Annotation codes of the MIT format that mark a QRS complex.
const BEAT_CODES: [u16; 19] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 25, 30, 34, 35, 37, 38];
const SKIP: u16 = 59;
const NUM: u16 = 60;
const SUB: u16 = 61;
const CHN: u16 = 62;
const AUX: u16 = 63;

/// Beat positions from a WFDB annotation file in MIT format (e.g. the `atr`
/// files of the MIT-BIH databases). Non-beat annotations are skipped.
pub fn parse_atr(bytes: &[u8]) -> Result<BeatAnnotations> {
    let truncated = || Error::TruncatedData("annotation file ends inside a record".into());
    let word = |i: usize| -> Result<u16> {
        bytes
            .get(i..i + 2)
            .map(|b| u16::from_le_bytes([b[0], b[1]]))
            .ok_or_else(truncated)
    };
    let mut time: i64 = 0;
    let mut beats = Vec::new();
    let mut i = 0;
    while i + 1 < bytes.len() {
        let w = word(i)?;
        i += 2;
        let (code, value) = (w >> 10, w & 0x03FF);
        match code {
            0 if value == 0 => break,
            SKIP => {
                let hi = word(i)? as u32;
                let lo = word(i + 2)? as u32;
                time += ((hi << 16) | lo) as i32 as i64;
                i += 4;
            }
            NUM | SUB | CHN => {}
            AUX => i += (value as usize).div_ceil(2) * 2,
            _ => {
                time += value as i64;
                if BEAT_CODES.contains(&code) {
                    let t = usize::try_from(time).map_err(|_| {
                        Error::TruncatedData(format!("annotation at negative time {time}"))
                    })?;
                    beats.push(t);
                }
            }
        }
    }
    Ok(BeatAnnotations::new(beats))
}

/// Reads `.atr` files in MIT format and anything else as CSV.
pub fn read_annotations(path: impl AsRef<Path>) -> Result<BeatAnnotations> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some("atr") => parse_atr(&fs::read(path)?),
        _ => read_annotations_csv(path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ann(code: u16, dt: u16) -> [u8; 2] {
        ((code << 10) | dt).to_le_bytes()
    }

    #[test]
    fn mit_format() {
        let mut b = Vec::new();
        b.extend(ann(28, 0)); // rhythm change at 0
        b.extend(ann(AUX, 3));
        b.extend(b"(N\0\0");
        b.extend(ann(1, 77)); // normal beat at 77
        b.extend(ann(SUB, 1));
        b.extend(ann(5, 300)); // PVC at 377
        b.extend(ann(SKIP, 0));
        b.extend(0u16.to_le_bytes());
        b.extend(2000u16.to_le_bytes());
        b.extend(ann(14, 10)); // noise at 2387, not a beat
        b.extend(ann(1, 13)); // beat at 2400
        b.extend(ann(0, 0));
        b.extend(ann(1, 5)); // after the end marker
        assert_eq!(parse_atr(&b).unwrap().indices(), &[77, 377, 2400]);
        // cut inside the SKIP interval
        assert!(parse_atr(&b[..18]).is_err());
    }

    #[test]
    fn sorted_and_deduplicated() {
        let p = Path::new("a.csv");
        assert_eq!(parse_annotations("100\n500\n900", p).unwrap().indices(), &[100, 500, 900]);
        assert_eq!(parse_annotations("900\n100\n500\n", p).unwrap().indices(), &[100, 500, 900]);
        assert_eq!(parse_annotations("100\n100\n7\n", p).unwrap().indices(), &[7, 100]);
        assert!(matches!(
            parse_annotations("1\n-4\n", p),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
