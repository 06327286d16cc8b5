//! One sample per line, with an optional `# rate=<Hz> bits=<n>` header.
//!
//! Lines of the form `index,value` are accepted; the last field is the
//! sample. Empty lines and further `#` lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Record, DEFAULT_BITS, DEFAULT_RATE};
use crate::error::{Error, Result};

fn parse_header(line: &str, path: &Path, lineno: usize) -> Result<Option<(f64, u32)>> {
    let body = line.trim_start_matches('#').trim();
    if !body.contains('=') {
        return Ok(None);
    }
    let mut rate = DEFAULT_RATE;
    let mut bits = DEFAULT_BITS;
    for field in body.split_whitespace() {
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            message,
        };
        match field.split_once('=') {
            Some(("rate", v)) => {
                rate = v.parse().map_err(|_| err(format!("bad rate '{v}'")))?;
            }
            Some(("bits", v)) => {
                bits = v.parse().map_err(|_| err(format!("bad bits '{v}'")))?;
            }
            _ => return Err(err(format!("unknown header field '{field}'"))),
        }
    }
    Ok(Some((rate, bits)))
}

/// Parses CSV text; `path` is only used in error messages.
pub fn parse_csv(text: &str, path: &Path) -> Result<Record> {
    let mut rate = DEFAULT_RATE;
    let mut bits = DEFAULT_BITS;
    let mut samples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if samples.is_empty() {
                if let Some((r, b)) = parse_header(line, path, lineno)? {
                    rate = r;
                    bits = b;
                }
            }
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            message: format!("'{field}' is not a number"),
        })?;
        samples.push(v);
    }
    if samples.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Record::new(samples, rate, bits, name)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Record> {
    let path = path.as_ref();
    parse_csv(&fs::read_to_string(path)?, path)
}

/// CSV text for `record`. Samples use the shortest representation that
/// parses back to the same value.
pub fn format_csv(record: &Record) -> String {
    let mut out = String::with_capacity(record.len() * 12);
    let _ = writeln!(
        out,
        "# rate={} bits={}",
        record.sampling_rate, record.resolution_bits
    );
    for v in &record.samples {
        let _ = writeln!(out, "{v:?}");
    }
    out
}

pub fn write_csv(path: impl AsRef<Path>, record: &Record) -> Result<()> {
    fs::write(path, format_csv(record))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("x.csv")
    }

    #[test]
    fn defaults_and_header() {
        let text: String = (0..300).map(|i| format!("{}\n", i as f64 * 0.5)).collect();
        let r = parse_csv(&text, p()).unwrap();
        assert_eq!(r.len(), 300);
        assert_eq!(r.sampling_rate, 360.0);
        assert_eq!(r.resolution_bits, 11);
        let r = parse_csv("# rate=250 bits=12\n1\n2\n", p()).unwrap();
        assert_eq!((r.sampling_rate, r.resolution_bits), (250.0, 12));
        let r = parse_csv("0,1.5\n1,-2\n", p()).unwrap();
        assert_eq!(r.samples, vec![1.5, -2.0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "1\n2\n3\n4\n5\n6\nabc\n8\n";
        match parse_csv(text, p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_csv("\n# rate=1 bits=2\n", p()), Err(Error::EmptyFile(_))));
    }

    #[test]
    fn round_trip_is_exact() {
        let samples = vec![0.1, -1.0 / 3.0, 1e-300, 123456.789, std::f64::consts::PI];
        let r = Record::new(samples, 500.0, 16, "x").unwrap();
        let back = parse_csv(&format_csv(&r), p()).unwrap();
        assert_eq!(back.samples, r.samples);
        assert_eq!(back.sampling_rate, 500.0);
        assert_eq!(back.resolution_bits, 16);
    }
}
