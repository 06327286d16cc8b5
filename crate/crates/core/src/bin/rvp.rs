//! `rvp`: compress, decompress, evaluate and inspect ECG records.
//!
//! Reports go to standard output, one JSON object per line (or CSV with
//! `--csv`); diagnostics go to standard error. Verbosity is set with
//! `RVP_LOG` (e.g. `RVP_LOG=debug`).
//!
//! Exit codes: 0 success, 1 I/O error, 2 invalid input or arguments,
//! 3 encoding failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rvp::codec::preprocess::segment_bounds;
use rvp::codec::{decode_record, encode_record, EncoderConfig, Mode};
use rvp::io::annotations::read_annotations;
use rvp::io::csv::{read_csv, write_csv};
use rvp::io::qrs::detect_qrs;
use rvp::io::wfdb::read_wfdb_212;
use rvp::io::{BeatAnnotations, Record, DEFAULT_BITS, DEFAULT_RATE};
use rvp::metrics::{compression_report, evaluate, evaluate_beats, QualityReport};
use rvp::swarm::SwarmParams;
use rvp::{Error, Result};

#[derive(Parser)]
#[command(name = "rvp", version, about = "Rational variable projection ECG codec")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a record (CSV or WFDB `.hea`) into an `.rvp` stream.
    Compress(CompressArgs),
    /// Decode an `.rvp` stream to CSV.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare an original and a reconstructed record.
    Evaluate(EvaluateArgs),
    /// Summarize an `.rvp` stream.
    Inspect {
        input: PathBuf,
        #[command(flatten)]
        out: ReportArgs,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Emit CSV instead of JSON lines.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct BeatArgs {
    /// Signal index within a WFDB record.
    #[arg(long, default_value_t = 0)]
    channel: usize,
    /// R-peak sample indices: a CSV file or a WFDB `.atr` file.
    #[arg(long, conflicts_with = "detect")]
    annotations: Option<PathBuf>,
    /// Locate R peaks with the built-in QRS detector.
    #[arg(long)]
    detect: bool,
}

#[derive(Args)]
struct CompressArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value = "basic")]
    mode: Mode,
    /// Weight of the error term in the beat cost, in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Swarm size.
    #[arg(long, default_value_t = 30)]
    swarm: usize,
    /// Swarm iterations per beat.
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Encode beats concurrently. Beats are then optimized without seeds
    /// from earlier beats, so the output differs from a serial run.
    #[arg(long)]
    parallel: bool,
    #[command(flatten)]
    beats: BeatArgs,
    #[command(flatten)]
    out: ReportArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    original: PathBuf,
    reconstructed: PathBuf,
    /// Cut both records to the shorter length.
    #[arg(long)]
    truncate: bool,
    /// Skip this many leading samples of the original, e.g. the samples
    /// before the first beat, which a compressed stream does not hold.
    #[arg(long, default_value_t = 0)]
    offset: usize,
    /// Compressed stream of the reconstruction, for the CR.
    #[arg(long)]
    compressed: Option<PathBuf>,
    #[command(flatten)]
    beats: BeatArgs,
    #[command(flatten)]
    out: ReportArgs,
}

fn read_record(path: &Path, channel: usize) -> Result<Record> {
    let is_wfdb = path.extension().is_some_and(|e| e == "hea");
    if !is_wfdb {
        if channel != 0 {
            return Err(Error::InvalidParameter(format!(
                "{} holds one channel, {channel} requested",
                path.display()
            )));
        }
        return read_csv(path);
    }
    let header = rvp::io::wfdb::parse_header(&fs::read_to_string(path)?)?;
    let dat = path.with_file_name(&header.signals[0].file);
    let mut records = read_wfdb_212(path, dat)?;
    if channel >= records.len() {
        return Err(Error::InvalidParameter(format!(
            "channel {channel} requested, record has {}",
            records.len()
        )));
    }
    Ok(records.swap_remove(channel))
}

fn beat_annotations(args: &BeatArgs, record: &Record) -> Result<Option<BeatAnnotations>> {
    if let Some(path) = &args.annotations {
        return Ok(Some(read_annotations(path)?));
    }
    if args.detect {
        let found = detect_qrs(record);
        log::info!("detected {} beats", found.len());
        return Ok(Some(found));
    }
    Ok(None)
}

fn emit_report(report: &QualityReport, out: &ReportArgs) -> Result<()> {
    let text = if out.csv {
        format!("{}\n{}\n", QualityReport::csv_header(), report.to_csv_row())
    } else {
        format!("{}\n", report.to_json())
    };
    if let Some(path) = &out.report {
        fs::write(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn compress(args: CompressArgs) -> Result<()> {
    let config = EncoderConfig {
        mode: args.mode,
        alpha: args.alpha,
        swarm: SwarmParams::default().with_size(args.swarm, args.iters),
        seed: args.seed,
        parallel: args.parallel,
    };
    config.validate()?;
    let record = read_record(&args.input, args.beats.channel)?;
    let ann = beat_annotations(&args.beats, &record)?.ok_or_else(|| {
        Error::InvalidParameter("compress needs --annotations or --detect".into())
    })?;
    let ann = ann.within(record.len());
    log::info!(
        "{}: {} samples, {} beats, mode {}",
        record.name,
        record.len(),
        ann.len(),
        config.mode
    );
    let encoded = encode_record(&record.samples, ann.indices(), &config)?;
    let report = compression_report(
        &record.samples,
        &encoded,
        record.resolution_bits,
        record.sampling_rate,
        ann.indices(),
    )?;
    log::info!("encoded samples {}..{}", encoded.span.0, encoded.span.1);
    fs::write(&args.output, &encoded.bytes)?;
    emit_report(&report, &args.out)
}

fn decompress(input: &Path, output: &Path) -> Result<()> {
    let decoded = decode_record(&fs::read(input)?)?;
    let record = Record::new(decoded.samples, DEFAULT_RATE, DEFAULT_BITS, "decoded")?;
    write_csv(output, &record)
}

fn evaluate_cmd(args: EvaluateArgs) -> Result<()> {
    let original = read_record(&args.original, args.beats.channel)?;
    let reconstructed = read_record(&args.reconstructed, 0)?;
    if args.offset >= original.len() {
        return Err(Error::InvalidParameter(format!(
            "offset {} beyond the {} samples of the original",
            args.offset,
            original.len()
        )));
    }
    let (mut f, mut g) = (original.samples[args.offset..].to_vec(), reconstructed.samples);
    if f.len() != g.len() {
        if !args.truncate {
            return Err(Error::LengthMismatch(f.len(), g.len()));
        }
        let n = f.len().min(g.len());
        f.truncate(n);
        g.truncate(n);
    }
    let cr = match &args.compressed {
        Some(path) => {
            let bits = rvp::codec::CompressedRecord::from_bytes(&fs::read(path)?)?.bit_len()?;
            rvp::metrics::compression_ratio(f.len(), original.resolution_bits, bits as u64)?
        }
        None => f64::NAN,
    };
    let report = match beat_annotations(&args.beats, &original)? {
        Some(ann) => {
            let shifted: Vec<usize> = ann
                .indices()
                .iter()
                .filter_map(|&i| i.checked_sub(args.offset))
                .filter(|&i| i < f.len())
                .collect();
            let bounds = segment_bounds(&shifted, f.len())?;
            evaluate_beats(&f, &g, &bounds, cr)?
        }
        None => evaluate(&f, &g, cr)?,
    };
    emit_report(&report, &args.out)
}

#[derive(Serialize)]
struct Inspection {
    mode: Mode,
    beat_count: usize,
    samples: usize,
    bits: usize,
    bytes: usize,
    template_dim: Option<usize>,
    dim_histogram: BTreeMap<usize, usize>,
}

fn inspect(input: &Path, out: &ReportArgs) -> Result<()> {
    let bytes = fs::read(input)?;
    let decoded = decode_record(&bytes)?;
    let record = &decoded.record;
    let mut dim_histogram = BTreeMap::new();
    for b in &decoded.beats {
        *dim_histogram.entry(b.dim).or_insert(0) += 1;
    }
    let info = Inspection {
        mode: record.header.mode,
        beat_count: record.beats.len(),
        samples: decoded.samples.len(),
        bits: record.bit_len()?,
        bytes: bytes.len(),
        template_dim: record.template.as_ref().map(|t| t.dim()),
        dim_histogram,
    };

    eprintln!(
        "{}: {} mode, {} beats, {} samples, {} bits",
        input.display(),
        info.mode,
        info.beat_count,
        info.samples,
        info.bits
    );
    let widest = info.dim_histogram.values().copied().max().unwrap_or(1);
    for (dim, count) in &info.dim_histogram {
        let bar = "#".repeat((count * 40).div_ceil(widest));
        eprintln!("  dim {dim:>2} {count:>6} {bar}");
    }

    let text = if out.csv {
        let mut s = String::from("dim,count\n");
        for (dim, count) in &info.dim_histogram {
            s.push_str(&format!("{dim},{count}\n"));
        }
        s
    } else {
        format!("{}\n", serde_json::to_string(&info).expect("summary serializes"))
    };
    if let Some(path) = &out.report {
        fs::write(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compress(args) => compress(args),
        Command::Decompress { input, output } => decompress(&input, &output),
        Command::Evaluate(args) => evaluate_cmd(args),
        Command::Inspect { input, out } => inspect(&input, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RVP_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rvp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
