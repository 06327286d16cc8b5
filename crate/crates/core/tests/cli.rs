use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rvp::io::annotations::write_annotations_csv;
use rvp::io::csv::{read_csv, write_csv};
use rvp::io::synth::{synth_record, SynthConfig};
use rvp::io::wfdb::pack_212;
use rvp::metrics::REPORT_FIELDS;

fn rvp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvp"))
        .args(args)
        .env_remove("RVP_LOG")
        .output()
        .expect("binary runs")
}

fn fixture(dir: &Path) -> (String, String) {
    let (rec, ann) = synth_record(&SynthConfig {
        beats: 6,
        noise: 0.01,
        seed: 4,
        ..SynthConfig::default()
    })
    .unwrap();
    let sig = dir.join("sig.csv");
    let ann_path = dir.join("ann.csv");
    write_csv(&sig, &rec).unwrap();
    write_annotations_csv(&ann_path, &ann).unwrap();
    (sig.display().to_string(), ann_path.display().to_string())
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let line = text.lines().next().expect("one report line");
    serde_json::from_str(line).unwrap()
}

const QUICK: [&str; 4] = ["--swarm", "6", "--iters", "3"];

#[test]
fn compress_decompress_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let (sig, ann) = fixture(dir.path());
    let out = dir.path().join("a.rvp");
    let report = dir.path().join("report.json");
    let mut args = vec!["compress", &sig, "-o"];
    let out_s = s(&out);
    let report_s = s(&report);
    args.extend([out_s.as_str(), "--annotations", &ann, "--report", &report_s]);
    args.extend(QUICK);
    let r = rvp(&args);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let v = json(&r);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    let mut expected = REPORT_FIELDS.to_vec();
    expected.sort_unstable();
    assert_eq!(keys, expected);
    assert_eq!(fs::read_to_string(&report).unwrap(), String::from_utf8(r.stdout).unwrap());

    // same seed, same bytes
    let again = dir.path().join("b.rvp");
    let again_s = s(&again);
    let mut args2 = args.clone();
    args2[3] = &again_s;
    assert!(rvp(&args2).status.success());
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());

    let csv = dir.path().join("d.csv");
    let r = rvp(&["decompress", &out_s, "-o", &s(&csv)]);
    assert!(r.status.success());
    assert!(r.stdout.is_empty());
    let decoded = rvp::codec::decode_record(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(read_csv(&csv).unwrap().samples, decoded.samples);

    let r = rvp(&["inspect", &out_s]);
    assert!(r.status.success());
    let v = json(&r);
    assert_eq!(v["beat_count"], 6);
    assert_eq!(v["mode"], "basic");
    assert_eq!(v["bits"], decoded.record.bit_len().unwrap());
    let hist: u64 = v["dim_histogram"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(hist, 6);
    assert!(String::from_utf8_lossy(&r.stderr).contains("dim"));

    let r = rvp(&["evaluate", &sig, &sig]);
    assert!(r.status.success());
    let v = json(&r);
    assert_eq!(v["prd"], 0.0);
    assert_eq!(v["prdn"], 0.0);
    assert_eq!(v["wwprd"], 0.0);
    assert_eq!(v["prdn_class"], "Excellent");
    assert_eq!(v["wwprd_class"], "Excellent");

    let r = rvp(&["evaluate", &sig, &s(&csv)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(r.stdout.is_empty());
    let r = rvp(&["evaluate", &sig, &s(&csv), "--truncate", "--csv"]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), REPORT_FIELDS.join(","));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (sig, ann) = fixture(dir.path());
    let out = s(&dir.path().join("x.rvp"));

    let r = rvp(&["compress", &sig, "-o", &out, "--annotations", &ann, "--alpha", "0"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(r.stdout.is_empty());
    assert!(!Path::new(&out).exists());

    let r = rvp(&["compress", &sig, "-o", &out]);
    assert_eq!(r.status.code(), Some(2), "annotations are required");

    let r = rvp(&["compress", "missing.csv", "-o", &out, "--detect"]);
    assert_eq!(r.status.code(), Some(1));

    let bad = dir.path().join("bad.rvp");
    fs::write(&bad, b"NOPE and more").unwrap();
    assert_eq!(rvp(&["inspect", &s(&bad)]).status.code(), Some(2));
    assert_eq!(rvp(&["decompress", &s(&bad), "-o", &out]).status.code(), Some(2));

    assert_eq!(rvp(&["compress"]).status.code(), Some(2));
}

#[test]
fn wfdb_input_with_detection() {
    let dir = tempfile::tempdir().unwrap();
    let (rec, _) = synth_record(&SynthConfig {
        beats: 8,
        seed: 5,
        ..SynthConfig::default()
    })
    .unwrap();
    // channel 1 carries the ECG, channel 0 is flat
    let mut raw = Vec::with_capacity(2 * rec.len());
    for v in &rec.samples {
        raw.push(1024);
        raw.push((v * 200.0).round() as i16);
    }
    fs::write(dir.path().join("r.dat"), pack_212(&raw)).unwrap();
    fs::write(
        dir.path().join("r.hea"),
        format!("r 2 360 {}\nr.dat 212 200 11 1024\nr.dat 212 200 11 0\n", rec.len()),
    )
    .unwrap();
    let hea = s(&dir.path().join("r.hea"));
    let out = s(&dir.path().join("r.rvp"));
    let mut args = vec!["compress", &hea, "-o", &out, "--detect", "--channel", "1", "--csv"];
    args.extend(QUICK);
    let r = rvp(&args);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(String::from_utf8(r.stdout).unwrap().lines().count(), 2);
    let d = rvp::codec::decode_record(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(d.beats.len(), 8);

    args[6] = "2";
    assert_eq!(rvp(&args).status.code(), Some(2));
}

#[test]
fn parallel_flag_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (sig, ann) = fixture(dir.path());
    let a = s(&dir.path().join("p1.rvp"));
    let b = s(&dir.path().join("p2.rvp"));
    for out in [&a, &b] {
        let mut args = vec!["compress", &sig, "-o", out, "--annotations", &ann, "--parallel"];
        args.extend(QUICK);
        assert!(rvp(&args).status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
