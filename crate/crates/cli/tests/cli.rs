//! External-contract tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

use spikeline_core::qnet::save_qnet;
use spikeline_core::wav::write_wav_mono16;
use spikeline_core::{QuantLayer, QuantNetwork};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spikeline"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_tone(path: &Path, freq_hz: f64, amplitude: f64) {
    let samples: Vec<f64> = (0..48_000)
        .map(|i| amplitude * (2.0 * std::f64::consts::PI * freq_hz * i as f64 / 48_000.0).sin())
        .collect();
    write_wav_mono16(path, &samples, 48_000.0).unwrap();
}

/// Two-class detector: class 0 watches bands 7..=9, class 1 bands 10..=12.
fn write_detector_qnet(path: &Path) {
    let mut weights = vec![0i8; 2 * 16];
    weights[7..=9].fill(127); // class 0, bands 7..=9
    weights[16 + 10..=16 + 12].fill(127); // class 1, bands 10..=12
    let readout =
        QuantLayer::new(2, 16, weights, vec![1; 2], vec![1; 2], vec![400; 2], 15).unwrap();
    let net = QuantNetwork::new(vec![], readout, 0.010).unwrap();
    save_qnet(&net, path).unwrap();
}

#[test]
fn encode_writes_evt_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("tone.wav");
    let evt = dir.path().join("tone.evt");
    write_tone(&wav, 1007.0, 0.9);

    let out = run(&["encode", "--in", wav.to_str().unwrap(), "--out", evt.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&evt).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# channels=16 dt_ms=10");
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "line `{line}`");
        fields.iter().for_each(|f| {
            f.parse::<u64>().unwrap_or_else(|_| panic!("non-integer field in `{line}`"));
        });
    }
    assert!(text.ends_with('\n'));
}

#[test]
fn missing_input_fails_with_one_line_error() {
    let out = run(&["encode", "--in", "/no/such.wav", "--out", "/tmp/x.evt"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().count(), 1, "stderr: {stderr}");
    assert!(stderr.starts_with("error: "), "stderr: {stderr}");
    assert!(stderr.contains("/no/such.wav"));
}

#[test]
fn usage_error_prints_help() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "stderr: {stderr}");
}

#[test]
fn build_quantize_infer_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let fnet = dir.path().join("model.fnet.json");
    let qnet = dir.path().join("model.qnet");
    let report = dir.path().join("quant.txt");
    let wav = dir.path().join("tone.wav");
    let evt = dir.path().join("tone.evt");
    let traces = dir.path().join("traces.csv");
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "[afe]\ngain_db = 12\n").unwrap();

    let out = run(&["build-net", "--seed", "7", "--out", fnet.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("31x16 31x31 31x31 4x31"));

    let out = run(&[
        "quantize",
        "--in",
        fnet.to_str().unwrap(),
        "--out",
        qnet.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&report).unwrap().contains("tau_s -> dash"));

    write_tone(&wav, 1007.0, 0.5);
    let out = run(&[
        "encode",
        "--in",
        wav.to_str().unwrap(),
        "--out",
        evt.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "infer",
        "--net",
        qnet.to_str().unwrap(),
        "--raster",
        evt.to_str().unwrap(),
        "--traces",
        traces.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("decision=")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("class_spike_counts=")), "{text}");

    let trace_text = std::fs::read_to_string(&traces).unwrap();
    assert!(trace_text.starts_with("step,channel,v_mem\n"));
    // 100 steps x 4 readout channels plus the header.
    assert_eq!(trace_text.lines().count(), 1 + 100 * 4);
}

#[test]
fn eval_reports_accuracy_and_confusion() {
    let dir = tempfile::tempdir().unwrap();
    let qnet = dir.path().join("detector.qnet");
    write_detector_qnet(&qnet);

    // Band 8 center 1007 Hz (class 0), band 11 center 3376 Hz (class 1).
    let mut manifest_body = String::from("path,label,split\n");
    for (i, (freq, label)) in [(1007.0, 0), (3376.1, 1), (1007.0, 0), (3376.1, 1)]
        .iter()
        .enumerate()
    {
        let wav = dir.path().join(format!("tone{i}.wav"));
        write_tone(&wav, *freq, 0.5);
        manifest_body.push_str(&format!("{},{label},test\n", wav.display()));
    }
    let manifest = dir.path().join("manifest.csv");
    std::fs::write(&manifest, manifest_body).unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "[afe]\ngain_db = 12\n").unwrap();
    let confusion = dir.path().join("confusion.csv");

    let out = run(&[
        "eval",
        "--net",
        qnet.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
        "--afe",
        cfg.to_str().unwrap(),
        "--split",
        "test",
        "--confusion",
        confusion.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "accuracy=1"), "{text}");

    let confusion_text = std::fs::read_to_string(&confusion).unwrap();
    assert_eq!(confusion_text, "2,0\n0,2\n");
}

#[test]
fn eval_empty_split_reports_nan() {
    let dir = tempfile::tempdir().unwrap();
    let qnet = dir.path().join("detector.qnet");
    write_detector_qnet(&qnet);
    let manifest = dir.path().join("manifest.csv");
    std::fs::write(&manifest, "path,label,split\n").unwrap();

    let out = run(&[
        "eval",
        "--net",
        qnet.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().any(|l| l == "accuracy=NaN"));
}

#[test]
fn loss_eval_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces.csv");
    std::fs::write(
        &traces,
        "step,channel,v_mem\n0,0,0\n0,1,1\n1,0,2\n1,1,0\n2,0,1\n2,1,0\n",
    )
    .unwrap();

    let out = run(&[
        "loss-eval",
        "--traces",
        traces.to_str().unwrap(),
        "--target-class",
        "0",
        "--window-ms",
        "20",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let loss: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("loss="))
        .expect("loss line")
        .parse()
        .unwrap();
    assert!((loss - 1.0 / 3.0).abs() < 1e-12, "loss {loss}");
}

#[test]
fn bench_reports_throughput_above_realtime() {
    let out = run(&["bench", "--samples", "20", "--bins", "50"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("samples_per_s=")).expect("bench line");
    let realtime_factor: f64 = line
        .split_whitespace()
        .find_map(|f| f.strip_prefix("realtime_factor="))
        .expect("realtime_factor field")
        .parse()
        .unwrap();
    assert!(realtime_factor > 1.0, "{line}");
}
