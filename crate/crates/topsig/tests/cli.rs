//! End-to-end tests of the command-line interface, driving the built
//! binary through temp directories.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_topsig")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("SIG_THREADS")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).expect("artifact exists")
}

#[test]
fn simulate_writes_signal_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "signal.csv");
    run_ok(&[
        "simulate", "--duration", "30", "--rate", "50", "--seed", "5",
        "--out", csv.to_str().unwrap(),
    ]);
    let text = read(&csv);
    let rows = text.lines().count();
    assert_eq!(rows, 1501, "header plus 30 s * 50 Hz samples");
    assert!(text.starts_with("t,value\n0,"));

    let meta: serde_json::Value =
        serde_json::from_str(&read(&path(&dir, "signal.csv.meta.json")))
            .expect("metadata is JSON");
    assert_eq!(meta["samples"], 1500);
    assert_eq!(meta["config"]["rate"], 50.0);
    assert_eq!(meta["config"]["seed"], 5);

    // determinism: the same seed writes identical bytes
    let csv2 = path(&dir, "signal2.csv");
    run_ok(&[
        "simulate", "--duration", "30", "--rate", "50", "--seed", "5",
        "--out", csv2.to_str().unwrap(),
    ]);
    assert_eq!(read(&csv), read(&csv2));

    // noiseless file stays within the template range
    let quiet = path(&dir, "quiet.csv");
    run_ok(&[
        "simulate", "--sigma", "0", "--duration", "5", "--seed", "1",
        "--out", quiet.to_str().unwrap(),
    ]);
    for line in read(&quiet).lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(v.abs() < 7.0, "noiseless sample {v} outside the template range");
    }
}

#[test]
fn simulate_accepts_a_config_document() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(&dir, "cfg.json");
    std::fs::write(
        &cfg,
        r#"{
            "template": {"variant": "custom", "samples": [0.0, 1.0, 0.0, -1.0]},
            "reparam": {
                "law": {"variant": "iid_uniform", "v_min": 1.0, "v_max": 1.0},
                "h": 0.02,
                "start": {"variant": "fixed", "value": 0.0}
            },
            "noise": {"sigma": 0.0, "tau": 1.0},
            "duration": 2.0,
            "rate": 50.0,
            "seed": 3
        }"#,
    )
    .unwrap();
    let csv = path(&dir, "custom.csv");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(read(&csv).lines().count(), 101);
}

#[test]
fn diagram_subcommand_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "steps.csv");
    std::fs::write(&csv, "t,value\n0,0\n1,2\n2,1\n3,3\n").unwrap();
    let out = path(&dir, "diagram.json");
    run_ok(&["diagram", "--input", csv.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(doc["points"], serde_json::json!([[0.0, 3.0], [1.0, 2.0]]));

    // monotone input: a single point
    let mono = path(&dir, "mono.csv");
    std::fs::write(&mono, "t,value\n0,0\n1,1\n2,2\n").unwrap();
    let out2 = path(&dir, "mono.json");
    run_ok(&["diagram", "--input", mono.to_str().unwrap(), "--out", out2.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&read(&out2)).unwrap();
    assert_eq!(doc["points"], serde_json::json!([[0.0, 2.0]]));
}

#[test]
fn io_failures_use_exit_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "d.json");

    // empty file
    let empty = path(&dir, "empty.csv");
    std::fs::write(&empty, "").unwrap();
    let r = run(&["diagram", "--input", empty.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));

    // malformed row names its line
    let bad = path(&dir, "bad.csv");
    std::fs::write(&bad, "t,value\n0,1\n0.1,oops\n").unwrap();
    let r = run(&["diagram", "--input", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert!(stderr.contains("line 3"), "stderr should name the line: {stderr}");

    // missing file
    let r = run(&["diagram", "--input", "/nonexistent.csv", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn usage_failures_use_exit_code_2() {
    // clap-level: unknown flag
    let r = run(&["diagram", "--no-such-flag"]);
    assert_eq!(r.status.code(), Some(2));

    // domain-level: replicates below 2
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "s.csv");
    std::fs::write(&csv, "t,value\n0,0\n1,2\n2,1\n3,3\n4,0\n5,2\n").unwrap();
    let r = run(&[
        "bootstrap", "--input", csv.to_str().unwrap(), "--window", "3",
        "--replicates", "1", "--out", dir.path().join("b.json").to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(2));

    // unknown validation suite
    let r = run(&["validate", "--suite", "no-such-suite"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn signature_defaults_echo_the_reference_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "signal.csv");
    run_ok(&["simulate", "--duration", "10", "--seed", "2", "--out", csv.to_str().unwrap()]);

    let out = path(&dir, "sig.json");
    let cfile = path(&dir, "sig.csv");
    run_ok(&[
        "signature", "--input", csv.to_str().unwrap(),
        "--out", out.to_str().unwrap(), "--csv", cfile.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let config = &doc["config"]["signature"];
    assert_eq!(config["window_len"], 150);
    assert_eq!(config["truncation"]["epsilon"], 0.2);
    assert_eq!(config["truncation"]["p"], 1.0);
    assert_eq!(config["kernel"]["variant"], "silhouette");
    assert_eq!(config["kernel"]["window"]["lower"], -9.0);
    assert_eq!(config["kernel"]["window"]["upper"], 9.0);

    // support: values vanish outside the projection window
    let values: Vec<f64> = serde_json::from_value(doc["values"].clone()).unwrap();
    let grid = &doc["grid"]["axes"][0];
    let (start, stop, count) = (
        grid["start"].as_f64().unwrap(),
        grid["stop"].as_f64().unwrap(),
        grid["count"].as_u64().unwrap() as usize,
    );
    assert_eq!(count, 512);
    for (i, v) in values.iter().enumerate() {
        let t = start + (stop - start) * i as f64 / (count - 1) as f64;
        if !(-9.0..=9.0).contains(&t) {
            assert_eq!(*v, 0.0, "support leak at t = {t}");
        }
    }
    assert!(read(&cfile).starts_with("t,value\n"));
}

#[test]
fn one_window_signature_equals_the_window_functional() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "short.csv");
    std::fs::write(&csv, "t,value\n0,0\n1,2\n2,1\n3,3\n").unwrap();
    let out = path(&dir, "sig.json");
    run_ok(&[
        "signature", "--input", csv.to_str().unwrap(), "--window", "4",
        "--epsilon", "0.5", "--p", "1", "--grid-count", "64",
        "--out", out.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let values: Vec<f64> = serde_json::from_value(doc["values"].clone()).unwrap();
    assert_eq!(values.len(), 64);

    // a single window means the signature equals that window's
    // normalized functional, bit for bit
    let series = topsig::TimeSeries::new(vec![0.0, 2.0, 1.0, 3.0], 1.0).unwrap();
    let diagram = topsig::sublevel_diagram(&series);
    let kernel = topsig::KernelSpec::silhouette(
        topsig::ProjectionWindow::new(-9.0, 9.0).unwrap(),
    );
    let grid = topsig::EvaluationGrid::uniform_1d(-11.25, 11.25, 64).unwrap();
    let spec = topsig::TruncationSpec::new(0.5, 1.0).unwrap();
    let direct = topsig::normalized_functional(&diagram, spec, &kernel, &grid);
    assert_eq!(values, direct.values);
}

#[test]
fn bootstrap_artifacts_and_block_len_rules() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "signal.csv");
    run_ok(&["simulate", "--duration", "8", "--seed", "4", "--out", csv.to_str().unwrap()]);

    // explicit block length, deterministic across reruns
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    for out in [&a, &b] {
        run_ok(&[
            "bootstrap", "--input", csv.to_str().unwrap(), "--window", "50",
            "--replicates", "80", "--block-len", "40", "--alpha", "0.05",
            "--seed", "11", "--out", out.to_str().unwrap(),
        ]);
    }
    assert_eq!(read(&a), read(&b));
    let doc: serde_json::Value = serde_json::from_str(&read(&a)).unwrap();
    assert_eq!(doc["replicates"], 80);
    assert_eq!(doc["level"], 0.05);
    assert_eq!(doc["config"]["resolved_block_len"], 40);
    let mean: Vec<f64> = serde_json::from_value(doc["mean"].clone()).unwrap();
    let lower: Vec<f64> = serde_json::from_value(doc["lower"].clone()).unwrap();
    let upper: Vec<f64> = serde_json::from_value(doc["upper"].clone()).unwrap();
    for i in 0..mean.len() {
        assert!(lower[i] <= upper[i]);
    }

    // omitted block length resolves through the default rule:
    // 8 s * 50 Hz = 400 samples, window 50 -> 351 windows -> floor(351^0.4) = 10
    let c = path(&dir, "c.json");
    run_ok(&[
        "bootstrap", "--input", csv.to_str().unwrap(), "--window", "50",
        "--replicates", "16", "--seed", "11", "--out", c.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&read(&c)).unwrap();
    assert_eq!(doc["config"]["resolved_block_len"], 10);

    // whole-range blocks give zero-width bands
    let d = path(&dir, "d.json");
    run_ok(&[
        "bootstrap", "--input", csv.to_str().unwrap(), "--window", "50",
        "--replicates", "16", "--block-len", "351", "--seed", "11",
        "--out", d.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&read(&d)).unwrap();
    let mean: Vec<f64> = serde_json::from_value(doc["mean"].clone()).unwrap();
    let lower: Vec<f64> = serde_json::from_value(doc["lower"].clone()).unwrap();
    let upper: Vec<f64> = serde_json::from_value(doc["upper"].clone()).unwrap();
    for i in 0..mean.len() {
        assert!((lower[i] - mean[i]).abs() < 1e-12);
        assert!((upper[i] - mean[i]).abs() < 1e-12);
    }
}

#[test]
fn validate_subcommand_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "report.json");
    run_ok(&[
        "validate", "--suite", "bottleneck", "--seed", "0",
        "--out", out.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 1);
    assert_eq!(doc[0]["check_id"], "bottleneck");
    assert_eq!(doc[0]["violations"], 0);
}

#[test]
fn plot_renders_curves_and_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "signal.csv");
    run_ok(&["simulate", "--duration", "6", "--seed", "6", "--out", csv.to_str().unwrap()]);

    let sig = path(&dir, "sig.json");
    run_ok(&[
        "signature", "--input", csv.to_str().unwrap(), "--window", "50",
        "--out", sig.to_str().unwrap(),
    ]);
    let svg = path(&dir, "sig.svg");
    run_ok(&["plot", "--input", sig.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    let text = read(&svg);
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 1);

    let est = path(&dir, "est.json");
    run_ok(&[
        "bootstrap", "--input", csv.to_str().unwrap(), "--window", "50",
        "--replicates", "20", "--out", est.to_str().unwrap(),
    ]);
    let svg2 = path(&dir, "est.svg");
    run_ok(&["plot", "--input", est.to_str().unwrap(), "--out", svg2.to_str().unwrap()]);
    let text = read(&svg2);
    assert_eq!(text.matches("<polygon").count(), 1);
    assert_eq!(text.matches("<polyline").count(), 3);

    // 2d image curves render as heatmaps
    let sig2d = path(&dir, "sig2d.json");
    run_ok(&[
        "signature", "--input", csv.to_str().unwrap(), "--window", "50",
        "--kernel", "image", "--grid-count", "16",
        "--out", sig2d.to_str().unwrap(),
    ]);
    let svg3 = path(&dir, "heat.svg");
    run_ok(&["plot", "--input", sig2d.to_str().unwrap(), "--out", svg3.to_str().unwrap()]);
    assert!(read(&svg3).matches("<rect").count() > 16);

    // schema mismatch is rejected
    let junk = path(&dir, "junk.json");
    std::fs::write(&junk, r#"{"something": 1}"#).unwrap();
    let r = run(&["plot", "--input", junk.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

/// The full pipeline, run twice with one seed, produces byte-identical
/// artifacts, independently of the worker count.
#[test]
fn pipeline_reruns_are_byte_identical() {
    let mut artifacts: Vec<Vec<String>> = Vec::new();
    for threads in ["1", "4"] {
        // identical relative layout per round so every echoed path and
        // every byte must match
        let dir = tempfile::tempdir().unwrap();
        let run_env = |args: &[&str]| {
            let out = Command::new(bin())
                .args(args)
                .env("SIG_THREADS", threads)
                .current_dir(dir.path())
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        };
        run_env(&[
            "simulate", "--duration", "10", "--rate", "50", "--seed", "12",
            "--out", "signal.csv",
        ]);
        run_env(&["signature", "--input", "signal.csv", "--window", "150", "--out", "sig.json"]);
        run_env(&[
            "bootstrap", "--input", "signal.csv", "--window", "150",
            "--replicates", "60", "--block-len", "40", "--alpha", "0.01",
            "--seed", "12", "--out", "est.json",
        ]);
        run_env(&["plot", "--input", "est.json", "--out", "plot.svg"]);
        artifacts.push(vec![
            read(&path(&dir, "signal.csv")),
            read(&path(&dir, "sig.json")),
            read(&path(&dir, "est.json")),
            read(&path(&dir, "plot.svg")),
        ]);
    }
    assert_eq!(artifacts[0], artifacts[1]);
}
