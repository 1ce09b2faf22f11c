//! Black-box tests of the binary: exit codes, manifests, idempotence.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ttalab"))
}

fn temp_out(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ttalab_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn unknown_flags_are_rejected() {
    let status = bin()
        .args(["runs", "--mode", "count", "--bits", "0101", "--frobnicate"])
        .status()
        .unwrap();
    assert!(!status.success());
}

#[test]
fn malformed_pgm_exits_2_without_panicking() {
    let out = temp_out("badpgm");
    let bad = out.join("bad.pgm");
    std::fs::write(&bad, b"P7\n1 1\n255\n\x00").unwrap();
    let output = bin()
        .args(["transform", "--input", bad.to_str().unwrap()])
        .args(["--transform", "flip", "--out-dir", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unsupported magic"), "stderr: {stderr}");
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn truncated_pgm_reports_offset() {
    let out = temp_out("truncpgm");
    let bad = out.join("trunc.pgm");
    std::fs::write(&bad, b"P5\n4 4\n255\n\x00\x01").unwrap();
    let output = bin()
        .args(["transform", "--input", bad.to_str().unwrap()])
        .args(["--transform", "flip", "--out-dir", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("byte"));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn single_class_eval_exits_2() {
    let out = temp_out("oneclass");
    let scores = out.join("scores.csv");
    std::fs::write(&scores, "id,label,score\na,in,0.1\nb,in,0.4\n").unwrap();
    let output = bin()
        .args(["eval", "--scores", scores.to_str().unwrap()])
        .args(["--out-dir", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("metric undefined"));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn score_length_mismatch_exits_2() {
    let out = temp_out("mismatch");
    std::fs::write(
        out.join("raw.csv"),
        "label,p0,p1\nin,0.5,0.5\nout,0.2,0.8\n",
    )
    .unwrap();
    std::fs::write(out.join("aug.csv"), "label,p0,p1\nin,0.5,0.5\n").unwrap();
    let status = bin()
        .args(["score", "--raw", out.join("raw.csv").to_str().unwrap()])
        .args(["--aug", out.join("aug.csv").to_str().unwrap()])
        .args(["--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn manifest_records_resolved_configuration() {
    let out = temp_out("manifest");
    let status = bin()
        .args(["runs", "--mode", "count", "--bits", "0011100011000"])
        .args(["--seed", "5", "--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("run-manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "runs");
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["flags"]["mode"], "count");
    assert_eq!(manifest["flags"]["bits"], "0011100011000");
    assert!(manifest["version"].is_string());
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn monte_carlo_reruns_are_identical() {
    let out_a = temp_out("mc_a");
    let out_b = temp_out("mc_b");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["runs", "--mode", "mc", "--f", "beta:2,2", "--g", "uniform"])
            .args(["--n1", "20", "--n2", "20", "--trials", "5000"])
            .args(["--seed", "9", "--out-dir", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(out_a.join("runs-sweep.csv")).unwrap();
    let b = std::fs::read(out_b.join("runs-sweep.csv")).unwrap();
    assert_eq!(a, b);
    std::fs::remove_dir_all(&out_a).ok();
    std::fs::remove_dir_all(&out_b).ok();
}

#[test]
fn demo_emits_the_documented_file_set() {
    let out = temp_out("demo_files");
    let status = bin()
        .args(["demo", "--train-per-class", "20", "--test-in", "20"])
        .args(["--test-out", "20", "--epochs", "30"])
        .args(["--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    for file in [
        "scores.csv",
        "anomaly_scores.csv",
        "remaining_scores.csv",
        "msp_scores.csv",
        "evaluation.json",
        "roc.csv",
        "histogram.csv",
        "slices.csv",
        "run-manifest.json",
    ] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn demo_supports_both_transforms() {
    for transform in ["fft", "flip"] {
        let out = temp_out(&format!("demo_{transform}"));
        let status = bin()
            .args(["demo", "--transform", transform])
            .args([
                "--train-per-class",
                "10",
                "--test-in",
                "10",
                "--test-out",
                "10",
            ])
            .args(["--epochs", "20", "--out-dir", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success(), "--transform {transform} failed");
        std::fs::remove_dir_all(&out).ok();
    }
}

#[test]
fn flip_twice_reproduces_the_canonical_encoding() {
    let out = temp_out("flip_twice");
    // Canonical encoding: write the input through the tool's own writer by
    // flipping an even number of times.
    let src = out.join("src.pgm");
    std::fs::write(&src, b"P2\n3 2\n255\n10 20 30\n40 50 60\n").unwrap();
    let run_flip = |input: &PathBuf, output: &PathBuf| {
        let status = bin()
            .args(["transform", "--input", input.to_str().unwrap()])
            .args(["--transform", "flip"])
            .args(["--output", output.to_str().unwrap()])
            .args(["--out-dir", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let once = out.join("once.pgm");
    let twice = out.join("twice.pgm");
    let twice_again = out.join("twice_again.pgm");
    let thrice = out.join("thrice.pgm");
    run_flip(&src, &once);
    run_flip(&once, &twice);
    run_flip(&twice, &thrice);
    run_flip(&thrice, &twice_again);
    // twice and twice_again are both double flips of the same content through
    // the same writer: byte-identical.
    let a = std::fs::read(&twice).unwrap();
    let b = std::fs::read(&twice_again).unwrap();
    assert_eq!(a, b);
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn fft_with_covering_radius_reproduces_input_within_quantization() {
    let out = temp_out("fft_identity");
    let src = out.join("src.pgm");
    // Deterministic texture.
    let mut body = String::from("P2\n8 8\n255\n");
    for y in 0..8 {
        let row: Vec<String> = (0..8)
            .map(|x| (((x * 37 + y * 101 + 13) % 256) as u32).to_string())
            .collect();
        body.push_str(&(row.join(" ") + "\n"));
    }
    std::fs::write(&src, body).unwrap();
    let filtered = out.join("filtered.pgm");
    let status = bin()
        .args(["transform", "--input", src.to_str().unwrap()])
        .args(["--transform", "fft", "--radius", "12"])
        .args(["--output", filtered.to_str().unwrap()])
        .args(["--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let canon = out.join("canon.pgm");
    // Double flip = canonical re-encode of the source.
    for (i, o) in [
        (src.clone(), out.join("tmp.pgm")),
        (out.join("tmp.pgm"), canon.clone()),
    ] {
        let status = bin()
            .args(["transform", "--input", i.to_str().unwrap()])
            .args(["--transform", "flip"])
            .args(["--output", o.to_str().unwrap()])
            .args(["--out-dir", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&filtered).unwrap();
    let b = std::fs::read(&canon).unwrap();
    assert_eq!(a.len(), b.len());
    // Raster starts after the 3-line header; allow 1 quantization step.
    let header_len = b"P5\n8 8\n255\n".len();
    for (x, y) in a[header_len..].iter().zip(&b[header_len..]) {
        assert!((*x as i16 - *y as i16).abs() <= 1, "{x} vs {y}");
    }
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn eval_on_three_column_fixture_matches_hand_computed_auroc() {
    let out = temp_out("eval_fixture");
    let scores = out.join("scores.csv");
    std::fs::write(
        &scores,
        "id,label,score\na,in,0.1\nb,in,0.3\nc,out,0.2\nd,out,0.4\n",
    )
    .unwrap();
    let output = bin()
        .args(["eval", "--scores", scores.to_str().unwrap()])
        .args(["--out-dir", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["auroc"].as_f64().unwrap(), 0.75);
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn eval_with_one_slice_emits_one_row_per_label() {
    let out = temp_out("eval_slices");
    let scores = out.join("scores.csv");
    std::fs::write(
        &scores,
        "id,label,anomaly,remaining,msp\n\
         a,in,0.1,0.05,0.2\nb,in,0.3,0.07,0.4\nc,out,0.8,0.3,0.6\n",
    )
    .unwrap();
    let status = bin()
        .args([
            "eval",
            "--scores",
            scores.to_str().unwrap(),
            "--slices",
            "1",
        ])
        .args(["--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let slices = std::fs::read_to_string(out.join("slices.csv")).unwrap();
    let rows: Vec<&str> = slices.lines().collect();
    assert_eq!(rows[0], "lo,hi,label,mean,var,count");
    assert_eq!(rows.len(), 3, "{slices}");
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn count_mode_requires_bits() {
    let output = bin().args(["runs", "--mode", "count"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("--bits"));
}

#[test]
fn invalid_beta_parameters_exit_2() {
    let out = temp_out("badbeta");
    let status = bin()
        .args(["runs", "--mode", "quadrature", "--f", "beta:0,1"])
        .args(["--g", "uniform", "--n1", "10", "--n2", "10"])
        .args(["--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn temperature_one_recovers_plain_softmax_scoring() {
    let out = temp_out("t1");
    // With one-hot rows, anomaly is 0 for identical files at any temperature;
    // at t = 1 a non-trivial fixture must match the direct inner product.
    std::fs::write(
        out.join("raw.csv"),
        "label,p0,p1\nin,0.9,0.1\nout,0.5,0.5\n",
    )
    .unwrap();
    std::fs::write(
        out.join("aug.csv"),
        "label,p0,p1\nin,0.8,0.2\nout,0.25,0.75\n",
    )
    .unwrap();
    let status = bin()
        .args(["score", "--raw", out.join("raw.csv").to_str().unwrap()])
        .args(["--aug", out.join("aug.csv").to_str().unwrap()])
        .args(["--temperature", "1", "--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(out.join("scores.csv")).unwrap();
    let row1: Vec<&str> = table.lines().nth(1).unwrap().split(',').collect();
    let anomaly: f64 = row1[2].parse().unwrap();
    // 1 − (0.9·0.8 + 0.1·0.2) = 0.26
    assert!((anomaly - 0.26).abs() < 1e-12, "got {anomaly}");
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn identical_one_hot_files_score_zero_anomaly() {
    let out = temp_out("onehot");
    let content = "label,p0,p1,p2\nin,1,0,0\nin,0,1,0\nout,0,0,1\n";
    std::fs::write(out.join("raw.csv"), content).unwrap();
    std::fs::write(out.join("aug.csv"), content).unwrap();
    let status = bin()
        .args(["score", "--raw", out.join("raw.csv").to_str().unwrap()])
        .args(["--aug", out.join("aug.csv").to_str().unwrap()])
        .args(["--out-dir", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(out.join("scores.csv")).unwrap();
    for line in table.lines().skip(1) {
        let anomaly: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(anomaly, 0.0, "row '{line}'");
    }
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn ablate_reruns_are_identical_and_single_radius_matches_demo() {
    let small = [
        "--classes",
        "3",
        "--height",
        "24",
        "--width",
        "24",
        "--train-per-class",
        "20",
        "--test-in",
        "30",
        "--test-out",
        "30",
        "--epochs",
        "40",
    ];
    let run_ablate = |out: &PathBuf| {
        let status = bin()
            .args(["ablate", "--radii", "5", "--temperatures", "5"])
            .args(small)
            .args(["--seed", "3", "--out-dir", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read_to_string(out.join("ablate.csv")).unwrap()
    };
    let out_a = temp_out("ablate_a");
    let out_b = temp_out("ablate_b");
    let csv_a = run_ablate(&out_a);
    let csv_b = run_ablate(&out_b);
    assert_eq!(csv_a, csv_b);

    // A one-element sweep reproduces a direct demo run at the same settings.
    let out_demo = temp_out("ablate_demo");
    let output = bin()
        .args([
            "demo",
            "--transform",
            "fft",
            "--radius",
            "5",
            "--temperature",
            "5",
        ])
        .args(small)
        .args(["--seed", "3", "--out-dir", out_demo.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let demo_auroc = summary["anomaly_auroc"].as_f64().unwrap();

    let radius_row = csv_a
        .lines()
        .find(|l| l.starts_with("radius,5,"))
        .expect("radius row present");
    let ablate_auroc: f64 = radius_row.split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(ablate_auroc, demo_auroc);

    std::fs::remove_dir_all(&out_a).ok();
    std::fs::remove_dir_all(&out_b).ok();
    std::fs::remove_dir_all(&out_demo).ok();
}
