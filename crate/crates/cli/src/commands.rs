//! Subcommand implementations.

use crate::args::{
    self, AblateArgs, DemoArgs, EvalArgs, OutputFormat, RunsArgs, RunsMode, ScoreArgs,
    TransformArgs, TransformKind,
};
use crate::{Cli, Command};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use ttalab_core::evaluation::{self, EvalSummary, RocPoint, SliceStats};
use ttalab_core::harness::{
    generate_dataset, score_test_set, train_classifier, SampleScores, SyntheticSpec, Transform,
};
use ttalab_core::io::records::{
    read_prob_csv, read_records_csv, read_score_table, write_records_csv, write_score_table, Label,
    ScoreRecord, ScoreTableRow,
};
use ttalab_core::io::{pgm, read_image_pgm, write_image_pgm};
use ttalab_core::runs::{
    classify_regime, count_runs, expected_runs_derivative, expected_runs_mc,
    expected_runs_quadrature_tol, maximality_sweep, BinarySequence, SampleSizes,
};
use ttalab_core::scoring::{score_pipeline, Temperature};
use ttalab_core::transforms::FilterRadius;
use ttalab_core::{beta_fit, BetaParams, Error, ImageTensor, Result, UnitDensity};

pub fn dispatch(cli: &Cli) -> Result<()> {
    std::fs::create_dir_all(&cli.out_dir)?;
    let (name, flags, summary) = match &cli.command {
        Command::Transform(a) => ("transform", transform_flags(a), cmd_transform(cli, a)?),
        Command::Score(a) => ("score", score_flags(a), cmd_score(cli, a)?),
        Command::Eval(a) => ("eval", eval_flags(a), cmd_eval(cli, a)?),
        Command::Ablate(a) => ("ablate", ablate_flags(a), cmd_ablate(cli, a)?),
        Command::Runs(a) => ("runs", runs_flags(a), cmd_runs(cli, a)?),
        Command::Demo(a) => ("demo", demo_flags(a), cmd_demo(cli, a)?),
    };
    write_manifest(cli, name, flags)?;
    print_summary(cli.format, &summary);
    Ok(())
}

fn resolve_seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or(0)
}

fn write_manifest(cli: &Cli, subcommand: &str, flags: Value) -> Result<()> {
    let manifest = json!({
        "subcommand": subcommand,
        "flags": flags,
        "seed": resolve_seed(cli),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let path = cli.out_dir.join("run-manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

fn print_summary(format: OutputFormat, summary: &Value) {
    match format {
        OutputFormat::Json => println!("{summary}"),
        OutputFormat::Csv => {
            if let Value::Object(map) = summary {
                for (k, v) in map {
                    println!("{k},{v}");
                }
            } else {
                println!("{summary}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// transform

fn transform_flags(a: &TransformArgs) -> Value {
    json!({
        "input": a.input.display().to_string(),
        "transform": format!("{:?}", a.transform).to_lowercase(),
        "radius": a.radius,
        "output": a.output.as_ref().map(|p| p.display().to_string()),
    })
}

fn build_transform(kind: TransformKind, radius: Option<f64>) -> Result<Transform> {
    match kind {
        TransformKind::Flip => {
            if radius.is_some() {
                return Err(Error::InvalidInput(
                    "--radius applies only to --transform fft".to_string(),
                ));
            }
            Ok(Transform::HorizontalFlip)
        }
        TransformKind::Fft => {
            let r = radius.ok_or_else(|| {
                Error::InvalidInput("--transform fft requires --radius".to_string())
            })?;
            Ok(Transform::FftLowpass(FilterRadius::new(r)?))
        }
    }
}

fn cmd_transform(cli: &Cli, a: &TransformArgs) -> Result<Value> {
    let transform = build_transform(a.transform, a.radius)?;
    let suffix = match a.transform {
        TransformKind::Fft => format!("fft{}", a.radius.unwrap_or_default()),
        TransformKind::Flip => "flip".to_string(),
    };
    let stem = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string());

    if a.input.exists() {
        let img = read_image_pgm(&a.input)?;
        let out = transform.apply(&img)?;
        let path = a
            .output
            .clone()
            .unwrap_or_else(|| cli.out_dir.join(format!("{stem}_{suffix}.pgm")));
        write_image_pgm(&out, &path, true)?;
        Ok(json!({
            "output": path.display().to_string(),
            "height": out.height(),
            "width": out.width(),
            "channels": 1,
        }))
    } else {
        // Fall back to stacked color planes `<input>.r/.g/.b.pgm`.
        let rgb = pgm::read_image_rgb_planes(&a.input)?;
        let out = transform.apply(&rgb)?;
        let base = a
            .output
            .clone()
            .unwrap_or_else(|| cli.out_dir.join(format!("{stem}_{suffix}")));
        for (c, tag) in ["r", "g", "b"].iter().enumerate() {
            let plane = ImageTensor::new(out.height(), out.width(), 1, out.channel_plane(c)?)?;
            let mut os = base.as_os_str().to_owned();
            os.push(format!(".{tag}.pgm"));
            write_image_pgm(&plane, PathBuf::from(&os), true)?;
        }
        Ok(json!({
            "output": format!("{}.{{r,g,b}}.pgm", base.display()),
            "height": out.height(),
            "width": out.width(),
            "channels": 3,
        }))
    }
}

// ---------------------------------------------------------------------------
// score

fn score_flags(a: &ScoreArgs) -> Value {
    json!({
        "raw": a.raw.display().to_string(),
        "aug": a.aug.display().to_string(),
        "temperature": a.temperature,
        "output": a.output.as_ref().map(|p| p.display().to_string()),
    })
}

fn cmd_score(cli: &Cli, a: &ScoreArgs) -> Result<Value> {
    let t = Temperature::new(a.temperature)?;
    let raw = read_prob_csv(&a.raw)?;
    let aug = read_prob_csv(&a.aug)?;
    if raw.len() != aug.len() {
        return Err(Error::DimensionMismatch {
            expected: raw.len(),
            got: aug.len(),
        });
    }
    let mut rows = Vec::with_capacity(raw.len());
    for (i, ((label_raw, p_raw), (label_aug, p_aug))) in raw.iter().zip(&aug).enumerate() {
        if label_raw != label_aug {
            return Err(Error::CsvParse {
                row: i + 1,
                message: format!("labels disagree between files: {label_raw} vs {label_aug}"),
            });
        }
        if p_raw.len() != p_aug.len() {
            return Err(Error::CsvParse {
                row: i + 1,
                message: format!("class counts disagree: {} vs {}", p_raw.len(), p_aug.len()),
            });
        }
        let triple = score_pipeline(&p_raw.to_log_logits(), &p_aug.to_log_logits(), t)?;
        rows.push(ScoreTableRow {
            id: format!("row_{i:04}"),
            label: *label_raw,
            anomaly: triple.anomaly,
            remaining: triple.remaining,
            msp: triple.msp,
        });
    }
    let path = a
        .output
        .clone()
        .unwrap_or_else(|| cli.out_dir.join("scores.csv"));
    write_score_table(&rows, &path)?;
    Ok(json!({
        "output": path.display().to_string(),
        "rows": rows.len(),
        "temperature": a.temperature,
    }))
}

// ---------------------------------------------------------------------------
// eval

fn eval_flags(a: &EvalArgs) -> Value {
    json!({
        "scores": a.scores.display().to_string(),
        "slices": a.slices,
        "bins": a.bins,
    })
}

fn write_roc_csv(points: &[RocPoint], path: &Path) -> Result<()> {
    let mut out = String::from("fpr,tpr,threshold\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.fpr, p.tpr, p.threshold));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_slices_csv(slices: &[SliceStats], path: &Path) -> Result<()> {
    let mut out = String::from("lo,hi,label,mean,var,count\n");
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for s in slices {
        out.push_str(&format!(
            "{},{},in,{},{},{}\n",
            s.lo,
            s.hi,
            fmt(s.mean_in),
            fmt(s.var_in),
            s.count_in
        ));
        out.push_str(&format!(
            "{},{},out,{},{},{}\n",
            s.lo,
            s.hi,
            fmt(s.mean_out),
            fmt(s.var_out),
            s.count_out
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_histogram_csv(h: &evaluation::HistogramCounts, path: &Path) -> Result<()> {
    let mut out = String::from("lo,hi,label,count\n");
    let width = 1.0 / h.n_bins as f64;
    for (i, (&inc, &outc)) in h.in_counts.iter().zip(&h.out_counts).enumerate() {
        let lo = i as f64 * width;
        let hi = (i + 1) as f64 * width;
        out.push_str(&format!("{lo},{hi},in,{inc}\n"));
        out.push_str(&format!("{lo},{hi},out,{outc}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn emit_evaluation(
    cli: &Cli,
    records: &[ScoreRecord],
    slice_samples: &[(Label, f64, f64)],
    n_slices: usize,
    n_bins: usize,
) -> Result<EvalSummary> {
    let summary = evaluation::summarize(records, slice_samples, n_slices, n_bins)?;
    std::fs::write(
        cli.out_dir.join("evaluation.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    let roc = evaluation::roc_curve(records)?;
    write_roc_csv(&roc, &cli.out_dir.join("roc.csv"))?;
    write_slices_csv(&summary.slices, &cli.out_dir.join("slices.csv"))?;
    write_histogram_csv(&summary.histogram, &cli.out_dir.join("histogram.csv"))?;
    Ok(summary)
}

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> Result<Value> {
    let header = {
        let text = std::fs::read_to_string(&a.scores)?;
        text.lines().next().unwrap_or_default().to_string()
    };
    let (records, slice_samples): (Vec<ScoreRecord>, Vec<(Label, f64, f64)>) =
        if header == "id,label,anomaly,remaining,msp" {
            let rows = read_score_table(&a.scores)?;
            let records = rows
                .iter()
                .map(|r| ScoreRecord::new(Some(r.id.clone()), r.label, r.anomaly))
                .collect::<Result<Vec<_>>>()?;
            let slices = rows
                .iter()
                .map(|r| (r.label, 1.0 - r.msp, r.remaining))
                .collect();
            (records, slices)
        } else {
            (read_records_csv(&a.scores)?, Vec::new())
        };

    let summary = emit_evaluation(cli, &records, &slice_samples, a.slices, a.bins)?;
    Ok(json!({
        "auroc": summary.auroc,
        "n_in": summary.n_in,
        "n_out": summary.n_out,
        "out_dir": cli.out_dir.display().to_string(),
    }))
}

// ---------------------------------------------------------------------------
// demo

fn demo_flags(a: &DemoArgs) -> Value {
    json!({
        "classes": a.harness.classes,
        "height": a.harness.height,
        "width": a.harness.width,
        "train_per_class": a.harness.train_per_class,
        "test_in": a.harness.test_in,
        "test_out": a.harness.test_out,
        "noise_sigma": a.harness.noise_sigma,
        "epochs": a.harness.epochs,
        "lr": a.harness.lr,
        "transform": format!("{:?}", a.transform).to_lowercase(),
        "radius": a.radius,
        "temperature": a.temperature,
        "slice_temperature": a.slice_temperature,
        "slices": a.slices,
        "bins": a.bins,
    })
}

fn spec_from_args(a: &args::HarnessArgs, seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        n_classes: a.classes,
        height: a.height,
        width: a.width,
        n_train_per_class: a.train_per_class,
        n_test_in: a.test_in,
        n_test_out: a.test_out,
        noise_sigma: a.noise_sigma,
        seed,
    }
}

fn scorer_records(
    scores: &[SampleScores],
    pick: impl Fn(&SampleScores) -> f64,
) -> Vec<ScoreRecord> {
    scores
        .iter()
        .map(|s| ScoreRecord {
            id: Some(s.id.clone()),
            label: s.label,
            score: pick(s),
        })
        .collect()
}

fn cmd_demo(cli: &Cli, a: &DemoArgs) -> Result<Value> {
    let seed = resolve_seed(cli);
    let spec = spec_from_args(&a.harness, seed);
    let transform = build_transform(
        a.transform,
        match a.transform {
            TransformKind::Fft => Some(a.radius),
            TransformKind::Flip => None,
        },
    )?;
    let t = Temperature::new(a.temperature)?;
    let slice_t = Temperature::new(a.slice_temperature)?;

    let data = generate_dataset(&spec)?;
    let report = train_classifier(&data.train, a.harness.epochs, a.harness.lr, seed)?;
    let scores = score_test_set(
        &report.classifier,
        &data.test_in,
        &data.test_out,
        &transform,
        t,
        slice_t,
    )?;

    // Per-scorer files in the generic record format, plus the combined table.
    let anomaly = scorer_records(&scores, |s| s.anomaly);
    let remaining = scorer_records(&scores, |s| s.remaining);
    let msp = scorer_records(&scores, |s| s.msp);
    write_records_csv(&anomaly, cli.out_dir.join("anomaly_scores.csv"))?;
    write_records_csv(&remaining, cli.out_dir.join("remaining_scores.csv"))?;
    write_records_csv(&msp, cli.out_dir.join("msp_scores.csv"))?;
    let table: Vec<ScoreTableRow> = scores
        .iter()
        .map(|s| ScoreTableRow {
            id: s.id.clone(),
            label: s.label,
            anomaly: s.anomaly,
            remaining: s.remaining,
            msp: s.msp,
        })
        .collect();
    write_score_table(&table, cli.out_dir.join("scores.csv"))?;

    let slice_samples: Vec<(Label, f64, f64)> = scores
        .iter()
        .map(|s| (s.label, s.slice_pmax, s.slice_remaining))
        .collect();
    let summary = emit_evaluation(cli, &anomaly, &slice_samples, a.slices, a.bins)?;

    let msp_auroc = evaluation::auroc(&msp)?;
    Ok(json!({
        "anomaly_auroc": summary.auroc,
        "msp_auroc": msp_auroc,
        "train_accuracy": report.final_accuracy,
        "train_loss": report.final_loss,
        "transform": transform.name(),
        "out_dir": cli.out_dir.display().to_string(),
    }))
}

// ---------------------------------------------------------------------------
// ablate

fn ablate_flags(a: &AblateArgs) -> Value {
    json!({
        "radii": a.radii,
        "temperatures": a.temperatures,
        "fixed_radius": a.fixed_radius,
        "fixed_temperature": a.fixed_temperature,
        "classes": a.harness.classes,
        "height": a.harness.height,
        "width": a.harness.width,
        "train_per_class": a.harness.train_per_class,
        "test_in": a.harness.test_in,
        "test_out": a.harness.test_out,
        "noise_sigma": a.harness.noise_sigma,
        "epochs": a.harness.epochs,
        "lr": a.harness.lr,
    })
}

fn cmd_ablate(cli: &Cli, a: &AblateArgs) -> Result<Value> {
    let radii = args::parse_f64_list(&a.radii)?;
    let temperatures = args::parse_f64_list(&a.temperatures)?;
    let seed = resolve_seed(cli);
    let spec = spec_from_args(&a.harness, seed);

    // One dataset and one classifier serve every parameter setting.
    let data = generate_dataset(&spec)?;
    let report = train_classifier(&data.train, a.harness.epochs, a.harness.lr, seed)?;
    let slice_t = Temperature::new(1.0)?;

    let auroc_of = |transform: &Transform, t: Temperature| -> Result<f64> {
        let scores = score_test_set(
            &report.classifier,
            &data.test_in,
            &data.test_out,
            transform,
            t,
            slice_t,
        )?;
        evaluation::auroc(&scorer_records(&scores, |s| s.anomaly))
    };

    let mut out = String::from("param_name,param_value,auroc\n");
    let fixed_t = Temperature::new(a.fixed_temperature)?;
    for &r in &radii {
        let v = auroc_of(&Transform::FftLowpass(FilterRadius::new(r)?), fixed_t)?;
        out.push_str(&format!("radius,{r},{v}\n"));
    }
    let fixed_transform = Transform::FftLowpass(FilterRadius::new(a.fixed_radius)?);
    for &t in &temperatures {
        let v = auroc_of(&fixed_transform, Temperature::new(t)?)?;
        out.push_str(&format!("temperature,{t},{v}\n"));
    }
    let path = cli.out_dir.join("ablate.csv");
    std::fs::write(&path, out)?;
    Ok(json!({
        "output": path.display().to_string(),
        "radii": radii.len(),
        "temperatures": temperatures.len(),
        "train_accuracy": report.final_accuracy,
    }))
}

// ---------------------------------------------------------------------------
// runs

fn runs_flags(a: &RunsArgs) -> Value {
    json!({
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "bits": a.bits,
        "f": a.f,
        "g": a.g,
        "n1": a.n1,
        "n2": a.n2,
        "trials": a.trials,
        "tol": a.tol,
        "alpha1": a.alpha1,
        "beta1": a.beta1,
        "alpha2": a.alpha2,
        "beta2": a.beta2,
        "which": a.which,
        "step": a.step,
        "reference": a.reference,
        "candidates": a.candidates,
        "samples": a.samples.as_ref().map(|p| p.display().to_string()),
    })
}

fn require<T: Clone>(opt: &Option<T>, flag: &str, mode: &str) -> Result<T> {
    opt.clone()
        .ok_or_else(|| Error::InvalidInput(format!("--{flag} is required for --mode {mode}")))
}

fn density_beta_params(d: &UnitDensity) -> Option<BetaParams> {
    match d {
        UnitDensity::Beta(p) => Some(*p),
        UnitDensity::Uniform => BetaParams::new(1.0, 1.0).ok(),
        UnitDensity::UniformOn { .. } => None,
    }
}

fn sweep_row(
    f: &UnitDensity,
    g: &UnitDensity,
    n: SampleSizes,
    quadrature: f64,
    mc: Option<(f64, f64)>,
) -> String {
    let fmt_params = |d: &UnitDensity| -> (String, String) {
        match density_beta_params(d) {
            Some(p) => (p.alpha().to_string(), p.beta().to_string()),
            None => (String::new(), String::new()),
        }
    };
    let (a1, b1) = fmt_params(f);
    let (a2, b2) = fmt_params(g);
    let regime = match (density_beta_params(f), density_beta_params(g)) {
        (Some(p1), Some(p2)) => classify_regime(p1, p2).to_string(),
        _ => String::new(),
    };
    let (mc_mean, mc_stderr) = mc
        .map(|(m, s)| (m.to_string(), s.to_string()))
        .unwrap_or_default();
    format!(
        "{a1},{b1},{a2},{b2},{},{},{quadrature},{mc_mean},{mc_stderr},{regime}\n",
        n.n1(),
        n.n2()
    )
}

const SWEEP_HEADER: &str =
    "alpha1,beta1,alpha2,beta2,n1,n2,er_quadrature,er_mc_mean,er_mc_stderr,regime\n";

fn cmd_runs(cli: &Cli, a: &RunsArgs) -> Result<Value> {
    let mode_name = format!("{:?}", a.mode).to_lowercase();
    match a.mode {
        RunsMode::Count => {
            let bits = require(&a.bits, "bits", &mode_name)?;
            let seq = BinarySequence::parse(&bits)?;
            let runs = count_runs(&seq)?;
            let report = json!({ "mode": "count", "length": seq.len(), "runs": runs });
            std::fs::write(
                cli.out_dir.join("runs-count.json"),
                serde_json::to_string_pretty(&report)? + "\n",
            )?;
            Ok(report)
        }
        RunsMode::Mc | RunsMode::Quadrature => {
            let f = args::parse_distribution(&require(&a.f, "f", &mode_name)?)?;
            let g = args::parse_distribution(&require(&a.g, "g", &mode_name)?)?;
            let n = SampleSizes::new(
                require(&a.n1, "n1", &mode_name)?,
                require(&a.n2, "n2", &mode_name)?,
            )?;
            let quadrature = expected_runs_quadrature_tol(&f.to_pdf()?, &g.to_pdf()?, n, a.tol)?;
            let mc = if a.mode == RunsMode::Mc {
                let est = expected_runs_mc(&f, &g, n, a.trials, resolve_seed(cli))?;
                Some((est.mean, est.stderr))
            } else {
                None
            };
            let mut csv = String::from(SWEEP_HEADER);
            csv.push_str(&sweep_row(&f, &g, n, quadrature, mc));
            let path = cli.out_dir.join("runs-sweep.csv");
            std::fs::write(&path, csv)?;
            let mut report = json!({
                "mode": mode_name,
                "f": f.descriptor(),
                "g": g.descriptor(),
                "n1": n.n1(),
                "n2": n.n2(),
                "er_quadrature": quadrature,
                "output": path.display().to_string(),
            });
            if let Some((mean, stderr)) = mc {
                report["er_mc_mean"] = json!(mean);
                report["er_mc_stderr"] = json!(stderr);
                report["trials"] = json!(a.trials);
            }
            Ok(report)
        }
        RunsMode::Derivative => {
            let p1 = BetaParams::new(
                require(&a.alpha1, "alpha1", &mode_name)?,
                require(&a.beta1, "beta1", &mode_name)?,
            )?;
            let p2 = BetaParams::new(
                require(&a.alpha2, "alpha2", &mode_name)?,
                require(&a.beta2, "beta2", &mode_name)?,
            )?;
            let n = SampleSizes::new(
                require(&a.n1, "n1", &mode_name)?,
                require(&a.n2, "n2", &mode_name)?,
            )?;
            let which: ttalab_core::ShapeParam = require(&a.which, "which", &mode_name)?.parse()?;
            let value = expected_runs_derivative(p1, p2, n, which, a.step)?;
            let report = json!({
                "mode": "derivative",
                "which": format!("{which:?}").to_lowercase(),
                "step": a.step,
                "value": value,
                "regime": classify_regime(p1, p2).to_string(),
            });
            std::fs::write(
                cli.out_dir.join("runs-derivative.json"),
                serde_json::to_string_pretty(&report)? + "\n",
            )?;
            Ok(report)
        }
        RunsMode::Maximality => {
            let (ga, gb) = args::parse_pair(&require(&a.reference, "reference", &mode_name)?)?;
            let g = BetaParams::new(ga, gb)?;
            let cand_text = require(&a.candidates, "candidates", &mode_name)?;
            let candidates = cand_text
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let (x, y) = args::parse_pair(s)?;
                    BetaParams::new(x, y)
                })
                .collect::<Result<Vec<_>>>()?;
            let n = SampleSizes::new(
                require(&a.n1, "n1", &mode_name)?,
                require(&a.n2, "n2", &mode_name)?,
            )?;
            let report = maximality_sweep(g, &candidates, n)?;
            let mut csv = String::from("alpha,beta,overlap,matches_reference\n");
            for e in &report.entries {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    e.candidate.alpha(),
                    e.candidate.beta(),
                    e.overlap,
                    e.matches_reference
                ));
            }
            std::fs::write(cli.out_dir.join("maximality.csv"), csv)?;
            let value = serde_json::to_value(&report)?;
            std::fs::write(
                cli.out_dir.join("maximality.json"),
                serde_json::to_string_pretty(&value)? + "\n",
            )?;
            Ok(json!({
                "mode": "maximality",
                "self_overlap": report.self_overlap,
                "candidates": report.entries.len(),
                "max_at_equal": report.max_at_equal,
            }))
        }
        RunsMode::Fit => {
            let path = require(&a.samples, "samples", &mode_name)?;
            let text = std::fs::read_to_string(&path)?;
            let samples = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(args::parse_f64)
                .collect::<Result<Vec<f64>>>()?;
            let fitted = beta_fit(&samples)?;
            let report = json!({
                "mode": "fit",
                "alpha": fitted.alpha(),
                "beta": fitted.beta(),
                "samples": samples.len(),
            });
            std::fs::write(
                cli.out_dir.join("beta-fit.json"),
                serde_json::to_string_pretty(&report)? + "\n",
            )?;
            Ok(report)
        }
    }
}
