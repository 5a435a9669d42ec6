use std::fs;
use std::path::Path;

use rirdist::fixtures::{crafted_corpus, crafted_enrollment};
use rirdist::io::{read_json, read_jsonl, write_json, write_jsonl};
use rirdist::sde::{EvalReport, FeatureVector, FEATURE_SCHEMA_VERSION};
use rirdist::synth::{image_source_rir, normalize_rir, SceneQuery, ShoeboxRoom, SynthesisConfig};
use rirdist::{Model, Rir, RoomId};
use rirdist_cli::commands::analyze::{MetricsRow, METRICS_FILE};
use rirdist_cli::commands::filter::{FilterSummary, SUMMARY_FILE};
use rirdist_cli::commands::train::{FeatureRow, Split};
use rirdist_cli::dataset::{DatasetWriter, Manifest, METADATA_FILE};
use rirdist_cli::lock::LOCK_FILE;
use rirdist_cli::{run_args, CliResult};
use tempfile::TempDir;

fn cli(args: &[&str]) -> CliResult<()> {
    run_args(std::iter::once("rirdist").chain(args.iter().copied()))
}

fn code(r: CliResult<()>) -> i32 {
    r.map_or_else(|e| e.exit_code(), |_| 0)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_fixture(dir: &Path, rirs: &[(String, Rir)]) {
    let mut w = DatasetWriter::create(dir).unwrap();
    w.add_batch(rirs).unwrap();
    w.finish(Manifest::new(0, rirs.len(), None, Vec::new())).unwrap();
}

fn crafted_dirs(tmp: &TempDir) -> (std::path::PathBuf, std::path::PathBuf) {
    let corpus: Vec<_> = crafted_corpus()
        .into_iter()
        .map(|c| (c.name.to_string(), c.rir))
        .collect();
    let enrollment: Vec<_> = crafted_enrollment()
        .into_iter()
        .enumerate()
        .map(|(i, r)| (format!("enroll-{i}"), r))
        .collect();
    let (input, enroll) = (tmp.path().join("corpus"), tmp.path().join("enroll"));
    write_fixture(&input, &corpus);
    write_fixture(&enroll, &enrollment);
    (input, enroll)
}

#[test]
fn generate_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        cli(&["generate", "--rooms", "2,15", "--n", "4", "--seed", "7", "--out", p(dir)]).unwrap();
    }
    for f in [METADATA_FILE, "manifest.json", "rirs/r15-00003.wav"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let manifest: Manifest = read_json(&a.join("manifest.json")).unwrap();
    assert_eq!(manifest.count, 8);
    assert_eq!(fs::read_dir(a.join("rirs")).unwrap().count(), 8);
    assert!(!a.join(LOCK_FILE).exists());

    cli(&["generate", "--rooms", "2,15", "--n", "4", "--seed", "8", "--out", p(&b)]).unwrap();
    assert_ne!(fs::read(a.join(METADATA_FILE)).unwrap(), fs::read(b.join(METADATA_FILE)).unwrap());
}

#[test]
fn usage_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("x");
    assert_eq!(code(cli(&["generate", "--n", "0", "--out", p(&out)])), 2);
    assert_eq!(code(cli(&["generate", "--n", "3", "--rooms", "25", "--out", p(&out)])), 2);
    assert_eq!(code(cli(&["generate", "--n", "3", "--crossover-ms", "-1", "--out", p(&out)])), 2);

    let file = tmp.path().join("plain");
    fs::write(&file, "x").unwrap();
    let under_file = file.join("out");
    assert_eq!(code(cli(&["generate", "--n", "1", "--rooms", "1", "--out", p(&under_file)])), 2);

    fs::create_dir_all(&out).unwrap();
    fs::write(out.join(LOCK_FILE), "").unwrap();
    assert_eq!(code(cli(&["generate", "--n", "1", "--rooms", "1", "--out", p(&out)])), 2);
}

#[test]
fn help_echoes_published_constants() {
    let err = cli(&["filter", "--help"]).unwrap_err();
    let text = err.to_string();
    for needle in ["0.8", "7.1", "1.8695", "20%"] {
        assert!(text.contains(needle), "help lacks {needle}: {text}");
    }
}

#[test]
fn crafted_corpus_yields_a_quarter() {
    let tmp = TempDir::new().unwrap();
    let (input, enroll) = crafted_dirs(&tmp);
    let out = tmp.path().join("filtered");
    cli(&["filter", "--input", p(&input), "--enrollment", p(&enroll), "--out", p(&out)]).unwrap();
    let summary: FilterSummary = read_json(&out.join(SUMMARY_FILE)).unwrap();
    assert_eq!(summary.yield_fraction, Some(0.25));
    assert_eq!(summary.accepted, 2);
    let counts: Vec<(String, usize)> = summary
        .reason_histogram
        .iter()
        .map(|(r, n)| (r.code().to_string(), *n))
        .collect();
    for (code, n) in &counts {
        let want = usize::from(code != "ANALYSIS_FAILED");
        assert_eq!(*n, want, "{code}");
    }
    assert_eq!(summary.accepted_distance_histogram.total(), 2);
    let csv = fs::read_to_string(out.join("accepted_distance_hist.csv")).unwrap();
    assert!(csv.starts_with("bin_lo_m,bin_hi_m,count\n"));

    let vacuous = tmp.path().join("vacuous");
    cli(&[
        "filter", "--input", p(&input), "--enrollment", p(&enroll), "--out", p(&vacuous),
        "--dist-min", "0", "--dist-max", "100", "--t60-cutoff", "1e9", "--edc-dev", "1e9",
        "--echo-dev", "1e9", "--t60-tol", "1e9",
    ])
    .unwrap();
    let summary: FilterSummary = read_json(&vacuous.join(SUMMARY_FILE)).unwrap();
    assert_eq!(summary.yield_fraction, Some(1.0));
}

#[test]
fn missing_profile_room_exits_three() {
    let tmp = TempDir::new().unwrap();
    let (input, _) = crafted_dirs(&tmp);
    let short_only: Vec<_> = crafted_enrollment()
        .into_iter()
        .filter(|r| r.room_id == RoomId(1))
        .enumerate()
        .map(|(i, r)| (format!("e{i}"), r))
        .collect();
    let enroll = tmp.path().join("short_only");
    write_fixture(&enroll, &short_only);
    let err = cli(&["filter", "--input", p(&input), "--enrollment", p(&enroll), "--out", p(&tmp.path().join("o"))])
        .unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("room 2"), "{err}");

    let nothing = tmp.path().join("nothing");
    assert_eq!(code(cli(&["analyze", "--input", p(&nothing)])), 3);

    let single = tmp.path().join("single");
    write_fixture(&single, &short_only[..1]);
    let err = cli(&["filter", "--input", p(&single), "--enrollment", p(&single), "--out", p(&tmp.path().join("o2"))])
        .unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn analyze_flags_free_field_decay() {
    let tmp = TempDir::new().unwrap();
    let room = ShoeboxRoom::new(RoomId(5), [30.0, 30.0, 30.0], 0.5, 0).unwrap();
    let cfg = SynthesisConfig { max_image_order: 0, ..Default::default() };
    let q = SceneQuery::new([10.0, 10.0, 10.0], [13.43, 10.0, 10.0]);
    let rir = normalize_rir(&image_source_rir(&room, &q, &cfg).unwrap()).unwrap();
    let data = tmp.path().join("ff");
    write_fixture(&data, &[("ff".to_string(), rir)]);
    cli(&["analyze", "--input", p(&data)]).unwrap();
    let first = fs::read(data.join(METRICS_FILE)).unwrap();
    let rows: Vec<MetricsRow> = read_jsonl(&data.join(METRICS_FILE)).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].insufficient_decay);
    assert!(rows[0].t60_s.is_none());
    assert_eq!(rows[0].drr_ceiling, Some(true));
    assert!((rows[0].direct_distance_m.unwrap() - 3.43).abs() < 0.011);

    cli(&["analyze", "--input", p(&data)]).unwrap();
    assert_eq!(fs::read(data.join(METRICS_FILE)).unwrap(), first);
}

#[test]
fn analyze_covers_generated_set() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("gen");
    cli(&["generate", "--rooms", "3", "--n", "6", "--seed", "1", "--out", p(&data)]).unwrap();
    let out = tmp.path().join("metrics");
    cli(&["analyze", "--input", p(&data), "--out", p(&out)]).unwrap();
    let rows: Vec<MetricsRow> = read_jsonl(&out.join(METRICS_FILE)).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.error.is_none() && r.t60_s.is_some()));

    fs::write(data.join("rirs/r03-00002.wav"), b"not a wav").unwrap();
    cli(&["analyze", "--input", p(&data), "--out", p(&out)]).unwrap();
    let rows: Vec<MetricsRow> = read_jsonl(&out.join(METRICS_FILE)).unwrap();
    assert_eq!(rows.iter().filter(|r| r.error.is_some()).count(), 1);
}

fn oracle_features(dir: &Path) -> std::path::PathBuf {
    let rows: Vec<FeatureRow> = (0..12)
        .map(|i| {
            let d = 0.4 + 0.6 * i as f64;
            FeatureRow {
                schema_version: FEATURE_SCHEMA_VERSION.to_string(),
                rir_id: format!("x{i}"),
                room_id: RoomId(1),
                distance_m: d,
                split: if i % 3 == 0 { Split::Test } else { Split::Train },
                features: FeatureVector::from_array([d, 0.0, 0.0, 0.0, 0.0, 1.0]),
            }
        })
        .collect();
    fs::create_dir_all(dir).unwrap();
    let path = dir.join("features.jsonl");
    write_jsonl(&path, &rows).unwrap();
    path
}

#[test]
fn oracle_model_reports_zero_error() {
    let tmp = TempDir::new().unwrap();
    let features = oracle_features(tmp.path());
    let mut model = Model::zero();
    model.weights[0] = 1.0;
    let model_path = tmp.path().join("model.json");
    write_json(&model_path, &model).unwrap();

    let ev = tmp.path().join("eval");
    cli(&["eval", "--model", p(&model_path), "--features", p(&features), "--out", p(&ev)]).unwrap();
    let report: EvalReport = read_json(&ev.join("eval.json")).unwrap();
    assert_eq!(report.mae_m, 0.0);
    assert_eq!(report.n_samples, 4);
    assert_eq!(report.per_range_mae.len(), 4);
    let csv = fs::read_to_string(ev.join("predictions.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    let rep = tmp.path().join("report");
    cli(&["report", "--eval", p(&ev.join("eval.json")), "--out", p(&rep), "--svg"]).unwrap();
    let md = fs::read_to_string(rep.join("report.md")).unwrap();
    assert!(md.contains("| MAE (m) | 0.000 |"), "{md}");
    for label in ["[0, 1)", "[1, 3)", "[3, 5)", "[5, inf)"] {
        assert!(md.contains(label));
    }
    assert!(fs::read_to_string(rep.join("scatter.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn schema_mismatch_exits_four() {
    let tmp = TempDir::new().unwrap();
    let features = oracle_features(tmp.path());
    let mut model = Model::zero();
    model.schema_version = "rir-features/0".into();
    let model_path = tmp.path().join("model.json");
    write_json(&model_path, &model).unwrap();
    let ev = tmp.path().join("eval");
    let run = || cli(&["eval", "--model", p(&model_path), "--features", p(&features), "--out", p(&ev)]);
    assert_eq!(code(run()), 4);

    model.schema_version = FEATURE_SCHEMA_VERSION.into();
    model.weights.truncate(3);
    write_json(&model_path, &model).unwrap();
    assert_eq!(code(run()), 4);

    fs::write(&model_path, "{\"weights\": 3}").unwrap();
    assert_eq!(code(run()), 4);

    let bogus = tmp.path().join("bogus.json");
    fs::write(&bogus, "{\"schema_version\": \"other\"}").unwrap();
    assert_eq!(code(cli(&["report", "--eval", p(&bogus), "--out", p(&ev)])), 4);
}

#[test]
fn train_on_small_generated_set() {
    let tmp = TempDir::new().unwrap();
    let (data, enroll, flt, model) = (
        tmp.path().join("data"),
        tmp.path().join("enroll"),
        tmp.path().join("flt"),
        tmp.path().join("model"),
    );
    cli(&["generate", "--rooms", "11", "--n", "40", "--seed", "4", "--out", p(&data)]).unwrap();
    cli(&["generate", "--rooms", "11", "--n", "6", "--seed", "5", "--out", p(&enroll)]).unwrap();
    cli(&["filter", "--input", p(&data), "--enrollment", p(&enroll), "--out", p(&flt),
          "--echo-dev", "1e9"]).unwrap();
    assert_eq!(
        code(cli(&["train", "--data", p(&data), "--filtered", p(&flt), "--out", p(&model),
                   "--lr-grid", "0.1"])),
        2
    );
    cli(&["train", "--data", p(&data), "--filtered", p(&flt), "--out", p(&model),
          "--lr-grid", "1e-4,1e-3", "--epoch-grid", "10,50"]).unwrap();
    let rows: Vec<FeatureRow> = read_jsonl(&model.join("features.jsonl")).unwrap();
    let summary: FilterSummary = read_json(&flt.join(SUMMARY_FILE)).unwrap();
    assert_eq!(rows.len(), summary.accepted);
    let n_test = rows.iter().filter(|r| r.split == Split::Test).count();
    assert_eq!(n_test, rows.len() - (0.8 * rows.len() as f64).round() as usize);
    let m: Model = read_json(&model.join("model.json")).unwrap();
    assert_eq!(m.train_config.unwrap().epochs, 50);

    assert_eq!(
        code(cli(&["train", "--data", p(&data), "--filtered", p(&tmp.path().join("none")),
                   "--out", p(&model)])),
        3
    );
}
