use rirdist::io::{read_json, read_jsonl, write_atomic, write_json};
use rirdist::sde::{evaluate, predict, EvalReport, FEATURE_SCHEMA_VERSION};
use rirdist::Model;

use super::train::{FeatureRow, Split};
use crate::args::EvalArgs;
use crate::error::{check_schema, CliError, CliResult};
use crate::lock::OutputLock;

pub const EVAL_FILE: &str = "eval.json";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const HIST_PREDICTED_FILE: &str = "hist_predicted.csv";
pub const HIST_TRUE_FILE: &str = "hist_true.csv";

pub fn run(args: &EvalArgs) -> CliResult<EvalReport> {
    let split = Split::parse(&args.split).ok_or_else(|| {
        CliError::Usage(format!("unknown split {:?}; use train, val or test", args.split))
    })?;
    let model: Model = read_json(&args.model).map_err(CliError::input)?;
    let model_name = args.model.display().to_string();
    check_schema(&model_name, &model.schema_version, FEATURE_SCHEMA_VERSION)?;
    let rows: Vec<FeatureRow> = read_jsonl(&args.features).map_err(CliError::input)?;
    if let Some(bad) = rows.iter().find(|r| r.schema_version != model.schema_version) {
        return Err(CliError::Schema(format!(
            "{}: row {} has feature schema {:?} but the model expects {:?}",
            args.features.display(),
            bad.rir_id,
            bad.schema_version,
            model.schema_version
        )));
    }
    let selected: Vec<&FeatureRow> = rows.iter().filter(|r| r.split == split).collect();
    if selected.is_empty() {
        return Err(CliError::MissingData(format!(
            "{} has no {} rows",
            args.features.display(),
            args.split
        )));
    }
    let testset: Vec<_> = selected.iter().map(|r| (r.features, r.distance_m)).collect();
    let report = evaluate(&model, &testset).map_err(|e| CliError::Schema(format!("{model_name}: {e}")))?;

    let _lock = OutputLock::acquire(&args.out)?;
    let mut csv = String::from("rir_id,true_m,predicted_m,residual_m\n");
    for (row, s) in selected.iter().zip(&report.samples) {
        debug_assert_eq!(predict(&model, &row.features).ok(), Some(s.predicted_m));
        csv.push_str(&format!("{},{},{},{}\n", row.rir_id, s.true_m, s.predicted_m, s.residual_m));
    }
    let out = |name: &str, bytes: &[u8]| write_atomic(&args.out.join(name), bytes).map_err(CliError::output);
    out(PREDICTIONS_FILE, csv.as_bytes())?;
    out(HIST_PREDICTED_FILE, report.predicted_histogram.to_csv().as_bytes())?;
    out(HIST_TRUE_FILE, report.truth_histogram.to_csv().as_bytes())?;
    write_json(&args.out.join(EVAL_FILE), &report).map_err(CliError::output)?;

    println!(
        "{} split: n = {}, MAE {:.3} m (zero model {:.3} m), r = {}",
        args.split,
        report.n_samples,
        report.mae_m,
        report.zero_model_mae_m,
        report.pearson_r.map_or("n/a".to_string(), |r| format!("{r:.3}"))
    );
    Ok(report)
}
