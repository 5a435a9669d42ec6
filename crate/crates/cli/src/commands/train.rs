use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;
use rirdist::io::{read_json, read_jsonl, write_json, write_jsonl};
use rirdist::rng::derive;
use rirdist::sde::{
    extract_features, grid_search, split_dataset, train, GridSearchResult, TrainConfig,
    EPOCH_RANGE, FEATURE_SCHEMA_VERSION, LEARNING_RATE_RANGE, TRAIN_FRACTION,
};
use rirdist::{Features, Model, RoomId};
use serde::{Deserialize, Serialize};

use super::filter::{DecisionRow, FilterSummary, DECISIONS_FILE, FILTER_SCHEMA, SUMMARY_FILE};
use crate::args::TrainArgs;
use crate::dataset::{Dataset, MetadataRow, LOAD_CHUNK};
use crate::error::{check_schema, CliError, CliResult};
use crate::lock::OutputLock;
use crate::rooms::parse_room_ids;

pub const FEATURES_FILE: &str = "features.jsonl";
pub const MODEL_FILE: &str = "model.json";
pub const GRID_FILE: &str = "grid.json";
pub const GRID_SCHEMA: &str = "rir-grid/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "train" => Some(Split::Train),
            "val" => Some(Split::Val),
            "test" => Some(Split::Test),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub schema_version: String,
    pub rir_id: String,
    pub room_id: RoomId,
    pub distance_m: f64,
    pub split: Split,
    pub features: Features,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub schema_version: String,
    pub n_train: usize,
    pub n_val: usize,
    pub n_test: usize,
    pub search: GridSearchResult,
}

/// Seeds of the test hold-out and of the train/validation split.
fn split_seeds(seed: u64) -> (u64, u64) {
    (derive(seed, [1]), derive(seed, [2]))
}

fn accepted_rows(args: &TrainArgs, data: &Dataset) -> CliResult<Vec<MetadataRow>> {
    let summary_path = args.filtered.join(SUMMARY_FILE);
    if !summary_path.is_file() {
        return Err(CliError::MissingData(format!(
            "{} not found; run `filter` first",
            summary_path.display()
        )));
    }
    let summary: FilterSummary = read_json(&summary_path).map_err(CliError::input)?;
    check_schema(&summary_path.display().to_string(), &summary.schema_version, FILTER_SCHEMA)?;
    let decisions: Vec<DecisionRow> =
        read_jsonl(&args.filtered.join(DECISIONS_FILE)).map_err(CliError::input)?;
    let accepted: HashSet<&str> = decisions
        .iter()
        .filter(|d| d.accepted)
        .map(|d| d.rir_id.as_str())
        .collect();
    let rooms: Option<HashSet<u32>> = args
        .rooms
        .as_deref()
        .map(parse_room_ids)
        .transpose()?
        .map(|v| v.into_iter().collect());
    Ok(data
        .rows
        .iter()
        .filter(|r| accepted.contains(r.rir_id.as_str()))
        .filter(|r| rooms.as_ref().is_none_or(|set| set.contains(&r.room_id.0)))
        .cloned()
        .collect())
}

fn check_grid(args: &TrainArgs) -> CliResult<()> {
    if args.lr_grid.is_empty() || args.epoch_grid.is_empty() {
        return Err(CliError::Usage("grids must be nonempty".into()));
    }
    if let Some(&e) = args.epoch_grid.iter().find(|&&e| e == 0) {
        return Err(CliError::Usage(format!("epoch count {e} is not allowed")));
    }
    if args.no_range_check {
        return Ok(());
    }
    if let Some(lr) = args.lr_grid.iter().find(|lr| !LEARNING_RATE_RANGE.contains(lr)) {
        return Err(CliError::Usage(format!(
            "learning rate {lr} outside [1e-5, 1e-3]; pass --no-range-check to allow it"
        )));
    }
    if let Some(e) = args.epoch_grid.iter().find(|e| !EPOCH_RANGE.contains(e)) {
        return Err(CliError::Usage(format!(
            "epoch count {e} outside [5, 50]; pass --no-range-check to allow it"
        )));
    }
    Ok(())
}

fn extract_all(data: &Dataset, rows: &[MetadataRow]) -> Vec<(MetadataRow, Features)> {
    let mut out = Vec::with_capacity(rows.len());
    for chunk in rows.chunks(LOAD_CHUNK) {
        let part: Vec<Option<(MetadataRow, Features)>> = chunk
            .par_iter()
            .map(|meta| {
                let feats = data
                    .load(meta)
                    .and_then(|rir| extract_features(&rir).map_err(|e| e.to_string()));
                match feats {
                    Ok(f) => Some((meta.clone(), f)),
                    Err(e) => {
                        log::warn!("skipping {}: {e}", meta.rir_id);
                        None
                    }
                }
            })
            .collect();
        out.extend(part.into_iter().flatten());
    }
    out
}

pub fn run(args: &TrainArgs) -> CliResult<Model> {
    check_grid(args)?;
    let data = Dataset::open(&args.data)?;
    let rows = accepted_rows(args, &data)?;
    let _lock = OutputLock::acquire(&args.out)?;

    let samples = extract_all(&data, &rows);
    let indices: Vec<usize> = (0..samples.len()).collect();
    let (test_seed, val_seed) = split_seeds(args.seed);
    let too_small = |e| CliError::MissingData(format!("not enough accepted responses: {e}"));
    let (pool, test) = split_dataset(&indices, TRAIN_FRACTION, test_seed).map_err(too_small)?;
    let (tr, val) = split_dataset(&pool, TRAIN_FRACTION, val_seed).map_err(too_small)?;

    let mut split = vec![Split::Train; samples.len()];
    for &i in &val {
        split[i] = Split::Val;
    }
    for &i in &test {
        split[i] = Split::Test;
    }
    let pairs = |idx: &[usize]| -> Vec<(Features, f64)> {
        idx.iter().map(|&i| (samples[i].1, samples[i].0.distance_m)).collect()
    };

    let base = TrainConfig {
        seed: args.seed,
        batch_size: args.batch_size as usize,
        enforce_ranges: !args.no_range_check,
        ..Default::default()
    };
    let search = grid_search(&pairs(&tr), &pairs(&val), &args.lr_grid, &args.epoch_grid, &base)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let model = train(&pairs(&pool), &search.best).map_err(|e| CliError::Usage(e.to_string()))?;

    let feature_rows: Vec<FeatureRow> = samples
        .iter()
        .zip(&split)
        .map(|((meta, f), &s)| FeatureRow {
            schema_version: FEATURE_SCHEMA_VERSION.to_string(),
            rir_id: meta.rir_id.clone(),
            room_id: meta.room_id,
            distance_m: meta.distance_m,
            split: s,
            features: *f,
        })
        .collect();
    let grid = GridDocument {
        schema_version: GRID_SCHEMA.to_string(),
        n_train: tr.len(),
        n_val: val.len(),
        n_test: test.len(),
        search,
    };
    write_out(&args.out, &feature_rows, &grid, &model)?;
    println!(
        "trained on {} responses (lr {}, {} epochs, validation MAE {:.3} m); {} held out for test",
        pool.len(),
        grid.search.best.learning_rate,
        grid.search.best.epochs,
        grid.search.best_val_mae_m,
        test.len()
    );
    Ok(model)
}

fn write_out(dir: &Path, rows: &[FeatureRow], grid: &GridDocument, model: &Model) -> CliResult<()> {
    write_jsonl(&dir.join(FEATURES_FILE), rows).map_err(CliError::output)?;
    write_json(&dir.join(GRID_FILE), grid).map_err(CliError::output)?;
    write_json(&dir.join(MODEL_FILE), model).map_err(CliError::output)
}
