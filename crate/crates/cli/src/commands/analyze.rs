use std::path::PathBuf;

use rayon::prelude::*;
use rirdist::acoustics::{
    compute_drr, detect_direct_path, early_reflection_profile, estimate_t60, index_to_distance,
    physical_energy_db, schroeder_edc, AcousticsError, DecayFit,
};
use rirdist::io::write_jsonl;
use rirdist::{Rir, RoomId};
use serde::{Deserialize, Serialize};

use crate::args::AnalyzeArgs;
use crate::dataset::{Dataset, MetadataRow, LOAD_CHUNK};
use crate::error::{CliError, CliResult};
use crate::lock::OutputLock;

pub const METRICS_FILE: &str = "metrics.jsonl";

/// One line of metrics.jsonl. When `error` is set the response could not be analyzed and
/// the metric fields are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub rir_id: String,
    pub room_id: RoomId,
    pub metadata_distance_m: f64,
    pub error: Option<String>,
    pub t60_s: Option<f64>,
    pub t60_method: Option<DecayFit>,
    /// Set when the decay was too shallow to fit.
    pub insufficient_decay: bool,
    pub t60_error: Option<String>,
    pub drr_db: Option<f64>,
    pub drr_ceiling: Option<bool>,
    pub direct_index: Option<usize>,
    pub direct_distance_m: Option<f64>,
    pub echo_density: Option<Vec<u32>>,
    pub total_energy_db: Option<f64>,
}

impl MetricsRow {
    fn failed(meta: &MetadataRow, error: String) -> Self {
        Self {
            error: Some(error),
            ..Self::blank(meta)
        }
    }

    fn blank(meta: &MetadataRow) -> Self {
        Self {
            rir_id: meta.rir_id.clone(),
            room_id: meta.room_id,
            metadata_distance_m: meta.distance_m,
            error: None,
            t60_s: None,
            t60_method: None,
            insufficient_decay: false,
            t60_error: None,
            drr_db: None,
            drr_ceiling: None,
            direct_index: None,
            direct_distance_m: None,
            echo_density: None,
            total_energy_db: None,
        }
    }
}

pub fn analyze_one(meta: &MetadataRow, rir: &Rir) -> MetricsRow {
    let direct = match detect_direct_path(rir) {
        Ok(i) => i,
        Err(e) => return MetricsRow::failed(meta, e.to_string()),
    };
    let mut row = MetricsRow::blank(meta);
    row.direct_index = Some(direct);
    row.direct_distance_m = Some(index_to_distance(direct, rir.sample_rate()));
    row.total_energy_db = Some(physical_energy_db(rir));
    match schroeder_edc(rir).and_then(|edc| estimate_t60(&edc, rir.sample_rate())) {
        Ok(t) => {
            row.t60_s = Some(t.seconds);
            row.t60_method = Some(t.method);
        }
        Err(e) => {
            row.insufficient_decay = matches!(e, AcousticsError::InsufficientDecay { .. });
            row.t60_error = Some(e.to_string());
        }
    }
    if let Ok(drr) = compute_drr(rir, direct) {
        row.drr_db = Some(drr.db);
        row.drr_ceiling = Some(drr.ceiling);
    }
    if let Ok(p) = early_reflection_profile(rir, direct) {
        row.echo_density = Some(p.counts);
    }
    row
}

pub fn run(args: &AnalyzeArgs) -> CliResult<PathBuf> {
    let data = Dataset::open(&args.input)?;
    let out_dir = args.out.clone().unwrap_or_else(|| args.input.clone());
    let _lock = OutputLock::acquire(&out_dir)?;

    let mut rows = Vec::with_capacity(data.rows.len());
    for chunk in data.rows.chunks(LOAD_CHUNK) {
        let part: Vec<MetricsRow> = chunk
            .par_iter()
            .map(|meta| match data.load(meta) {
                Ok(rir) => analyze_one(meta, &rir),
                Err(e) => MetricsRow::failed(meta, e),
            })
            .collect();
        rows.extend(part);
    }
    let path = out_dir.join(METRICS_FILE);
    write_jsonl(&path, &rows).map_err(CliError::output)?;

    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    println!("analyzed {} responses ({failed} failed) -> {}", rows.len(), path.display());
    if !rows.is_empty() && failed == rows.len() {
        return Err(CliError::MissingData(format!(
            "every response in {} failed to analyze",
            args.input.display()
        )));
    }
    Ok(path)
}
