use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rirdist::filter::{
    build_reference_profile, filter_batch, FilterCriteria, FilterError, RejectReason,
};
use rirdist::io::{write_atomic, write_json, write_jsonl};
use rirdist::stats::{Histogram, DISTANCE_BIN_M};
use rirdist::{Profile, Rir, RoomId};
use serde::{Deserialize, Serialize};

use crate::args::FilterArgs;
use crate::dataset::{Dataset, MetadataRow, LOAD_CHUNK};
use crate::error::{CliError, CliResult};
use crate::lock::OutputLock;

pub const FILTER_SCHEMA: &str = "rir-filter/1";
pub const DECISIONS_FILE: &str = "decisions.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PROFILES_FILE: &str = "profiles.json";
pub const ACCEPTED_HIST_FILE: &str = "accepted_distance_hist.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRow {
    pub rir_id: String,
    pub room_id: RoomId,
    pub accepted: bool,
    pub reasons: Vec<RejectReason>,
    pub distance_m: f64,
    pub t60_s: Option<f64>,
    pub drr_db: Option<f64>,
    pub edc_rms_dev_db: Option<f64>,
    pub echo_total: Option<u32>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSummary {
    pub schema_version: String,
    pub input_count: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted fraction; absent for an empty input.
    pub yield_fraction: Option<f64>,
    /// Rejections per reason code; a response may count under several reasons.
    pub reason_histogram: BTreeMap<RejectReason, usize>,
    pub criteria: FilterCriteria,
    pub accepted_distance_histogram: Histogram,
}

pub fn criteria_from(args: &FilterArgs) -> FilterCriteria {
    FilterCriteria {
        t60_rel_tolerance: args.t60_tol,
        t60_hard_cutoff_s: args.t60_cutoff,
        dist_min_m: args.dist_min,
        dist_max_m: args.dist_max,
        edc_max_rms_dev_db: args.edc_dev,
        echo_density_max_rel_dev: args.echo_dev,
    }
}

fn load_all(data: &Dataset, rows: &[MetadataRow]) -> CliResult<Vec<Rir>> {
    data.load_rows(rows)
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(CliError::MissingData)
}

/// One reference profile per room present in the enrollment set.
pub fn enrollment_profiles(enrollment: &Path) -> CliResult<HashMap<RoomId, Profile>> {
    let data = Dataset::open(enrollment)?;
    let mut by_room: BTreeMap<RoomId, Vec<MetadataRow>> = BTreeMap::new();
    for row in &data.rows {
        by_room.entry(row.room_id).or_default().push(row.clone());
    }
    let mut profiles = HashMap::new();
    for (room, rows) in by_room {
        let rirs = load_all(&data, &rows)?;
        let profile = build_reference_profile(&rirs).map_err(|e| match e {
            FilterError::TooFewEnrollment(n) => CliError::MissingData(format!(
                "room {room} has {n} enrollment responses, need at least 2"
            )),
            other => CliError::MissingData(format!("room {room}: {other}")),
        })?;
        profiles.insert(room, profile);
    }
    Ok(profiles)
}

pub fn run(args: &FilterArgs) -> CliResult<FilterSummary> {
    let criteria = criteria_from(args);
    criteria.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let data = Dataset::open(&args.input)?;
    let profiles = enrollment_profiles(&args.enrollment)?;
    if let Some(row) = data.rows.iter().find(|r| !profiles.contains_key(&r.room_id)) {
        return Err(CliError::MissingData(format!(
            "no enrollment profile for room {} (needed by {})",
            row.room_id, row.rir_id
        )));
    }
    let _lock = OutputLock::acquire(&args.out)?;

    let mut decisions = Vec::with_capacity(data.rows.len());
    for chunk in data.rows.chunks(LOAD_CHUNK) {
        let rirs = load_all(&data, chunk)?;
        let report = filter_batch(&rirs, &profiles, &criteria)
            .map_err(|e| CliError::MissingData(e.to_string()))?;
        for (meta, d) in chunk.iter().zip(report.decisions) {
            let snap = d.snapshot.as_ref();
            decisions.push(DecisionRow {
                rir_id: meta.rir_id.clone(),
                room_id: meta.room_id,
                accepted: d.accepted,
                reasons: d.reasons.iter().copied().collect(),
                distance_m: d.distance_m,
                t60_s: snap.map(|s| s.metrics.t60_s),
                drr_db: snap.map(|s| s.metrics.drr_db),
                edc_rms_dev_db: snap.map(|s| s.edc_rms_dev_db),
                echo_total: snap.map(|s| s.echo_total),
                error: d.error,
            });
        }
    }

    let mut reason_histogram: BTreeMap<RejectReason, usize> =
        RejectReason::ALL.iter().map(|&r| (r, 0)).collect();
    for d in &decisions {
        for r in &d.reasons {
            *reason_histogram.entry(*r).or_default() += 1;
        }
    }
    let accepted = decisions.iter().filter(|d| d.accepted).count();
    let hist = Histogram::from_values(
        decisions.iter().filter(|d| d.accepted).map(|d| d.distance_m),
        DISTANCE_BIN_M,
    );
    let summary = FilterSummary {
        schema_version: FILTER_SCHEMA.to_string(),
        input_count: decisions.len(),
        accepted,
        rejected: decisions.len() - accepted,
        yield_fraction: (!decisions.is_empty()).then(|| accepted as f64 / decisions.len() as f64),
        reason_histogram,
        criteria,
        accepted_distance_histogram: hist.clone(),
    };

    let mut sorted: Vec<&Profile> = profiles.values().collect();
    sorted.sort_by_key(|p| p.room_id);
    write_jsonl(&args.out.join(DECISIONS_FILE), &decisions).map_err(CliError::output)?;
    write_json(&args.out.join(PROFILES_FILE), &sorted).map_err(CliError::output)?;
    write_atomic(&args.out.join(ACCEPTED_HIST_FILE), hist.to_csv().as_bytes())
        .map_err(CliError::output)?;
    write_json(&args.out.join(SUMMARY_FILE), &summary).map_err(CliError::output)?;

    println!(
        "accepted {} of {} (yield {})",
        summary.accepted,
        summary.input_count,
        summary
            .yield_fraction
            .map_or("n/a".to_string(), |y| format!("{y:.3}"))
    );
    for (reason, n) in &summary.reason_histogram {
        println!("  {reason:<26} {n}");
    }
    Ok(summary)
}
