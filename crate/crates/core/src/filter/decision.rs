use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::profile::EDC_GRID_STEP;
use super::{FilterCriteria, ReferenceProfile};
use crate::acoustics::{measure, schroeder_edc, AcousticMetrics};
use crate::rir::RIRecording;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectReason {
    T60OutOfBand,
    T60AboveCutoff,
    DistanceTooClose,
    DistanceTooFar,
    EdcShapeMismatch,
    EarlyReflectionMismatch,
    /// A metric could not be extracted; the remaining acoustic criteria were not evaluable.
    AnalysisFailed,
}

impl RejectReason {
    pub const ALL: [RejectReason; 7] = [
        RejectReason::T60OutOfBand,
        RejectReason::T60AboveCutoff,
        RejectReason::DistanceTooClose,
        RejectReason::DistanceTooFar,
        RejectReason::EdcShapeMismatch,
        RejectReason::EarlyReflectionMismatch,
        RejectReason::AnalysisFailed,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RejectReason::T60OutOfBand => "T60_OUT_OF_BAND",
            RejectReason::T60AboveCutoff => "T60_ABOVE_CUTOFF",
            RejectReason::DistanceTooClose => "DISTANCE_TOO_CLOSE",
            RejectReason::DistanceTooFar => "DISTANCE_TOO_FAR",
            RejectReason::EdcShapeMismatch => "EDC_SHAPE_MISMATCH",
            RejectReason::EarlyReflectionMismatch => "EARLY_REFLECTION_MISMATCH",
            RejectReason::AnalysisFailed => "ANALYSIS_FAILED",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Quantities the verdict was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FilterSnapshot<T> {
    pub metrics: AcousticMetrics<T>,
    pub reference_t60_s: T,
    pub edc_rms_dev_db: T,
    pub echo_total: u32,
    pub reference_echo_total: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FilterDecision<T> {
    pub accepted: bool,
    pub reasons: BTreeSet<RejectReason>,
    /// Source-receiver distance from the scene metadata.
    pub distance_m: T,
    pub snapshot: Option<FilterSnapshot<T>>,
    pub error: Option<String>,
}

impl<T: Real> FilterDecision<T> {
    fn new(reasons: BTreeSet<RejectReason>, distance_m: T, snapshot: Option<FilterSnapshot<T>>, error: Option<String>) -> Self {
        Self {
            accepted: reasons.is_empty(),
            reasons,
            distance_m,
            snapshot,
            error,
        }
    }
}

fn edc_rms_deviation<T: Real>(edc_grid: &[T], profile: &ReferenceProfile<T>) -> T {
    let horizon_ms = profile.median_t60_s.as_f64() * 1000.0;
    let mut sum = 0.0;
    let mut n = 0usize;
    for (k, (a, b)) in edc_grid.iter().zip(&profile.median_edc_db).enumerate() {
        if (k * super::EDC_GRID_MS) as f64 > horizon_ms {
            break;
        }
        let d = (*a - *b).as_f64();
        sum += d * d;
        n += 1;
    }
    T::lit((sum / n.max(1) as f64).sqrt())
}

/// Evaluates every criterion against `profile`. Never fails: extraction errors reject
/// with [`RejectReason::AnalysisFailed`] and the error text.
pub fn apply_quality_filter<T: Real>(
    rir: &RIRecording<T>,
    profile: &ReferenceProfile<T>,
    criteria: &FilterCriteria,
) -> FilterDecision<T> {
    let mut reasons = BTreeSet::new();
    let distance = rir.distance_m();
    let d = distance.as_f64();
    if d < criteria.dist_min_m {
        reasons.insert(RejectReason::DistanceTooClose);
    }
    if d > criteria.dist_max_m {
        reasons.insert(RejectReason::DistanceTooFar);
    }

    let analysed = measure(rir).and_then(|m| Ok((m, schroeder_edc(rir)?)));
    let (metrics, edc) = match analysed {
        Ok(v) => v,
        Err(e) => {
            reasons.insert(RejectReason::AnalysisFailed);
            return FilterDecision::new(reasons, distance, None, Some(e.to_string()));
        }
    };

    let t60 = metrics.t60_s.as_f64();
    let reference_t60 = profile.median_t60_s.as_f64();
    if (t60 - reference_t60).abs() > criteria.t60_rel_tolerance * reference_t60 {
        reasons.insert(RejectReason::T60OutOfBand);
    }
    if t60 > criteria.t60_hard_cutoff_s {
        reasons.insert(RejectReason::T60AboveCutoff);
    }

    let edc_rms_dev_db = edc_rms_deviation(&edc.resample(EDC_GRID_STEP), profile);
    if edc_rms_dev_db.as_f64() > criteria.edc_max_rms_dev_db {
        reasons.insert(RejectReason::EdcShapeMismatch);
    }

    let echo_total: u32 = metrics.echo_density.iter().sum();
    let reference_echo_total = profile.echo_total();
    let reference = reference_echo_total.as_f64();
    if (echo_total as f64 - reference).abs() > criteria.echo_density_max_rel_dev * reference {
        reasons.insert(RejectReason::EarlyReflectionMismatch);
    }

    let snapshot = FilterSnapshot {
        metrics,
        reference_t60_s: profile.median_t60_s,
        edc_rms_dev_db,
        echo_total,
        reference_echo_total,
    };
    FilterDecision::new(reasons, distance, Some(snapshot), None)
}
