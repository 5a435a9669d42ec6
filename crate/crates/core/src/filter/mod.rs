//! Four-criterion quality filter for synthesized responses.
//!
//! A response is compared with its room's [`ReferenceProfile`] (built from enrollment
//! responses) on reverberation time, source-receiver distance, energy-decay shape and
//! early echo density. Every criterion is always evaluated, so a rejection lists all
//! reasons that apply.

mod batch;
mod decision;
mod profile;

pub use batch::{filter_batch, BatchReport};
pub use decision::{apply_quality_filter, FilterDecision, FilterSnapshot, RejectReason};
pub use profile::{build_reference_profile, ReferenceProfile, EDC_GRID_MS, EDC_GRID_POINTS};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acoustics::AcousticsError;
use crate::rir::RoomId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("reference profile needs at least 2 enrollment responses, got {0}")]
    TooFewEnrollment(usize),
    #[error("enrollment mixes rooms {expected} and {found}")]
    MixedRooms { expected: RoomId, found: RoomId },
    #[error("enrollment response {index} of room {room}: {source}")]
    Enrollment {
        room: RoomId,
        index: usize,
        source: AcousticsError,
    },
    #[error("no reference profile for room {0}")]
    UnknownRoom(RoomId),
    #[error("invalid filter criteria: {0}")]
    InvalidCriteria(&'static str),
}

/// Acceptance thresholds. Defaults: T60 within ±20 % of the room median and at most
/// 1.8695 s; source-receiver distance within [0.8, 7.1] m; EDC RMS deviation ≤ 6 dB;
/// early echo count within ±50 % of the reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterCriteria {
    pub t60_rel_tolerance: f64,
    pub t60_hard_cutoff_s: f64,
    pub dist_min_m: f64,
    pub dist_max_m: f64,
    pub edc_max_rms_dev_db: f64,
    pub echo_density_max_rel_dev: f64,
}

impl Default for FilterCriteria {
    fn default() -> Self {
        Self {
            t60_rel_tolerance: 0.20,
            t60_hard_cutoff_s: 1.8695,
            dist_min_m: 0.8,
            dist_max_m: 7.1,
            edc_max_rms_dev_db: 6.0,
            echo_density_max_rel_dev: 0.5,
        }
    }
}

impl FilterCriteria {
    pub fn validate(&self) -> Result<(), FilterError> {
        let positive = [
            self.t60_rel_tolerance,
            self.t60_hard_cutoff_s,
            self.edc_max_rms_dev_db,
            self.echo_density_max_rel_dev,
        ];
        if positive.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return Err(FilterError::InvalidCriteria("tolerances must be positive"));
        }
        if !(self.dist_min_m >= 0.0 && self.dist_min_m < self.dist_max_m) {
            return Err(FilterError::InvalidCriteria(
                "distance bounds must satisfy 0 <= min < max",
            ));
        }
        Ok(())
    }
}
