use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{apply_quality_filter, FilterCriteria, FilterDecision, FilterError, ReferenceProfile, RejectReason};
use crate::rir::{RIRecording, RoomId};
use crate::scalar::Real;

/// Outcome of filtering a corpus. Indices refer to the input order.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport<T> {
    pub decisions: Vec<FilterDecision<T>>,
    pub accepted: Vec<usize>,
    pub rejected: Vec<usize>,
    /// `accepted / input`; `None` for an empty corpus.
    pub yield_fraction: Option<f64>,
    /// Rejections per reason. Every reason is present, possibly with a zero count.
    pub reason_histogram: BTreeMap<RejectReason, usize>,
}

pub fn filter_batch<T: Real>(
    rirs: &[RIRecording<T>],
    profiles: &HashMap<RoomId, ReferenceProfile<T>>,
    criteria: &FilterCriteria,
) -> Result<BatchReport<T>, FilterError> {
    criteria.validate()?;
    if let Some(missing) = rirs.iter().find(|r| !profiles.contains_key(&r.room_id)) {
        return Err(FilterError::UnknownRoom(missing.room_id));
    }
    let decisions: Vec<FilterDecision<T>> = rirs
        .par_iter()
        .map(|r| apply_quality_filter(r, &profiles[&r.room_id], criteria))
        .collect();

    let (accepted, rejected): (Vec<usize>, Vec<usize>) =
        (0..decisions.len()).partition(|&i| decisions[i].accepted);
    let mut reason_histogram: BTreeMap<RejectReason, usize> =
        RejectReason::ALL.iter().map(|&r| (r, 0)).collect();
    for d in &decisions {
        for r in &d.reasons {
            *reason_histogram.entry(*r).or_default() += 1;
        }
    }
    let yield_fraction = (!rirs.is_empty()).then(|| accepted.len() as f64 / rirs.len() as f64);
    Ok(BatchReport {
        decisions,
        accepted,
        rejected,
        yield_fraction,
        reason_histogram,
    })
}
