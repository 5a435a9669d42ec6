use std::ops::RangeInclusive;

use super::AcousticsError;
use crate::rir::{RIRecording, SAMPLE_RATE};
use crate::scalar::{ratio_db, Real};

/// Fraction of the global peak magnitude that marks the direct-path arrival.
pub const DIRECT_PATH_THRESHOLD: f64 = 0.5;
/// Direct-sound window before the detected arrival, ms.
pub const DRR_PRE_MS: f64 = 0.5;
/// Direct-sound window after the detected arrival, ms.
pub const DRR_POST_MS: f64 = 2.5;

/// First sample whose magnitude reaches half of the global peak.
pub fn detect_direct_path<T: Real>(rir: &RIRecording<T>) -> Result<usize, AcousticsError> {
    direct_index_of(rir.samples())
}

pub(crate) fn direct_index_of<T: Real>(samples: &[T]) -> Result<usize, AcousticsError> {
    let peak = samples.iter().fold(T::zero(), |m, s| m.max(s.abs()));
    if peak.is_zero() {
        return Err(AcousticsError::ZeroEnergy);
    }
    let threshold = T::lit(DIRECT_PATH_THRESHOLD) * peak;
    Ok(samples
        .iter()
        .position(|s| s.abs() >= threshold)
        .expect("peak sample satisfies the threshold"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drr<T> {
    pub db: T,
    /// Set when the reverberant energy vanished and `db` holds the +100 dB ceiling.
    pub ceiling: bool,
}

/// Inclusive sample range treated as direct sound around `direct_index`.
pub fn direct_window(direct_index: usize, len: usize) -> RangeInclusive<usize> {
    let ms = |ms: f64| (ms * SAMPLE_RATE as f64 / 1000.0).round() as usize;
    let start = direct_index.saturating_sub(ms(DRR_PRE_MS));
    let end = (direct_index + ms(DRR_POST_MS)).min(len.saturating_sub(1));
    start..=end
}

pub fn compute_drr<T: Real>(
    rir: &RIRecording<T>,
    direct_index: usize,
) -> Result<Drr<T>, AcousticsError> {
    let samples = rir.samples();
    if direct_index >= samples.len() {
        return Err(AcousticsError::IndexOutOfRange {
            index: direct_index,
            len: samples.len(),
        });
    }
    let window = direct_window(direct_index, samples.len());
    let (mut direct, mut reverberant) = (T::zero(), T::zero());
    for (i, &s) in samples.iter().enumerate() {
        if window.contains(&i) {
            direct = direct + s * s;
        } else {
            reverberant = reverberant + s * s;
        }
    }
    let (db, ceiling) = ratio_db(direct, reverberant);
    Ok(Drr { db, ceiling })
}
