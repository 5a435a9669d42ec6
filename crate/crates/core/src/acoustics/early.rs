use super::AcousticsError;
use crate::rir::{RIRecording, SAMPLE_RATE};
use crate::scalar::Real;

pub const ECHO_WINDOWS: usize = 10;
pub const ECHO_WINDOW_MS: f64 = 5.0;
/// Peaks must exceed this fraction of the direct-path peak to count.
pub const ECHO_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchoDensity {
    /// Local-maximum counts per 5 ms window over the 50 ms after the direct path.
    pub counts: Vec<u32>,
    /// Set when the 50 ms span ran past the end of the response.
    pub truncated: bool,
}

impl EchoDensity {
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }
}

/// Counts significant local maxima in ten 5 ms windows starting at the direct path.
///
/// The direct arrival covers at most two samples (linear fractional delay), so its
/// peak is the larger magnitude of `direct_index` and its successor.
pub fn early_reflection_profile<T: Real>(
    rir: &RIRecording<T>,
    direct_index: usize,
) -> Result<EchoDensity, AcousticsError> {
    let x = rir.samples();
    let len = x.len();
    if direct_index >= len {
        return Err(AcousticsError::IndexOutOfRange {
            index: direct_index,
            len,
        });
    }
    let direct_peak = x[direct_index..(direct_index + 2).min(len)]
        .iter()
        .fold(T::zero(), |m, s| m.max(s.abs()));
    if direct_peak.is_zero() {
        return Err(AcousticsError::ZeroEnergy);
    }
    let threshold = T::lit(ECHO_THRESHOLD) * direct_peak;
    let window = (ECHO_WINDOW_MS * SAMPLE_RATE as f64 / 1000.0).round() as usize;
    let span_end = direct_index + window * ECHO_WINDOWS;

    let mag = |i: usize| x[i].abs();
    let mut counts = vec![0u32; ECHO_WINDOWS];
    for i in direct_index..span_end.min(len) {
        let m = mag(i);
        if m <= threshold {
            continue;
        }
        // Plateaus count once, at their first sample.
        let rises = i == 0 || m > mag(i - 1);
        let holds = i + 1 >= len || m >= mag(i + 1);
        if rises && holds {
            counts[(i - direct_index) / window] += 1;
        }
    }
    Ok(EchoDensity {
        counts,
        truncated: span_end > len,
    })
}
