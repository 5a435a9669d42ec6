//! Acoustic descriptors of a single impulse response: energy decay, reverberation
//! time, direct-path arrival, direct-to-reverberant ratio and early echo density.
//!
//! Every operation is a pure function of the samples and invariant under a positive
//! amplitude scale, so stored (normalized) and physical responses give the same answer.

mod decay;
mod direct;
mod early;

pub use decay::{estimate_t60, schroeder_edc, DecayFit, EnergyDecayCurve, T60Estimate};
pub use direct::{
    compute_drr, detect_direct_path, direct_window, Drr, DRR_POST_MS, DRR_PRE_MS,
    DIRECT_PATH_THRESHOLD,
};
pub use early::{
    early_reflection_profile, EchoDensity, ECHO_THRESHOLD, ECHO_WINDOWS, ECHO_WINDOW_MS,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rir::{RIRecording, SPEED_OF_SOUND};
use crate::scalar::{power_db, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcousticsError {
    #[error("signal has zero energy")]
    ZeroEnergy,
    #[error("insufficient decay: only {usable_db:.1} dB usable, need at least 15 dB")]
    InsufficientDecay { usable_db: f64 },
    #[error("sample index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Snapshot of every descriptor the filter and the estimator consume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AcousticMetrics<T> {
    pub t60_s: T,
    pub t60_method: DecayFit,
    pub drr_db: T,
    pub drr_ceiling: bool,
    pub direct_index: usize,
    pub geometric_distance_m: T,
    pub echo_density: Vec<u32>,
    pub echo_truncated: bool,
    /// Energy of the physical (gain-restored) response.
    pub total_energy_db: T,
}

/// Distance implied by a direct-path arrival at `index`.
pub fn index_to_distance<T: Real>(index: usize, sample_rate: u32) -> T {
    T::lit(index as f64 / sample_rate as f64 * SPEED_OF_SOUND)
}

/// Energy of `samples * norm_gain` in dB.
pub fn physical_energy_db<T: Real>(rir: &RIRecording<T>) -> T {
    let g = rir.norm_gain();
    let e: T = rir.samples().iter().map(|&s| (s * g) * (s * g)).sum();
    power_db(e)
}

/// Computes the full metric set. Fails if any descriptor cannot be measured.
pub fn measure<T: Real>(rir: &RIRecording<T>) -> Result<AcousticMetrics<T>, AcousticsError> {
    let edc = schroeder_edc(rir)?;
    let t60 = estimate_t60(&edc, rir.sample_rate())?;
    let direct_index = detect_direct_path(rir)?;
    let drr = compute_drr(rir, direct_index)?;
    let echo = early_reflection_profile(rir, direct_index)?;
    Ok(AcousticMetrics {
        t60_s: t60.seconds,
        t60_method: t60.method,
        drr_db: drr.db,
        drr_ceiling: drr.ceiling,
        direct_index,
        geometric_distance_m: index_to_distance(direct_index, rir.sample_rate()),
        echo_density: echo.counts,
        echo_truncated: echo.truncated,
        total_energy_db: physical_energy_db(rir),
    })
}
