use serde::{Deserialize, Serialize};

use super::SdeError;
use crate::acoustics::{
    compute_drr, detect_direct_path, estimate_t60, physical_energy_db, schroeder_edc,
    AcousticsError,
};
use crate::rir::RIRecording;
use crate::scalar::{ratio_db, Real};

pub const FEATURE_DIM: usize = 6;
pub const FEATURE_SCHEMA_VERSION: &str = "rir-features/1";
pub const FEATURE_NAMES: [&str; FEATURE_DIM] = [
    "drr_db",
    "log_t60",
    "direct_delay_ms",
    "early_late_ratio_db",
    "total_energy_db",
    "bias",
];

/// T60 substituted when the response has too little decay to measure one.
pub const MISSING_T60_S: f64 = 0.01;

const EARLY_SPAN_MS: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FeatureVector<T> {
    pub drr_db: T,
    /// Natural log of T60 in seconds.
    pub log_t60: T,
    pub direct_delay_ms: T,
    /// Energy in the 50 ms from the direct path vs everything after, dB.
    pub early_late_ratio_db: T,
    /// Energy of the gain-restored response, dB.
    pub total_energy_db: T,
    pub bias: T,
    /// DRR hit the +100 dB ceiling (no reverberant energy).
    pub drr_ceiling: bool,
    /// T60 was unmeasurable and `log_t60` holds `ln(MISSING_T60_S)`.
    pub t60_missing: bool,
}

impl<T: Real> FeatureVector<T> {
    pub fn to_array(&self) -> [T; FEATURE_DIM] {
        [
            self.drr_db,
            self.log_t60,
            self.direct_delay_ms,
            self.early_late_ratio_db,
            self.total_energy_db,
            self.bias,
        ]
    }

    /// Builds a vector from raw values; `bias` is forced to 1.
    pub fn from_array(v: [T; FEATURE_DIM]) -> Self {
        Self {
            drr_db: v[0],
            log_t60: v[1],
            direct_delay_ms: v[2],
            early_late_ratio_db: v[3],
            total_energy_db: v[4],
            bias: T::one(),
            drr_ceiling: false,
            t60_missing: false,
        }
    }
}

pub fn extract_features<T: Real>(rir: &RIRecording<T>) -> Result<FeatureVector<T>, SdeError> {
    let fs = rir.sample_rate() as f64;
    let direct = detect_direct_path(rir)?;
    let drr = compute_drr(rir, direct)?;
    let (t60, t60_missing) = match estimate_t60(&schroeder_edc(rir)?, rir.sample_rate()) {
        Ok(est) => (est.seconds, false),
        Err(AcousticsError::InsufficientDecay { .. }) => (T::lit(MISSING_T60_S), true),
        Err(e) => return Err(e.into()),
    };

    let split = (direct + (EARLY_SPAN_MS * fs / 1000.0) as usize).min(rir.duration_samples());
    let energy = |s: &[T]| s.iter().map(|&x| x * x).sum::<T>();
    let (early_late_ratio_db, _) = ratio_db(
        energy(&rir.samples()[direct..split]),
        energy(&rir.samples()[split..]),
    );

    Ok(FeatureVector {
        drr_db: drr.db,
        log_t60: t60.ln(),
        direct_delay_ms: T::lit(direct as f64 / fs * 1000.0),
        early_late_ratio_db,
        total_energy_db: physical_energy_db(rir),
        bias: T::one(),
        drr_ceiling: drr.ceiling,
        t60_missing,
    })
}
