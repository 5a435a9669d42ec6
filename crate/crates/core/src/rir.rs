//! The impulse-response record passed between every stage of the pipeline.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{distance, Real, Vec3};

/// Output sample rate of every impulse response, in Hz.
pub const SAMPLE_RATE: u32 = 32_000;
/// Length of every impulse response: one second at [`SAMPLE_RATE`].
pub const DURATION_SAMPLES: usize = 32_000;
/// Speed of sound used for every delay/distance conversion, m/s.
pub const SPEED_OF_SOUND: f64 = 343.0;

/// Identifier of a room acoustic profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoomId(pub u32);

impl fmt::Display for RoomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RirError {
    #[error("impulse response has {got} samples, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("impulse response has zero energy")]
    ZeroEnergy,
    #[error("normalization gain must be positive and finite, got {0}")]
    InvalidGain(f64),
    #[error("impulse response contains non-finite samples")]
    NonFinite,
}

/// A 1 s, 32 kHz impulse response together with the scene it was rendered for.
///
/// `samples * norm_gain` restores physical amplitudes; stored samples are usually
/// peak-normalized (see [`crate::synth::normalize_rir`]).
#[derive(Debug, Clone, PartialEq)]
pub struct RIRecording<T> {
    samples: Vec<T>,
    pub source_pos: Vec3<T>,
    pub receiver_pos: Vec3<T>,
    pub room_id: RoomId,
    norm_gain: T,
}

impl<T: Real> RIRecording<T> {
    pub fn new(
        samples: Vec<T>,
        room_id: RoomId,
        source_pos: Vec3<T>,
        receiver_pos: Vec3<T>,
    ) -> Result<Self, RirError> {
        Self::with_gain(samples, room_id, source_pos, receiver_pos, T::one())
    }

    pub fn with_gain(
        samples: Vec<T>,
        room_id: RoomId,
        source_pos: Vec3<T>,
        receiver_pos: Vec3<T>,
        norm_gain: T,
    ) -> Result<Self, RirError> {
        if samples.len() != DURATION_SAMPLES {
            return Err(RirError::WrongLength {
                got: samples.len(),
                expected: DURATION_SAMPLES,
            });
        }
        if !(norm_gain > T::zero() && norm_gain.is_finite()) {
            return Err(RirError::InvalidGain(norm_gain.as_f64()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(RirError::NonFinite);
        }
        if samples.iter().all(|s| s.is_zero()) {
            return Err(RirError::ZeroEnergy);
        }
        Ok(Self {
            samples,
            source_pos,
            receiver_pos,
            room_id,
            norm_gain,
        })
    }

    /// Zero-padded response of `DURATION_SAMPLES` built from a short prefix; positions at the origin.
    pub fn from_prefix(prefix: &[T], room_id: RoomId) -> Result<Self, RirError> {
        let mut samples = vec![T::zero(); DURATION_SAMPLES];
        let n = prefix.len().min(DURATION_SAMPLES);
        samples[..n].copy_from_slice(&prefix[..n]);
        let origin = [T::zero(); 3];
        Self::new(samples, room_id, origin, origin)
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn norm_gain(&self) -> T {
        self.norm_gain
    }

    pub fn sample_rate(&self) -> u32 {
        SAMPLE_RATE
    }

    pub fn duration_samples(&self) -> usize {
        self.samples.len()
    }

    /// Source-receiver distance from the scene metadata.
    pub fn distance_m(&self) -> T {
        distance(&self.source_pos, &self.receiver_pos)
    }

    /// Same scene, samples multiplied by `k` and gain divided by `k`.
    pub fn rescaled(&self, k: T) -> Result<Self, RirError> {
        let samples = self.samples.iter().map(|&s| s * k).collect();
        Self::with_gain(
            samples,
            self.room_id,
            self.source_pos,
            self.receiver_pos,
            self.norm_gain / k,
        )
    }

    /// Converts to another scalar type, e.g. after reading `f32` WAV data.
    pub fn cast<U: Real>(&self) -> Result<RIRecording<U>, RirError> {
        let conv = |p: &Vec3<T>| p.map(|x| U::lit(x.as_f64()));
        RIRecording::with_gain(
            self.samples.iter().map(|s| U::lit(s.as_f64())).collect(),
            self.room_id,
            conv(&self.source_pos),
            conv(&self.receiver_pos),
            U::lit(self.norm_gain.as_f64()),
        )
    }
}
