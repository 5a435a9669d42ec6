//! Position-conditioned impulse-response synthesis.
//!
//! Each room has one fixed acoustic profile; the only per-response inputs are the
//! source and receiver positions. Early reflections come from the shoebox image-source
//! method, the late part from seeded Gaussian noise under a Sabine-matched exponential
//! envelope.

mod image;
mod rooms;
mod scenes;
mod tail;

pub use image::{image_source_rir, ImageArrival, image_arrivals};
pub use rooms::{builtin_room, builtin_rooms, BUILTIN_ROOM_COUNT};
pub use scenes::{sample_scenes, SCENE_MIN_DISTANCE_M, SCENE_WALL_MARGIN_M};
pub use tail::{scene_seed, synthesize_batch, synthesize_rir, tail_time_constant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rir::{RIRecording, RirError, RoomId, DURATION_SAMPLES, SAMPLE_RATE, SPEED_OF_SOUND};
use crate::scalar::{distance, Real, Vec3};

/// Minimum clearance between any position and the walls, meters.
pub const WALL_CLEARANCE_M: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("room dimension {0} m outside [1, 30] m")]
    DimensionOutOfRange(f64),
    #[error("absorption {0} outside (0, 1)")]
    InvalidAbsorption(f64),
    #[error("{which} position {pos:?} is not inside the room with {WALL_CLEARANCE_M} m clearance")]
    OutsideRoom { which: &'static str, pos: [f64; 3] },
    #[error("source and receiver coincide")]
    CoincidentPositions,
    #[error("room {0} is too small for the sampling margin")]
    RoomTooSmall(RoomId),
    #[error("scene count must be at least 1")]
    EmptySceneCount,
    #[error("invalid synthesis config: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Rir(#[from] RirError),
}

/// Shoebox room with uniform broadband absorption.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ShoeboxRoom<T> {
    pub room_id: RoomId,
    /// Length, width, height in meters.
    pub dims: Vec3<T>,
    pub absorption: T,
    /// Seed of the diffuse-tail noise stream.
    pub seed: u64,
}

impl<T: Real> ShoeboxRoom<T> {
    pub fn new(room_id: RoomId, dims: Vec3<T>, absorption: T, seed: u64) -> Result<Self, GeometryError> {
        let room = Self {
            room_id,
            dims,
            absorption,
            seed,
        };
        room.validate()?;
        Ok(room)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        for &d in &self.dims {
            if !(d >= T::one() && d <= T::lit(30.0)) {
                return Err(GeometryError::DimensionOutOfRange(d.as_f64()));
            }
        }
        if !(self.absorption > T::zero() && self.absorption < T::one()) {
            return Err(GeometryError::InvalidAbsorption(self.absorption.as_f64()));
        }
        Ok(())
    }

    pub fn volume(&self) -> T {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn surface(&self) -> T {
        let [l, w, h] = self.dims;
        T::lit(2.0) * (l * w + l * h + w * h)
    }

    /// Sabine reverberation time `0.161·V / (α·S)`, seconds.
    pub fn sabine_t60(&self) -> T {
        T::lit(0.161) * self.volume() / (self.absorption * self.surface())
    }
}

/// Source and receiver positions, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SceneQuery<T> {
    pub source_pos: Vec3<T>,
    pub receiver_pos: Vec3<T>,
}

impl<T: Real> SceneQuery<T> {
    pub fn new(source_pos: Vec3<T>, receiver_pos: Vec3<T>) -> Self {
        Self {
            source_pos,
            receiver_pos,
        }
    }

    pub fn distance_m(&self) -> T {
        distance(&self.source_pos, &self.receiver_pos)
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.receiver_pos, self.source_pos)
    }

    pub fn validate(&self, room: &ShoeboxRoom<T>) -> Result<(), GeometryError> {
        let clearance = T::lit(WALL_CLEARANCE_M);
        for (which, pos) in [("source", &self.source_pos), ("receiver", &self.receiver_pos)] {
            let inside = pos
                .iter()
                .zip(room.dims.iter())
                .all(|(&p, &d)| p >= clearance && p <= d - clearance);
            if !inside {
                return Err(GeometryError::OutsideRoom {
                    which,
                    pos: pos.map(Real::as_f64),
                });
            }
        }
        let d = self.distance_m();
        if d.is_nan() || d <= T::zero() {
            return Err(GeometryError::CoincidentPositions);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    /// Highest image-source reflection order; 0 renders the direct path only.
    pub max_image_order: u32,
    /// Hand-over time from image sources to the stochastic tail, ms.
    pub tail_crossover_ms: f64,
    pub speed_of_sound: f64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            max_image_order: 6,
            tail_crossover_ms: 80.0,
            speed_of_sound: SPEED_OF_SOUND,
        }
    }
}

impl SynthesisConfig {
    pub fn sample_rate(&self) -> u32 {
        SAMPLE_RATE
    }

    pub fn duration_samples(&self) -> usize {
        DURATION_SAMPLES
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.tail_crossover_ms > 0.0 && self.tail_crossover_ms < 1000.0) {
            return Err(GeometryError::InvalidConfig("tail_crossover_ms must lie in (0, 1000)"));
        }
        if !(self.speed_of_sound > 0.0 && self.speed_of_sound.is_finite()) {
            return Err(GeometryError::InvalidConfig("speed_of_sound must be positive"));
        }
        Ok(())
    }

    pub(crate) fn crossover_samples(&self) -> f64 {
        self.tail_crossover_ms * SAMPLE_RATE as f64 / 1000.0
    }
}

/// Scales samples to unit peak and moves the scale into `norm_gain`. Idempotent.
pub fn normalize_rir<T: Real>(rir: &RIRecording<T>) -> Result<RIRecording<T>, RirError> {
    let peak = rir.samples().iter().fold(T::zero(), |m, s| m.max(s.abs()));
    if peak.is_zero() {
        return Err(RirError::ZeroEnergy);
    }
    if peak == T::one() {
        return Ok(rir.clone());
    }
    let samples = rir.samples().iter().map(|&s| s / peak).collect();
    RIRecording::with_gain(
        samples,
        rir.room_id,
        rir.source_pos,
        rir.receiver_pos,
        rir.norm_gain() * peak,
    )
}
