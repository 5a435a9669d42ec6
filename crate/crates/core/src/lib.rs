//! Position-conditioned room impulse response synthesis, acoustic quality filtering
//! and speaker distance estimation.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases below fix the
//! scalar for the common cases.

pub mod acoustics;
pub mod filter;
pub mod fixtures;
pub mod io;
pub mod rir;
pub mod rng;
pub mod scalar;
pub mod sde;
pub mod stats;
pub mod synth;

pub use rir::{RIRecording, RirError, RoomId, DURATION_SAMPLES, SAMPLE_RATE, SPEED_OF_SOUND};
pub use scalar::{Real, Vec3};

pub type Rir = RIRecording<f64>;
pub type Rir32 = RIRecording<f32>;
pub type Metrics = acoustics::AcousticMetrics<f64>;
pub type Room = synth::ShoeboxRoom<f64>;
pub type Scene = synth::SceneQuery<f64>;
pub type Profile = filter::ReferenceProfile<f64>;
pub type Decision = filter::FilterDecision<f64>;
pub type Features = sde::FeatureVector<f64>;
pub type Model = sde::EstimatorModel<f64>;
