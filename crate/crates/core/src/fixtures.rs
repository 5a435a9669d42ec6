//! Deterministic test signals and crafted corpora with known analytic properties.

use rand_distr::{Distribution, StandardNormal};

use crate::filter::RejectReason;
use crate::rir::{RIRecording, RoomId, DURATION_SAMPLES, SAMPLE_RATE};
use crate::rng;

/// `n` samples of zero-mean Gaussian noise with standard deviation `sigma`.
pub fn gaussian_noise(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut r = rng::seeded(seed);
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut r);
            sigma * z
        })
        .collect()
}

/// One second of Gaussian noise under the amplitude envelope `e^(−t/tau)`.
pub fn exponential_noise(tau: f64, seed: u64) -> Vec<f64> {
    let fs = SAMPLE_RATE as f64;
    gaussian_noise(DURATION_SAMPLES, 1.0, seed)
        .into_iter()
        .enumerate()
        .map(|(n, z)| z * (-(n as f64) / fs / tau).exp())
        .collect()
}

/// Shape of a crafted response: unit direct impulse at 10 ms, a burst of discrete
/// reflections within the next 4 ms, then a Gaussian tail under an exponential envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CraftedShape {
    pub tail_t60_s: f64,
    /// Standard deviation of the tail at the direct arrival.
    pub tail_sigma: f64,
    /// Discrete reflections of amplitude [`CRAFTED_REFLECTION_AMPLITUDE`], spaced
    /// [`CRAFTED_REFLECTION_SPACING`] samples apart.
    pub reflections: usize,
    /// Silence between the direct arrival and the onset of the tail.
    pub tail_delay_ms: f64,
    /// Source-receiver distance written into the metadata.
    pub distance_m: f64,
}

pub const CRAFTED_DIRECT_INDEX: usize = 320;
pub const CRAFTED_REFLECTION_AMPLITUDE: f64 = 0.3;
pub const CRAFTED_REFLECTION_SPACING: usize = 12;

impl CraftedShape {
    pub const fn baseline(tail_t60_s: f64) -> Self {
        Self {
            tail_t60_s,
            tail_sigma: 0.02,
            reflections: 6,
            tail_delay_ms: 0.0,
            distance_m: 3.0,
        }
    }

    pub fn render(&self, room: RoomId, seed: u64) -> RIRecording<f64> {
        let fs = SAMPLE_RATE as f64;
        let tau = crate::synth::tail_time_constant(self.tail_t60_s);
        let noise = gaussian_noise(DURATION_SAMPLES, self.tail_sigma, seed);
        let mut x = vec![0.0; DURATION_SAMPLES];
        let onset = CRAFTED_DIRECT_INDEX + 1 + (self.tail_delay_ms * fs / 1000.0) as usize;
        for (n, v) in x.iter_mut().enumerate().skip(onset) {
            let t = (n - onset) as f64 / fs;
            *v = noise[n] * (-t / tau).exp();
        }
        x[CRAFTED_DIRECT_INDEX] = 1.0;
        for k in 1..=self.reflections.min(10) {
            x[CRAFTED_DIRECT_INDEX + k * CRAFTED_REFLECTION_SPACING] = CRAFTED_REFLECTION_AMPLITUDE;
        }
        let source = [1.0, 1.0, 1.0];
        let receiver = [1.0 + self.distance_m, 1.0, 1.0];
        RIRecording::new(x, room, source, receiver).expect("crafted response is valid")
    }
}

/// One member of the crafted filter corpus with the verdict it must receive.
#[derive(Debug, Clone)]
pub struct CraftedCase {
    pub name: &'static str,
    pub rir: RIRecording<f64>,
    pub expected: Option<RejectReason>,
}

/// Room of the short-decay reference (median T60 ≈ 0.5 s).
pub const CRAFTED_ROOM_SHORT: RoomId = RoomId(1);
/// Room of the long-decay reference (median T60 ≈ 1.7 s).
pub const CRAFTED_ROOM_LONG: RoomId = RoomId(2);

/// Three enrollment responses per crafted room.
pub fn crafted_enrollment() -> Vec<RIRecording<f64>> {
    let short = CraftedShape::baseline(0.5);
    let long = CraftedShape {
        tail_sigma: 0.01,
        ..CraftedShape::baseline(1.7)
    };
    (0..3)
        .map(|i| short.render(CRAFTED_ROOM_SHORT, 100 + i))
        .chain((0..3).map(|i| long.render(CRAFTED_ROOM_LONG, 110 + i)))
        .collect()
}

/// Eight responses: two that pass and six that each violate exactly one criterion.
/// Under the default criteria the corpus yields exactly 0.25.
pub fn crafted_corpus() -> Vec<CraftedCase> {
    let base = CraftedShape::baseline(0.5);
    let case = |name, shape: CraftedShape, room, seed, expected| CraftedCase {
        name,
        rir: shape.render(room, seed),
        expected,
    };
    vec![
        case("good_a", base, CRAFTED_ROOM_SHORT, 200, None),
        case("good_b", base, CRAFTED_ROOM_SHORT, 201, None),
        case(
            "too_close",
            CraftedShape { distance_m: 0.5, ..base },
            CRAFTED_ROOM_SHORT,
            202,
            Some(RejectReason::DistanceTooClose),
        ),
        case(
            "too_far",
            CraftedShape { distance_m: 7.5, ..base },
            CRAFTED_ROOM_SHORT,
            203,
            Some(RejectReason::DistanceTooFar),
        ),
        case(
            "t60_out_of_band",
            CraftedShape {
                tail_t60_s: 0.65,
                tail_sigma: CRAFTED_BAND_SIGMA,
                ..base
            },
            CRAFTED_ROOM_SHORT,
            204,
            Some(RejectReason::T60OutOfBand),
        ),
        case(
            "t60_above_cutoff",
            CraftedShape {
                tail_t60_s: 1.95,
                tail_sigma: 0.01,
                ..base
            },
            CRAFTED_ROOM_LONG,
            205,
            Some(RejectReason::T60AboveCutoff),
        ),
        case(
            "edc_shape",
            CraftedShape {
                tail_delay_ms: 100.0,
                tail_sigma: 0.03,
                ..base
            },
            CRAFTED_ROOM_SHORT,
            206,
            Some(RejectReason::EdcShapeMismatch),
        ),
        case(
            "early_reflections",
            CraftedShape {
                reflections: 0,
                ..base
            },
            CRAFTED_ROOM_SHORT,
            207,
            Some(RejectReason::EarlyReflectionMismatch),
        ),
    ]
}

const CRAFTED_BAND_SIGMA: f64 = 0.008;
