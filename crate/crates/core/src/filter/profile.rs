use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FilterError;
use crate::acoustics::{
    detect_direct_path, early_reflection_profile, estimate_t60, schroeder_edc, AcousticsError,
    ECHO_WINDOWS,
};
use crate::rir::{RIRecording, RoomId, SAMPLE_RATE};
use crate::scalar::{median, Real};

/// Spacing of the reference EDC grid, ms.
pub const EDC_GRID_MS: usize = 10;
/// Grid points over one second.
pub const EDC_GRID_POINTS: usize = 100;

pub(crate) const EDC_GRID_STEP: usize = EDC_GRID_MS * SAMPLE_RATE as usize / 1000;

/// Per-room statistics of the enrollment responses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ReferenceProfile<T> {
    pub room_id: RoomId,
    pub median_t60_s: T,
    /// Pointwise median EDC at 0, 10, …, 990 ms.
    pub median_edc_db: Vec<T>,
    /// Per-window median echo counts.
    pub echo_density_ref: Vec<T>,
    pub n_enrollment: usize,
}

impl<T: Real> ReferenceProfile<T> {
    pub fn echo_total(&self) -> T {
        self.echo_density_ref.iter().copied().sum()
    }
}

struct EnrollmentStats<T> {
    t60: T,
    edc: Vec<T>,
    echo: Vec<u32>,
}

fn enrollment_stats<T: Real>(rir: &RIRecording<T>) -> Result<EnrollmentStats<T>, AcousticsError> {
    let edc = schroeder_edc(rir)?;
    let t60 = estimate_t60(&edc, rir.sample_rate())?.seconds;
    let direct = detect_direct_path(rir)?;
    let echo = early_reflection_profile(rir, direct)?.counts;
    Ok(EnrollmentStats {
        t60,
        edc: edc.resample(EDC_GRID_STEP),
        echo,
    })
}

pub fn build_reference_profile<T: Real>(
    enrollment: &[RIRecording<T>],
) -> Result<ReferenceProfile<T>, FilterError> {
    if enrollment.len() < 2 {
        return Err(FilterError::TooFewEnrollment(enrollment.len()));
    }
    let room_id = enrollment[0].room_id;
    if let Some(other) = enrollment.iter().find(|r| r.room_id != room_id) {
        return Err(FilterError::MixedRooms {
            expected: room_id,
            found: other.room_id,
        });
    }
    let stats = enrollment
        .par_iter()
        .enumerate()
        .map(|(index, rir)| {
            enrollment_stats(rir).map_err(|source| FilterError::Enrollment {
                room: room_id,
                index,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let t60s: Vec<T> = stats.iter().map(|s| s.t60).collect();
    let median_at = |f: &dyn Fn(&EnrollmentStats<T>) -> T| -> T {
        let column: Vec<T> = stats.iter().map(f).collect();
        median(&column).expect("non-empty enrollment")
    };
    let median_edc_db = (0..EDC_GRID_POINTS)
        .map(|k| median_at(&|s| s.edc[k]))
        .collect();
    let echo_density_ref = (0..ECHO_WINDOWS)
        .map(|w| median_at(&|s| T::lit(s.echo[w] as f64)))
        .collect();

    Ok(ReferenceProfile {
        room_id,
        median_t60_s: median(&t60s).expect("non-empty enrollment"),
        median_edc_db,
        echo_density_ref,
        n_enrollment: enrollment.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acoustics::measure;
    use crate::fixtures::exponential_noise;
    use crate::synth::{builtin_room, sample_scenes, synthesize_rir, SynthesisConfig};

    fn noise_rir(tau: f64, seed: u64, room: u32) -> RIRecording<f64> {
        RIRecording::from_prefix(&exponential_noise(tau, seed), RoomId(room)).unwrap()
    }

    #[test]
    fn duplicates_reproduce_the_single_response() {
        let r = noise_rir(0.1, 4, 1);
        let p = build_reference_profile(&[r.clone(), r.clone()]).unwrap();
        let m = measure(&r).unwrap();
        assert_eq!(p.median_t60_s, m.t60_s);
        assert_eq!(p.n_enrollment, 2);
        assert_eq!(p.median_edc_db.len(), EDC_GRID_POINTS);
        assert_eq!(p.median_edc_db, schroeder_edc(&r).unwrap().resample(EDC_GRID_STEP));
        let echo: Vec<f64> = m.echo_density.iter().map(|&c| c as f64).collect();
        assert_eq!(p.echo_density_ref, echo);
    }

    #[test]
    fn median_t60_of_three() {
        // Closed-form T60 = 6.9078·tau; pick taus near 0.4, 0.5, 0.9 s.
        let k = 60.0 / (20.0 * std::f64::consts::E.log10());
        let rirs: Vec<_> = [0.4, 0.5, 0.9]
            .iter()
            .enumerate()
            .map(|(i, t)| noise_rir(t / k, 30 + i as u64, 1))
            .collect();
        let t60s: Vec<f64> = rirs.iter().map(|r| measure(r).unwrap().t60_s).collect();
        let p = build_reference_profile(&rirs).unwrap();
        assert_eq!(p.median_t60_s, t60s[1]);
        assert!((p.median_t60_s - 0.5).abs() < 0.025);
    }

    #[test]
    fn enrollment_errors() {
        let r = noise_rir(0.1, 4, 1);
        assert_eq!(
            build_reference_profile(std::slice::from_ref(&r)),
            Err(FilterError::TooFewEnrollment(1))
        );
        let other = noise_rir(0.1, 5, 2);
        assert_eq!(
            build_reference_profile(&[r.clone(), other]),
            Err(FilterError::MixedRooms {
                expected: RoomId(1),
                found: RoomId(2)
            })
        );
        let free = RIRecording::from_prefix(&[1.0f64], RoomId(1)).unwrap();
        assert!(matches!(
            build_reference_profile(&[r, free]),
            Err(FilterError::Enrollment { index: 1, .. })
        ));
    }

    #[test]
    fn synthesized_profile_tracks_sabine() {
        let room = builtin_room::<f64>(3).unwrap();
        let cfg = SynthesisConfig::default();
        let rirs: Vec<_> = sample_scenes(&room, 20, 77)
            .unwrap()
            .iter()
            .map(|q| synthesize_rir(&room, q, &cfg).unwrap())
            .collect();
        let p = build_reference_profile(&rirs).unwrap();
        let sabine = room.sabine_t60();
        assert!((p.median_t60_s - sabine).abs() / sabine < 0.2);
    }
}
