use serde::{Deserialize, Serialize};

use super::AcousticsError;
use crate::rir::RIRecording;
use crate::scalar::{power_db, Real, DB_FLOOR};

/// Schroeder backward-integrated energy, in dB relative to the total.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDecayCurve<T> {
    values_db: Vec<T>,
    total_energy: T,
}

impl<T: Real> EnergyDecayCurve<T> {
    /// Wraps precomputed decibel values. `values_db` must start at 0 dB and never increase.
    pub fn from_db(values_db: Vec<T>, total_energy: T) -> Option<Self> {
        let starts_at_zero = values_db.first().is_some_and(|v| v.is_zero());
        let monotone = values_db.windows(2).all(|w| w[1] <= w[0]);
        (starts_at_zero && monotone && total_energy > T::zero()).then_some(Self {
            values_db,
            total_energy,
        })
    }

    pub fn values_db(&self) -> &[T] {
        &self.values_db
    }

    pub fn total_energy(&self) -> T {
        self.total_energy
    }

    pub fn len(&self) -> usize {
        self.values_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_db.is_empty()
    }

    /// Values every `step` samples, starting at index 0.
    pub fn resample(&self, step: usize) -> Vec<T> {
        self.values_db.iter().step_by(step.max(1)).copied().collect()
    }
}

pub fn schroeder_edc<T: Real>(rir: &RIRecording<T>) -> Result<EnergyDecayCurve<T>, AcousticsError> {
    edc_from_samples(rir.samples())
}

pub(crate) fn edc_from_samples<T: Real>(
    samples: &[T],
) -> Result<EnergyDecayCurve<T>, AcousticsError> {
    let mut remaining = vec![T::zero(); samples.len()];
    let mut acc = T::zero();
    for (r, &s) in remaining.iter_mut().zip(samples).rev() {
        acc = acc + s * s;
        *r = acc;
    }
    let total = acc;
    if total <= T::zero() {
        return Err(AcousticsError::ZeroEnergy);
    }
    // Rounding in the division can never push a later value above an earlier one
    // because `remaining` is non-increasing and division/log10 are monotone.
    let values_db = remaining.into_iter().map(|e| power_db(e / total)).collect();
    Ok(EnergyDecayCurve {
        values_db,
        total_energy: total,
    })
}

/// Which EDC segment produced a reverberation-time estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayFit {
    /// −5..−25 dB, extrapolated ×3.
    T20,
    /// −5..−15 dB, extrapolated ×6. Used when less than 30 dB of decay is available.
    T10,
}

impl DecayFit {
    fn segment(self) -> (f64, f64) {
        match self {
            DecayFit::T20 => (-5.0, -25.0),
            DecayFit::T10 => (-5.0, -15.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T60Estimate<T> {
    pub seconds: T,
    pub method: DecayFit,
}

const MIN_USABLE_DB: f64 = 15.0;
const T20_USABLE_DB: f64 = 30.0;
const MAX_COMPENSATION_ITERS: usize = 64;

/// Reverberation time from a least-squares line through the −5..−25 dB part of the EDC.
///
/// The finite response length truncates the backward integral, which bends the EDC
/// downward near the end. The energy missing past the last sample is estimated from the
/// fitted line itself and added back before refitting, until the estimate is stationary.
pub fn estimate_t60<T: Real>(
    edc: &EnergyDecayCurve<T>,
    sample_rate: u32,
) -> Result<T60Estimate<T>, AcousticsError> {
    let floor = T::lit(DB_FLOOR);
    let usable_db = edc
        .values_db
        .iter()
        .filter(|&&v| v > floor)
        .fold(0.0f64, |m, &v| m.min(v.as_f64()))
        .abs();
    if usable_db < MIN_USABLE_DB {
        return Err(AcousticsError::InsufficientDecay { usable_db });
    }
    let method = if usable_db >= T20_USABLE_DB {
        DecayFit::T20
    } else {
        DecayFit::T10
    };
    let (hi, lo) = method.segment();

    let energy: Vec<f64> = edc
        .values_db
        .iter()
        .map(|v| 10f64.powf(v.as_f64() / 10.0))
        .collect();
    let end = energy.len() as f64;

    let mut tail = 0.0f64;
    let mut slope = 0.0f64;
    for _ in 0..MAX_COMPENSATION_ITERS {
        let norm = 1.0 + tail;
        let (intercept, b) = fit_segment(&energy, tail, norm, hi, lo)
            .ok_or(AcousticsError::InsufficientDecay { usable_db })?;
        if b >= 0.0 {
            return Err(AcousticsError::InsufficientDecay { usable_db });
        }
        slope = b;
        let next = norm * 10f64.powf((intercept + b * end) / 10.0);
        let converged = (next - tail).abs() <= 1e-12 * norm;
        tail = next;
        if converged {
            break;
        }
    }
    let seconds = -60.0 / (slope * sample_rate as f64);
    Ok(T60Estimate {
        seconds: T::lit(seconds),
        method,
    })
}

/// Least-squares line `level = a + b·n` over samples whose compensated level lies in `[lo, hi]`.
fn fit_segment(energy: &[f64], tail: f64, norm: f64, hi: f64, lo: f64) -> Option<(f64, f64)> {
    let level = |e: f64| 10.0 * ((e + tail) / norm).log10();
    let start = energy.iter().position(|&e| level(e) <= hi)?;
    let stop = start + energy[start..].iter().take_while(|&&e| level(e) >= lo).count();
    let n = stop - start;
    if n < 2 {
        return None;
    }
    let x_mean = (start + stop - 1) as f64 / 2.0;
    let y_mean = energy[start..stop].iter().map(|&e| level(e)).sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &e) in energy[start..stop].iter().enumerate() {
        let dx = (start + i) as f64 - x_mean;
        sxy += dx * (level(e) - y_mean);
        sxx += dx * dx;
    }
    let b = sxy / sxx;
    Some((y_mean - b * x_mean, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rir::{RoomId, DURATION_SAMPLES, SAMPLE_RATE};
    use crate::fixtures::exponential_noise as exp_noise;

    fn t60_closed_form(tau: f64) -> f64 {
        60.0 * tau / (20.0 * std::f64::consts::E.log10())
    }

    #[test]
    fn unit_impulse_edc() {
        let rir = RIRecording::from_prefix(&[1.0f64], RoomId(1)).unwrap();
        let edc = schroeder_edc(&rir).unwrap();
        assert_eq!(edc.total_energy(), 1.0);
        assert_eq!(edc.values_db()[0], 0.0);
        assert!(edc.values_db()[1..].iter().all(|&v| v == DB_FLOOR));
        assert_eq!(edc.len(), DURATION_SAMPLES);
    }

    #[test]
    fn zero_signal_is_an_error() {
        assert_eq!(
            edc_from_samples(&[0.0f64; 16]).unwrap_err(),
            AcousticsError::ZeroEnergy
        );
    }

    #[test]
    fn scaling_cancels_in_edc() {
        let samples = exp_noise(0.1, 3);
        let a = RIRecording::from_prefix(&samples, RoomId(1)).unwrap();
        let scaled: Vec<f64> = samples.iter().map(|s| 3.0 * s).collect();
        let b = RIRecording::from_prefix(&scaled, RoomId(1)).unwrap();
        let (ea, eb) = (schroeder_edc(&a).unwrap(), schroeder_edc(&b).unwrap());
        approx::assert_relative_eq!(eb.total_energy(), 9.0 * ea.total_energy(), max_relative = 1e-12);
        for (x, y) in ea.values_db().iter().zip(eb.values_db()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn exponential_envelope_slope() {
        // Amplitude e^(-t/tau) decays at 20·log10(e)/tau dB/s in energy.
        let tau = 0.1;
        let rir = RIRecording::from_prefix(&exp_noise(tau, 11), RoomId(1)).unwrap();
        let edc = schroeder_edc(&rir).unwrap();
        let n = SAMPLE_RATE as usize / 2;
        let fs = SAMPLE_RATE as f64;
        let (xm, ym) = (
            (n - 1) as f64 / 2.0 / fs,
            edc.values_db()[..n].iter().sum::<f64>() / n as f64,
        );
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (i, &v) in edc.values_db()[..n].iter().enumerate() {
            let dx = i as f64 / fs - xm;
            sxy += dx * (v - ym);
            sxx += dx * dx;
        }
        let slope = sxy / sxx;
        let expected = -20.0 * std::f64::consts::E.log10() / tau;
        assert!((expected + 86.8589).abs() < 1e-3);
        assert!((slope - expected).abs() / expected.abs() < 0.02, "slope {slope}");
    }

    #[test]
    fn t60_matches_closed_form() {
        for (tau, seed) in [(0.1, 1u64), (0.3, 2)] {
            let rir = RIRecording::from_prefix(&exp_noise(tau, seed), RoomId(1)).unwrap();
            let est = estimate_t60(&schroeder_edc(&rir).unwrap(), SAMPLE_RATE).unwrap();
            let want = t60_closed_form(tau);
            assert_eq!(est.method, DecayFit::T20);
            assert!((est.seconds - want).abs() / want < 0.05, "tau {tau}: {} vs {want}", est.seconds);
        }
        assert!((t60_closed_form(0.1) - 0.6908).abs() < 1e-4);
        assert!((t60_closed_form(0.3) - 2.0724).abs() < 1e-4);
    }

    #[test]
    fn t60_scale_invariant() {
        let samples = exp_noise(0.2, 5);
        let base = RIRecording::from_prefix(&samples, RoomId(1)).unwrap();
        let t0 = estimate_t60(&schroeder_edc(&base).unwrap(), SAMPLE_RATE).unwrap();
        for k in [1e-3, 0.5, 7.0] {
            let r = base.rescaled(k).unwrap();
            let t = estimate_t60(&schroeder_edc(&r).unwrap(), SAMPLE_RATE).unwrap();
            assert!((t.seconds - t0.seconds).abs() < 1e-9 * t0.seconds);
        }
    }

    #[test]
    fn free_field_has_insufficient_decay() {
        let rir = RIRecording::from_prefix(&[0.0, 0.0, 1.0f64], RoomId(1)).unwrap();
        let err = estimate_t60(&schroeder_edc(&rir).unwrap(), SAMPLE_RATE).unwrap_err();
        assert!(matches!(err, AcousticsError::InsufficientDecay { .. }));
    }

    #[test]
    fn short_decay_falls_back_to_t10() {
        // Linear 60 dB/s decay that stops at -22 dB, then drops to the floor.
        let slope_per_sample = 60.0 / SAMPLE_RATE as f64;
        let values: Vec<f64> = (0..DURATION_SAMPLES)
            .map(|n| {
                let v = -slope_per_sample * n as f64;
                if v >= -22.0 {
                    v
                } else {
                    DB_FLOOR
                }
            })
            .collect();
        let edc = EnergyDecayCurve::from_db(values, 1.0).unwrap();
        let est = estimate_t60(&edc, SAMPLE_RATE).unwrap();
        assert_eq!(est.method, DecayFit::T10);
        assert!((est.seconds - 1.0).abs() < 1e-4, "{}", est.seconds);
    }

    #[test]
    fn from_db_validates() {
        assert!(EnergyDecayCurve::from_db(vec![0.0, -1.0, -0.5], 1.0).is_none());
        assert!(EnergyDecayCurve::from_db(vec![-1.0, -2.0], 1.0).is_none());
        assert!(EnergyDecayCurve::from_db(vec![0.0f64, -1.0], 1.0).is_some());
    }

    #[test]
    fn f32_path_agrees() {
        let samples: Vec<f32> = exp_noise(0.1, 9).iter().map(|&s| s as f32).collect();
        let rir = RIRecording::from_prefix(&samples, RoomId(1)).unwrap();
        let est = estimate_t60(&schroeder_edc(&rir).unwrap(), SAMPLE_RATE).unwrap();
        let want = t60_closed_form(0.1) as f32;
        assert!((est.seconds - want).abs() / want < 0.05);
    }
}
