use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::image::{image_arrivals, render_arrivals};
use super::{GeometryError, SceneQuery, ShoeboxRoom, SynthesisConfig};
use crate::rir::{RIRecording, DURATION_SAMPLES, SAMPLE_RATE};
use crate::acoustics::DRR_POST_MS;
use crate::rng;
use crate::scalar::Real;

const HANDOVER_MIN_AFTER_DIRECT_MS: f64 = 10.0;

/// Amplitude time constant of an exponential envelope with the given T60.
pub fn tail_time_constant(t60_s: f64) -> f64 {
    t60_s * 20.0 * std::f64::consts::E.log10() / 60.0
}

/// Seed of the tail noise for one scene: a function of the room seed and the positions.
pub fn scene_seed<T: Real>(room: &ShoeboxRoom<T>, query: &SceneQuery<T>) -> u64 {
    let coords = query
        .source_pos
        .iter()
        .chain(query.receiver_pos.iter())
        .map(|c| c.as_f64().to_bits());
    rng::derive(room.seed, std::iter::once(room.room_id.0 as u64).chain(coords))
}

/// Shortest path any image of order `max_order + 1` can have, for any positions.
///
/// Along an axis of length `L`, an image reflected `c ≥ 1` times sits at least
/// `(c − 1)·L` from the receiver, so every arrival shorter than the returned length is
/// already present in the truncated image set.
fn complete_horizon_m<T: Real>(room: &ShoeboxRoom<T>, max_order: u32) -> f64 {
    let dims = room.dims.map(Real::as_f64);
    let k = max_order + 1;
    let mut best = f64::INFINITY;
    for cx in 0..=k {
        for cy in 0..=(k - cx) {
            let cz = k - cx - cy;
            let len = [cx, cy, cz]
                .iter()
                .zip(dims.iter())
                .map(|(&c, &d)| (c.saturating_sub(1) as f64 * d).powi(2))
                .sum::<f64>()
                .sqrt();
            best = best.min(len);
        }
    }
    best
}

/// Full 1 s response: image-source early part plus a Sabine-matched stochastic tail.
///
/// Image arrivals are kept up to the hand-over point `h`: the configured crossover or,
/// if earlier, the time up to which the truncated image set is complete (never less than
/// 10 ms after the direct sound). The tail starts at `h`; its gain makes the expected
/// envelope energy over `[h/2, h)`, excluding the direct sound, equal the image-source
/// energy there, so the tail continues the early decay.
pub fn synthesize_rir<T: Real>(
    room: &ShoeboxRoom<T>,
    query: &SceneQuery<T>,
    config: &SynthesisConfig,
) -> Result<RIRecording<T>, GeometryError> {
    let fs = SAMPLE_RATE as f64;
    let ms = |x: f64| x * fs / 1000.0;
    let mut arrivals = image_arrivals(room, query, config)?;
    let direct = arrivals
        .iter()
        .find(|a| a.order == 0)
        .map_or(0.0, |a| a.delay_samples);
    let horizon = complete_horizon_m(room, config.max_image_order) / config.speed_of_sound * fs;
    let handover = config
        .crossover_samples()
        .min(horizon.max(direct + ms(HANDOVER_MIN_AFTER_DIRECT_MS)));
    arrivals.retain(|a| a.order == 0 || a.delay_samples < handover);

    let mut buf = vec![0.0f64; DURATION_SAMPLES];
    render_arrivals(&arrivals, &mut buf);

    let tau = tail_time_constant(room.sabine_t60().as_f64());
    let env = |n: usize| (-(n as f64) / fs / tau).exp();
    let start = (handover.ceil() as usize).min(DURATION_SAMPLES);
    let direct_end = (direct + ms(DRR_POST_MS)).ceil() as usize + 1;
    let match_from = (start / 2).max(direct_end).min(start.saturating_sub(1));

    let span = (start - match_from).max(1) as f64;
    let early_energy = buf[match_from..start].iter().map(|s| s * s).sum::<f64>() / span;
    let env_energy = (match_from..start).map(|n| env(n) * env(n)).sum::<f64>() / span;
    let gain = if early_energy > 0.0 && env_energy > 0.0 {
        (early_energy / env_energy).sqrt()
    } else {
        // No image arrived in the matching span: level of a single path reaching
        // the receiver at the hand-over after one reflection.
        let path = config.speed_of_sound * start as f64 / fs;
        (1.0 - room.absorption.as_f64()).sqrt() / path / env(start)
    };

    let mut noise = rng::seeded(scene_seed(room, query));
    for (n, s) in buf.iter_mut().enumerate().skip(start) {
        let z: f64 = StandardNormal.sample(&mut noise);
        *s += gain * env(n) * z;
    }

    Ok(RIRecording::new(
        buf.into_iter().map(T::lit).collect(),
        room.room_id,
        query.source_pos,
        query.receiver_pos,
    )?)
}

/// Synthesizes every query in parallel; output order follows `queries`.
pub fn synthesize_batch<T: Real>(
    room: &ShoeboxRoom<T>,
    queries: &[SceneQuery<T>],
    config: &SynthesisConfig,
) -> Vec<Result<RIRecording<T>, GeometryError>> {
    queries
        .par_iter()
        .map(|q| synthesize_rir(room, q, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acoustics::{detect_direct_path, estimate_t60, schroeder_edc};
    use crate::rir::RoomId;

    fn room(absorption: f64) -> ShoeboxRoom<f64> {
        ShoeboxRoom::new(RoomId(1), [5.0, 4.0, 3.0], absorption, 17).unwrap()
    }

    fn query() -> SceneQuery<f64> {
        SceneQuery::new([1.2, 1.1, 1.4], [3.6, 2.7, 1.5])
    }

    fn t60(rir: &RIRecording<f64>) -> f64 {
        estimate_t60(&schroeder_edc(rir).unwrap(), SAMPLE_RATE).unwrap().seconds
    }

    #[test]
    fn deterministic_and_full_length() {
        let cfg = SynthesisConfig::default();
        let a = synthesize_rir(&room(0.3), &query(), &cfg).unwrap();
        let b = synthesize_rir(&room(0.3), &query(), &cfg).unwrap();
        assert_eq!(a.samples(), b.samples());
        assert_eq!(a.duration_samples(), 32_000);
        assert_eq!(a.sample_rate(), 32_000);
        let batch = synthesize_batch(&room(0.3), &[query(), query()], &cfg);
        assert_eq!(batch[1].as_ref().unwrap().samples(), a.samples());
    }

    #[test]
    fn t60_tracks_sabine() {
        let r = room(0.3);
        let est = t60(&synthesize_rir(&r, &query(), &SynthesisConfig::default()).unwrap());
        let sabine = r.sabine_t60();
        assert!((est - sabine).abs() / sabine < 0.2, "{est} vs {sabine}");
    }

    #[test]
    fn t60_decreases_with_absorption() {
        let cfg = SynthesisConfig::default();
        let ts: Vec<f64> = [0.2, 0.3, 0.4, 0.6]
            .iter()
            .map(|&a| t60(&synthesize_rir(&room(a), &query(), &cfg).unwrap()))
            .collect();
        assert!(ts.windows(2).all(|w| w[1] < w[0]), "{ts:?}");
    }

    #[test]
    fn reciprocal_early_part() {
        let cfg = SynthesisConfig::default();
        let r = room(0.3);
        let a = synthesize_rir(&r, &query(), &cfg).unwrap();
        let b = synthesize_rir(&r, &query().swapped(), &cfg).unwrap();
        assert_eq!(detect_direct_path(&a).unwrap(), detect_direct_path(&b).unwrap());
        let fwd = image_arrivals(&r, &query(), &cfg).unwrap();
        let rev = image_arrivals(&r, &query().swapped(), &cfg).unwrap();
        assert_eq!(fwd.len(), rev.len());
        for (x, y) in fwd.iter().zip(&rev) {
            assert!((x.delay_samples - y.delay_samples).abs() < 1e-6);
        }
    }

    #[test]
    fn tail_constant_round_trip() {
        assert!((tail_time_constant(0.6908) - 0.1).abs() < 1e-4);
    }
}
