use super::{GeometryError, SceneQuery, ShoeboxRoom, SynthesisConfig};
use crate::rir::{RIRecording, DURATION_SAMPLES, SAMPLE_RATE};
use crate::scalar::Real;

/// One specular path from an image source to the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageArrival {
    /// Arrival time in (fractional) samples.
    pub delay_samples: f64,
    pub amplitude: f64,
    /// Number of wall reflections along the path.
    pub order: u32,
    pub path_length_m: f64,
}

/// Enumerates image sources up to `max_image_order` that arrive before the tail crossover.
///
/// Along each axis of length `L` the image coordinate is `(1 − 2q)·s + 2mL`, reflecting
/// `|m − q| + |m|` times. The direct path is always kept. Sorted by delay.
pub fn image_arrivals<T: Real>(
    room: &ShoeboxRoom<T>,
    query: &SceneQuery<T>,
    config: &SynthesisConfig,
) -> Result<Vec<ImageArrival>, GeometryError> {
    room.validate()?;
    query.validate(room)?;
    config.validate()?;

    let order = config.max_image_order as i64;
    let fs = SAMPLE_RATE as f64;
    let crossover = config.crossover_samples();
    let reflect = 1.0 - room.absorption.as_f64();
    let dims = room.dims.map(Real::as_f64);
    let src = query.source_pos.map(Real::as_f64);
    let rcv = query.receiver_pos.map(Real::as_f64);

    // Per-axis candidates: (offset from receiver, reflection count).
    let axis = |a: usize| -> Vec<(f64, u32)> {
        let mut out = Vec::new();
        for m in -order..=order {
            for q in 0..=1i64 {
                let count = ((m - q).abs() + m.abs()) as u32;
                if count as i64 > order {
                    continue;
                }
                let img = (1 - 2 * q) as f64 * src[a] + 2.0 * m as f64 * dims[a];
                out.push((img - rcv[a], count));
            }
        }
        out
    };
    let (ax, ay, az) = (axis(0), axis(1), axis(2));

    let mut arrivals = Vec::new();
    for &(dx, cx) in &ax {
        for &(dy, cy) in &ay {
            let cxy = cx + cy;
            if cxy as i64 > order {
                continue;
            }
            for &(dz, cz) in &az {
                let count = cxy + cz;
                if count as i64 > order {
                    continue;
                }
                let path = (dx * dx + dy * dy + dz * dz).sqrt();
                let delay = snap(path * fs / config.speed_of_sound);
                if count > 0 && delay >= crossover {
                    continue;
                }
                arrivals.push(ImageArrival {
                    delay_samples: delay,
                    amplitude: reflect.powi(count as i32) / path,
                    order: count,
                    path_length_m: path,
                });
            }
        }
    }
    arrivals.sort_by(|a, b| {
        a.delay_samples
            .total_cmp(&b.delay_samples)
            .then(a.order.cmp(&b.order))
    });
    Ok(arrivals)
}

/// Removes floating-point dust so that exact sample delays land on one tap.
fn snap(t: f64) -> f64 {
    let r = t.round();
    if (t - r).abs() < 1e-9 {
        r
    } else {
        t
    }
}

/// Adds each arrival as a two-tap linear-interpolated fractional-delay impulse.
pub(crate) fn render_arrivals(arrivals: &[ImageArrival], out: &mut [f64]) {
    for a in arrivals {
        let idx = a.delay_samples.floor() as usize;
        let frac = a.delay_samples - idx as f64;
        if idx < out.len() {
            out[idx] += (1.0 - frac) * a.amplitude;
        }
        if frac > 0.0 && idx + 1 < out.len() {
            out[idx + 1] += frac * a.amplitude;
        }
    }
}

/// Early (image-source) part of the response; silent after the tail crossover.
pub fn image_source_rir<T: Real>(
    room: &ShoeboxRoom<T>,
    query: &SceneQuery<T>,
    config: &SynthesisConfig,
) -> Result<RIRecording<T>, GeometryError> {
    let arrivals = image_arrivals(room, query, config)?;
    let mut buf = vec![0.0f64; DURATION_SAMPLES];
    render_arrivals(&arrivals, &mut buf);
    Ok(RIRecording::new(
        buf.into_iter().map(T::lit).collect(),
        room.room_id,
        query.source_pos,
        query.receiver_pos,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rir::RoomId;

    fn big_room() -> ShoeboxRoom<f64> {
        ShoeboxRoom::new(RoomId(9), [20.0, 20.0, 20.0], 0.5, 0).unwrap()
    }

    fn free_field() -> SynthesisConfig {
        SynthesisConfig {
            max_image_order: 0,
            ..Default::default()
        }
    }

    #[test]
    fn free_field_impulse_at_ten_ms() {
        let q = SceneQuery::new([5.0, 5.0, 5.0], [8.43, 5.0, 5.0]);
        let rir = image_source_rir(&big_room(), &q, &free_field()).unwrap();
        let nz: Vec<(usize, f64)> = rir
            .samples()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0.0)
            .map(|(i, &s)| (i, s))
            .collect();
        assert_eq!(nz.len(), 1, "{nz:?}");
        assert_eq!(nz[0].0, 320);
        assert!((nz[0].1 - 1.0 / 3.43).abs() < 1e-9);
    }

    #[test]
    fn inverse_distance_law() {
        let near = SceneQuery::new([5.0, 5.0, 5.0], [6.5, 5.0, 5.0]);
        let far = SceneQuery::new([5.0, 5.0, 5.0], [8.0, 5.0, 5.0]);
        let a = image_arrivals(&big_room(), &near, &free_field()).unwrap();
        let b = image_arrivals(&big_room(), &far, &free_field()).unwrap();
        assert_eq!(a.len(), 1);
        assert!((b[0].amplitude * 2.0 - a[0].amplitude).abs() < 1e-12);
        assert!((b[0].delay_samples - 2.0 * a[0].delay_samples).abs() < 1e-9);
    }

    #[test]
    fn first_order_room_has_seven_arrivals() {
        let room = ShoeboxRoom::new(RoomId(1), [5.0, 4.0, 3.0], 0.3, 0).unwrap();
        let (s, r): ([f64; 3], [f64; 3]) = ([1.0, 1.5, 1.2], [3.5, 2.0, 1.6]);
        let cfg = SynthesisConfig {
            max_image_order: 1,
            ..Default::default()
        };
        let got = image_arrivals(&room, &SceneQuery::new(s, r), &cfg).unwrap();
        assert_eq!(got.len(), 7);
        // Closed-form mirror images across the six walls.
        let mut images = vec![s];
        for axis in 0..3 {
            let mut lo = s;
            lo[axis] = -s[axis];
            let mut hi = s;
            hi[axis] = 2.0 * room.dims[axis] - s[axis];
            images.push(lo);
            images.push(hi);
        }
        let mut want = Vec::new();
        for img in &images {
            let d = ((img[0] - r[0]).powi(2) + (img[1] - r[1]).powi(2) + (img[2] - r[2]).powi(2)).sqrt();
            want.push(d / 343.0 * 32_000.0);
        }
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g.delay_samples - w).abs() < 1.0);
        }
        assert_eq!(got.iter().filter(|a| a.order == 1).count(), 6);
        for a in got.iter().filter(|a| a.order == 1) {
            assert!((a.amplitude - 0.7 / a.path_length_m).abs() < 1e-12);
        }
    }

    #[test]
    fn crossover_drops_late_reflections() {
        let room = ShoeboxRoom::new(RoomId(1), [5.0, 4.0, 3.0], 0.3, 0).unwrap();
        let q = SceneQuery::new([1.0, 1.5, 1.2], [3.5, 2.0, 1.6]);
        let cfg = SynthesisConfig {
            tail_crossover_ms: 20.0,
            ..Default::default()
        };
        let arr = image_arrivals(&room, &q, &cfg).unwrap();
        assert!(arr.iter().all(|a| a.delay_samples < 640.0));
        let rir = image_source_rir(&room, &q, &cfg).unwrap();
        assert!(rir.samples()[641..].iter().all(|&s| s == 0.0));
    }
}
