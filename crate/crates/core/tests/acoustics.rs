use std::f64::consts::E;

use rirdist::acoustics::{
    compute_drr, detect_direct_path, early_reflection_profile, estimate_t60, index_to_distance,
    measure, schroeder_edc,
};
use rirdist::fixtures::exponential_noise;
use rirdist::synth::{
    builtin_rooms, normalize_rir, sample_scenes, synthesize_rir, SceneQuery, ShoeboxRoom,
    SynthesisConfig,
};
use rirdist::{Rir, RoomId, SAMPLE_RATE};

fn envelope_t60(tau: f64) -> f64 {
    60.0 * tau / (20.0 * E.log10())
}

fn rir_from(samples: Vec<f64>) -> Rir {
    Rir::new(samples, RoomId(0), [0.0; 3], [0.0; 3]).unwrap()
}

#[test]
fn t60_matches_envelope_oracle() {
    for (k, tau) in [0.05, 0.1, 0.2, 0.3].into_iter().enumerate() {
        for seed in 0..3 {
            let rir = rir_from(exponential_noise(tau, 40 + 10 * k as u64 + seed));
            let est = estimate_t60(&schroeder_edc(&rir).unwrap(), SAMPLE_RATE).unwrap();
            let want = envelope_t60(tau);
            assert!(
                (est.seconds - want).abs() <= 0.05 * want,
                "tau {tau}: {} vs {want}",
                est.seconds
            );
        }
    }
}

#[test]
fn edc_is_monotone_on_synthesized_rirs() {
    let rooms = builtin_rooms::<f64>();
    for room in rooms.iter().step_by(3) {
        for q in sample_scenes(room, 3, 5).unwrap() {
            let rir = synthesize_rir(room, &q, &SynthesisConfig::default()).unwrap();
            let edc = schroeder_edc(&rir).unwrap();
            assert!(edc.values_db().windows(2).all(|w| w[1] <= w[0]));
        }
    }
}

#[test]
fn metrics_are_scale_invariant() {
    let room = &builtin_rooms::<f64>()[8];
    let q = sample_scenes(room, 1, 3).unwrap()[0];
    let rir = synthesize_rir(room, &q, &SynthesisConfig::default()).unwrap();
    let base = measure(&rir).unwrap();
    for k in [1e-3, 0.37, 12.0] {
        let m = measure(&rir.rescaled(k).unwrap()).unwrap();
        assert_eq!(m.direct_index, base.direct_index);
        assert!((m.t60_s - base.t60_s).abs() < 1e-9 * base.t60_s);
        assert!((m.drr_db - base.drr_db).abs() < 1e-9);
        assert_eq!(m.echo_density, base.echo_density);
        assert!((m.total_energy_db - base.total_energy_db).abs() < 1e-9);
    }
}

#[test]
fn shift_moves_direct_index_exactly() {
    let room = &builtin_rooms::<f64>()[13];
    let q = sample_scenes(room, 1, 8).unwrap()[0];
    let rir = synthesize_rir(room, &q, &SynthesisConfig::default()).unwrap();
    let idx = detect_direct_path(&rir).unwrap();
    let t60 = estimate_t60(&schroeder_edc(&rir).unwrap(), SAMPLE_RATE).unwrap().seconds;
    for m in [1usize, 17, 400] {
        let mut shifted = vec![0.0; m];
        shifted.extend_from_slice(&rir.samples()[..rir.samples().len() - m]);
        let s = rir_from(shifted);
        assert_eq!(detect_direct_path(&s).unwrap(), idx + m);
        let t = estimate_t60(&schroeder_edc(&s).unwrap(), SAMPLE_RATE).unwrap().seconds;
        assert!((t - t60).abs() < 0.05 * t60, "shift {m}: {t} vs {t60}");
    }
}

#[test]
fn drr_falls_with_distance() {
    let distances = [1.0, 2.0, 4.0, 6.0];
    let (mut violations, mut comparisons) = (0, 0);
    for seed in 0..24u64 {
        let room = ShoeboxRoom::new(RoomId(99), [10.0, 8.0, 4.0], 0.3, seed).unwrap();
        let y = 2.0 + 0.15 * seed as f64;
        let drr: Vec<f64> = distances
            .iter()
            .map(|&d| {
                let q = SceneQuery::new([1.5, y, 1.5], [1.5 + d, y, 1.6]);
                let rir = synthesize_rir(&room, &q, &SynthesisConfig::default()).unwrap();
                compute_drr(&rir, detect_direct_path(&rir).unwrap()).unwrap().db
            })
            .collect();
        for w in drr.windows(2) {
            comparisons += 1;
            if w[1] > w[0] {
                violations += 1;
            }
        }
    }
    assert!(
        violations * 20 <= comparisons,
        "{violations} of {comparisons} pairs increased"
    );
}

#[test]
fn direct_index_recovers_distance() {
    let cfg = SynthesisConfig::default();
    let (mut total, mut hits) = (0, 0);
    for room in builtin_rooms::<f64>() {
        for q in sample_scenes(&room, 10, 77).unwrap() {
            let rir = normalize_rir(&synthesize_rir(&room, &q, &cfg).unwrap()).unwrap();
            let d: f64 = index_to_distance(detect_direct_path(&rir).unwrap(), SAMPLE_RATE);
            total += 1;
            if (d - q.distance_m()).abs() <= 0.011 {
                hits += 1;
            }
        }
    }
    assert_eq!(total, 200);
    assert!(hits * 100 >= total * 99, "{hits}/{total}");
}

#[test]
fn early_profile_has_direct_in_first_window() {
    let room = &builtin_rooms::<f64>()[2];
    for q in sample_scenes(room, 5, 1).unwrap() {
        let rir = synthesize_rir(room, &q, &SynthesisConfig::default()).unwrap();
        let idx = detect_direct_path(&rir).unwrap();
        let p = early_reflection_profile(&rir, idx).unwrap();
        assert!(p.counts[0] >= 1);
        assert_eq!(p.counts.len(), 10);
    }
}
