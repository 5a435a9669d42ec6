use super::ShoeboxRoom;
use crate::rir::RoomId;
use crate::scalar::Real;

pub const BUILTIN_ROOM_COUNT: u32 = 20;

/// (length, width, height, absorption). Rooms 1–10 are small with Sabine T60 0.3–0.8 s,
/// rooms 11–20 larger with T60 0.5–1.2 s.
const PROFILES: [(f64, f64, f64, f64); BUILTIN_ROOM_COUNT as usize] = [
    (4.0, 3.0, 2.5, 0.270),
    (4.5, 3.5, 2.6, 0.254),
    (5.0, 4.0, 2.7, 0.239),
    (5.0, 4.0, 3.0, 0.220),
    (5.5, 4.5, 2.8, 0.203),
    (6.0, 4.0, 3.0, 0.186),
    (6.0, 5.0, 3.0, 0.182),
    (6.5, 5.0, 3.0, 0.170),
    (7.0, 5.0, 3.2, 0.165),
    (7.0, 6.0, 3.2, 0.162),
    (8.0, 6.0, 3.2, 0.266),
    (9.0, 6.0, 3.5, 0.247),
    (9.0, 7.0, 3.5, 0.228),
    (10.0, 7.0, 3.5, 0.208),
    (10.0, 8.0, 4.0, 0.209),
    (11.0, 8.0, 4.0, 0.194),
    (12.0, 8.0, 4.0, 0.182),
    (12.0, 9.0, 4.5, 0.185),
    (13.0, 9.0, 4.5, 0.175),
    (14.0, 10.0, 5.0, 0.181),
];

const SEED_BASE: u64 = 1000;

pub fn builtin_room<T: Real>(id: u32) -> Option<ShoeboxRoom<T>> {
    let (l, w, h, a) = *PROFILES.get((id as usize).checked_sub(1)?)?;
    Some(ShoeboxRoom {
        room_id: RoomId(id),
        dims: [T::lit(l), T::lit(w), T::lit(h)],
        absorption: T::lit(a),
        seed: SEED_BASE + id as u64,
    })
}

pub fn builtin_rooms<T: Real>() -> Vec<ShoeboxRoom<T>> {
    (1..=BUILTIN_ROOM_COUNT)
        .map(|id| builtin_room(id).expect("id in range"))
        .collect()
}
