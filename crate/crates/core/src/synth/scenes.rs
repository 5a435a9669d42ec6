use rand::Rng;

use super::{GeometryError, SceneQuery, ShoeboxRoom};
use crate::rng;
use crate::scalar::{distance, Real, Vec3};

/// Positions are drawn this far from every wall.
pub const SCENE_WALL_MARGIN_M: f64 = 0.5;
/// Receivers closer than this to the source are redrawn.
pub const SCENE_MIN_DISTANCE_M: f64 = 0.2;

const MAX_REDRAWS: usize = 10_000;

/// Draws `n` source/receiver pairs uniformly inside the room shrunk by the wall margin.
pub fn sample_scenes<T: Real>(
    room: &ShoeboxRoom<T>,
    n: usize,
    seed: u64,
) -> Result<Vec<SceneQuery<T>>, GeometryError> {
    room.validate()?;
    if n == 0 {
        return Err(GeometryError::EmptySceneCount);
    }
    let margin = T::lit(SCENE_WALL_MARGIN_M);
    let bounds: Vec<(f64, f64)> = room
        .dims
        .iter()
        .map(|&d| (margin.as_f64(), (d - margin).as_f64()))
        .collect();
    if bounds.iter().any(|&(lo, hi)| hi <= lo) {
        return Err(GeometryError::RoomTooSmall(room.room_id));
    }
    let mut rng = rng::seeded(seed);
    let draw = |rng: &mut rng::Rng| -> Vec3<T> {
        [0, 1, 2].map(|a| T::lit(rng.random_range(bounds[a].0..bounds[a].1)))
    };
    let min_dist = T::lit(SCENE_MIN_DISTANCE_M);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let source = draw(&mut rng);
        let mut receiver = draw(&mut rng);
        let mut tries = 0;
        while distance(&source, &receiver) < min_dist {
            tries += 1;
            if tries > MAX_REDRAWS {
                return Err(GeometryError::RoomTooSmall(room.room_id));
            }
            receiver = draw(&mut rng);
        }
        out.push(SceneQuery::new(source, receiver));
    }
    Ok(out)
}
