//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point sample type: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Widens to `f64` for bookkeeping that must not lose precision.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// 3-vector of coordinates in meters.
pub type Vec3<T> = [T; 3];

pub fn distance<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

/// Lower clamp applied to every decibel value.
pub const DB_FLOOR: f64 = -120.0;
/// Value reported for a ratio whose denominator vanished.
pub const DB_CEILING: f64 = 100.0;

/// `10·log10(x)` clamped to `[DB_FLOOR, ..)`; zero and negative input map to the floor.
pub fn power_db<T: Real>(x: T) -> T {
    let floor = T::lit(DB_FLOOR);
    if x <= T::zero() {
        return floor;
    }
    (T::lit(10.0) * x.log10()).max(floor)
}

/// Power ratio in dB, clamped to `[DB_FLOOR, DB_CEILING]`. Returns `(db, hit_ceiling)`;
/// a zero denominator yields the ceiling.
pub fn ratio_db<T: Real>(num: T, den: T) -> (T, bool) {
    let ceiling = T::lit(DB_CEILING);
    if den <= T::zero() {
        return (ceiling, true);
    }
    let db = power_db(num / den);
    if db >= ceiling {
        (ceiling, true)
    } else {
        (db, false)
    }
}

/// Median of a non-empty slice; mean of the middle pair for even lengths.
pub fn median<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / T::lit(2.0)
    })
}
