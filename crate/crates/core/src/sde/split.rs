use rand::seq::SliceRandom;

use super::SdeError;
use crate::rng::seeded;

pub const TRAIN_FRACTION: f64 = 0.8;
pub const MIN_SPLIT_SIZE: usize = 5;

/// Deterministic shuffled split into `(train, held_out)`.
pub fn split_dataset<I: Clone>(
    items: &[I],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<I>, Vec<I>), SdeError> {
    if items.len() < MIN_SPLIT_SIZE {
        return Err(SdeError::DatasetTooSmall {
            got: items.len(),
            min: MIN_SPLIT_SIZE,
        });
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(SdeError::InvalidConfig("train_fraction must lie in (0, 1)"));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.shuffle(&mut seeded(seed));
    let n_train = (train_fraction * items.len() as f64).round() as usize;
    let pick = |idx: &[usize]| idx.iter().map(|&i| items[i].clone()).collect::<Vec<_>>();
    Ok((pick(&order[..n_train]), pick(&order[n_train..])))
}
