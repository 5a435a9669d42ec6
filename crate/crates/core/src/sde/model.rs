use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::features::{FeatureVector, FEATURE_DIM, FEATURE_SCHEMA_VERSION};
use super::SdeError;
use crate::rng::seeded;
use crate::scalar::Real;

pub const LEARNING_RATE_RANGE: RangeInclusive<f64> = 1e-5..=1e-3;
pub const EPOCH_RANGE: RangeInclusive<usize> = 5..=50;

const BIAS_COLUMN: usize = FEATURE_DIM - 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
    /// Samples per gradient step. A value at least the dataset size gives full-batch descent.
    pub batch_size: usize,
    /// Reject learning rates and epoch counts outside the supported ranges.
    pub enforce_ranges: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            epochs: 50,
            seed: 0,
            batch_size: 1,
            enforce_ranges: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), SdeError> {
        if self.epochs == 0 {
            return Err(SdeError::EpochsOutOfRange(0));
        }
        if self.batch_size == 0 {
            return Err(SdeError::InvalidConfig("batch_size must be positive"));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(SdeError::LearningRateOutOfRange(self.learning_rate));
        }
        if self.enforce_ranges {
            if !LEARNING_RATE_RANGE.contains(&self.learning_rate) {
                return Err(SdeError::LearningRateOutOfRange(self.learning_rate));
            }
            if !EPOCH_RANGE.contains(&self.epochs) {
                return Err(SdeError::EpochsOutOfRange(self.epochs));
            }
        }
        Ok(())
    }
}

/// Linear distance regressor over standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EstimatorModel<T> {
    pub schema_version: String,
    pub feature_names: Vec<String>,
    pub weights: Vec<T>,
    pub feature_means: Vec<T>,
    pub feature_stds: Vec<T>,
    pub train_config: Option<TrainConfig>,
    /// Training MSE before the first step and after each epoch.
    pub loss_history: Vec<T>,
}

impl<T: Real> EstimatorModel<T> {
    /// All-zero weights; predicts 0 m for every input.
    pub fn zero() -> Self {
        Self {
            schema_version: FEATURE_SCHEMA_VERSION.to_string(),
            feature_names: super::FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            weights: vec![T::zero(); FEATURE_DIM],
            feature_means: vec![T::zero(); FEATURE_DIM],
            feature_stds: vec![T::one(); FEATURE_DIM],
            train_config: None,
            loss_history: Vec::new(),
        }
    }

    fn check_dims(&self) -> Result<(), SdeError> {
        for got in [
            self.weights.len(),
            self.feature_means.len(),
            self.feature_stds.len(),
        ] {
            if got != FEATURE_DIM {
                return Err(SdeError::DimensionMismatch {
                    model: got,
                    input: FEATURE_DIM,
                });
            }
        }
        Ok(())
    }

    pub fn standardize(&self, raw: &[T; FEATURE_DIM]) -> [T; FEATURE_DIM] {
        let mut z = [T::zero(); FEATURE_DIM];
        for i in 0..FEATURE_DIM {
            z[i] = (raw[i] - self.feature_means[i]) / self.feature_stds[i];
        }
        z
    }

    /// Unclamped linear response.
    pub fn raw_output(&self, features: &FeatureVector<T>) -> Result<T, SdeError> {
        self.check_dims()?;
        Ok(dot(&self.weights, &self.standardize(&features.to_array())))
    }

    pub fn final_loss(&self) -> Option<T> {
        self.loss_history.last().copied()
    }
}

/// Predicted distance in metres, clamped at zero.
pub fn predict<T: Real>(model: &EstimatorModel<T>, features: &FeatureVector<T>) -> Result<T, SdeError> {
    Ok(model.raw_output(features)?.max(T::zero()))
}

fn dot<T: Real>(w: &[T], x: &[T]) -> T {
    w.iter().zip(x).map(|(&a, &b)| a * b).sum()
}

/// Mean squared error of the linear response `w . x` against `targets`.
pub fn mse_loss<T: Real>(weights: &[T], rows: &[[T; FEATURE_DIM]], targets: &[T]) -> T {
    let n = T::from_usize_lossy(rows.len());
    rows.iter()
        .zip(targets)
        .map(|(x, &y)| {
            let r = dot(weights, x) - y;
            r * r
        })
        .sum::<T>()
        / n
}

/// Gradient of [`mse_loss`] with respect to the weights.
pub fn mse_gradient<T: Real>(weights: &[T], rows: &[[T; FEATURE_DIM]], targets: &[T]) -> Vec<T> {
    let mut g = vec![T::zero(); weights.len()];
    let scale = T::lit(2.0) / T::from_usize_lossy(rows.len());
    for (x, &y) in rows.iter().zip(targets) {
        let r = dot(weights, x) - y;
        for (gi, &xi) in g.iter_mut().zip(x) {
            *gi = *gi + scale * r * xi;
        }
    }
    g
}

fn column_stats<T: Real>(raw: &[[T; FEATURE_DIM]]) -> (Vec<T>, Vec<T>) {
    let n = T::from_usize_lossy(raw.len());
    let mut means = vec![T::zero(); FEATURE_DIM];
    let mut stds = vec![T::one(); FEATURE_DIM];
    for j in 0..FEATURE_DIM {
        if j == BIAS_COLUMN {
            continue;
        }
        let m = raw.iter().map(|r| r[j]).sum::<T>() / n;
        let var = raw.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<T>() / n;
        means[j] = m;
        let sd = var.sqrt();
        if sd > T::lit(1e-12) && sd.is_finite() {
            stds[j] = sd;
        } else {
            log::warn!(
                "feature {} has zero variance in the training set",
                super::FEATURE_NAMES[j]
            );
        }
    }
    (means, stds)
}

pub fn train<T: Real>(
    dataset: &[(FeatureVector<T>, T)],
    config: &TrainConfig,
) -> Result<EstimatorModel<T>, SdeError> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(SdeError::EmptyDataset);
    }
    let raw: Vec<[T; FEATURE_DIM]> = dataset.iter().map(|(f, _)| f.to_array()).collect();
    let targets: Vec<T> = dataset.iter().map(|&(_, y)| y).collect();
    let (means, stds) = column_stats(&raw);

    let mut model = EstimatorModel::zero();
    model.feature_means = means;
    model.feature_stds = stds;
    model.train_config = Some(*config);
    let rows: Vec<[T; FEATURE_DIM]> = raw.iter().map(|r| model.standardize(r)).collect();

    let lr = T::lit(config.learning_rate);
    let mut w = vec![T::zero(); FEATURE_DIM];
    let mut history = Vec::with_capacity(config.epochs + 1);
    history.push(mse_loss(&w, &rows, &targets));

    let mut rng = seeded(config.seed);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut batch_x = Vec::with_capacity(config.batch_size.min(rows.len()));
    let mut batch_y = Vec::with_capacity(batch_x.capacity());
    for _ in 0..config.epochs {
        if config.batch_size < rows.len() {
            order.shuffle(&mut rng);
        }
        for chunk in order.chunks(config.batch_size) {
            batch_x.clear();
            batch_y.clear();
            batch_x.extend(chunk.iter().map(|&i| rows[i]));
            batch_y.extend(chunk.iter().map(|&i| targets[i]));
            let g = mse_gradient(&w, &batch_x, &batch_y);
            for (wi, gi) in w.iter_mut().zip(g) {
                *wi = *wi - lr * gi;
            }
        }
        history.push(mse_loss(&w, &rows, &targets));
    }

    model.weights = w;
    model.loss_history = history;
    Ok(model)
}
