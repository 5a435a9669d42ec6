//! Speaker-distance estimation from impulse-response features.
//!
//! A linear model over six physical features (DRR, log T60, direct-path delay,
//! early/late energy ratio, physical energy and a bias term) is fitted by stochastic
//! gradient descent on the mean squared error, tuned by an exhaustive grid over learning
//! rate and epoch count, and scored with MAE, Pearson correlation and per-range errors.

mod eval;
mod features;
mod model;
mod search;
mod split;

pub use eval::{evaluate, EvalReport, RangeMae, SamplePrediction, DISTANCE_BUCKETS, EVAL_SCHEMA_VERSION};
pub use features::{
    extract_features, FeatureVector, FEATURE_DIM, FEATURE_NAMES, FEATURE_SCHEMA_VERSION,
    MISSING_T60_S,
};
pub use model::{
    mse_gradient, mse_loss, predict, train, EstimatorModel, TrainConfig, EPOCH_RANGE,
    LEARNING_RATE_RANGE,
};
pub use search::{
    grid_search, GridCell, GridSearchResult, DEFAULT_EPOCH_GRID, DEFAULT_LR_GRID,
};
pub use split::{split_dataset, MIN_SPLIT_SIZE, TRAIN_FRACTION};

use thiserror::Error;

use crate::acoustics::AcousticsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdeError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset has {got} samples, need at least {min}")]
    DatasetTooSmall { got: usize, min: usize },
    #[error("learning rate {0} outside [1e-5, 1e-3]")]
    LearningRateOutOfRange(f64),
    #[error("epoch count {0} outside [5, 50]")]
    EpochsOutOfRange(usize),
    #[error("invalid training config: {0}")]
    InvalidConfig(&'static str),
    #[error("feature dimension mismatch: model has {model}, input has {input}")]
    DimensionMismatch { model: usize, input: usize },
    #[error("every grid cell failed")]
    AllCellsFailed,
    #[error(transparent)]
    Acoustics(#[from] AcousticsError),
}
