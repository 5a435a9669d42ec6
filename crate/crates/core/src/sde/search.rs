use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::evaluate;
use super::features::FeatureVector;
use super::model::{train, TrainConfig};
use super::SdeError;
use crate::scalar::Real;

pub const DEFAULT_LR_GRID: [f64; 3] = [1e-5, 1e-4, 1e-3];
pub const DEFAULT_EPOCH_GRID: [usize; 4] = [5, 10, 20, 50];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub learning_rate: f64,
    pub epochs: usize,
    pub val_mae_m: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best: TrainConfig,
    pub best_val_mae_m: f64,
    pub table: Vec<GridCell>,
}

/// Trains one model per (learning rate, epochs) pair and keeps the lowest validation MAE.
///
/// `base` supplies the seed, batch size and range policy for every cell. Ties go to fewer
/// epochs, then the smaller learning rate.
pub fn grid_search<T: Real>(
    train_set: &[(FeatureVector<T>, T)],
    val_set: &[(FeatureVector<T>, T)],
    lr_grid: &[f64],
    epoch_grid: &[usize],
    base: &TrainConfig,
) -> Result<GridSearchResult, SdeError> {
    if lr_grid.is_empty() || epoch_grid.is_empty() {
        return Err(SdeError::InvalidConfig("grid must be nonempty"));
    }
    let cells: Vec<(f64, usize)> = lr_grid
        .iter()
        .flat_map(|&lr| epoch_grid.iter().map(move |&ep| (lr, ep)))
        .collect();
    let table: Vec<GridCell> = cells
        .par_iter()
        .map(|&(learning_rate, epochs)| {
            let cfg = TrainConfig { learning_rate, epochs, ..*base };
            let outcome = train(train_set, &cfg).and_then(|m| evaluate(&m, val_set));
            match outcome {
                Ok(report) => GridCell {
                    learning_rate,
                    epochs,
                    val_mae_m: Some(report.mae_m),
                    error: None,
                },
                Err(e) => GridCell {
                    learning_rate,
                    epochs,
                    val_mae_m: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let best = table
        .iter()
        .filter_map(|c| c.val_mae_m.map(|m| (m, c)))
        .min_by(|(ma, a), (mb, b)| {
            ma.total_cmp(mb)
                .then(a.epochs.cmp(&b.epochs))
                .then(a.learning_rate.total_cmp(&b.learning_rate))
        })
        .ok_or(SdeError::AllCellsFailed)?;
    let (best_val_mae_m, cell) = best;
    Ok(GridSearchResult {
        best: TrainConfig {
            learning_rate: cell.learning_rate,
            epochs: cell.epochs,
            ..*base
        },
        best_val_mae_m,
        table: table.clone(),
    })
}
