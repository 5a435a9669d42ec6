use serde::{Deserialize, Serialize};

use super::features::FeatureVector;
use super::model::{predict, EstimatorModel};
use super::SdeError;
use crate::scalar::Real;
use crate::stats::{pearson, Histogram, DISTANCE_BIN_M};

pub const EVAL_SCHEMA_VERSION: &str = "rir-eval/1";

/// Lower edges of the true-distance buckets, metres; the last bucket is open-ended.
pub const DISTANCE_BUCKETS: [f64; 4] = [0.0, 1.0, 3.0, 5.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeMae {
    pub lo_m: f64,
    /// `None` for the open-ended last bucket.
    pub hi_m: Option<f64>,
    pub n: usize,
    /// `None` when the bucket is empty.
    pub mae_m: Option<f64>,
}

impl RangeMae {
    pub fn contains(&self, d: f64) -> bool {
        d >= self.lo_m && self.hi_m.is_none_or(|hi| d < hi)
    }

    pub fn label(&self) -> String {
        match self.hi_m {
            Some(hi) => format!("[{}, {})", self.lo_m, hi),
            None => format!("[{}, inf)", self.lo_m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePrediction {
    pub true_m: f64,
    pub predicted_m: f64,
    /// `predicted_m - true_m`.
    pub residual_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: String,
    pub n_samples: usize,
    pub mae_m: f64,
    /// MAE of the all-zero model on the same samples, i.e. the mean true distance.
    pub zero_model_mae_m: f64,
    /// Absent when predictions or truths have zero variance.
    pub pearson_r: Option<f64>,
    pub per_range_mae: Vec<RangeMae>,
    pub predicted_histogram: Histogram,
    pub truth_histogram: Histogram,
    pub samples: Vec<SamplePrediction>,
}

impl EvalReport {
    /// MAE over samples whose true distance lies in `[lo, hi]`.
    pub fn mae_within(&self, lo: f64, hi: f64) -> Option<f64> {
        let errs: Vec<f64> = self
            .samples
            .iter()
            .filter(|s| s.true_m >= lo && s.true_m <= hi)
            .map(|s| s.residual_m.abs())
            .collect();
        crate::stats::mean(&errs)
    }

    pub fn samples_csv(&self) -> String {
        let mut out = String::from("true_m,predicted_m,residual_m\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{}\n", s.true_m, s.predicted_m, s.residual_m));
        }
        out
    }
}

fn mean_abs(residuals: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for r in residuals {
        sum += r.abs();
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

pub fn evaluate<T: Real>(
    model: &EstimatorModel<T>,
    testset: &[(FeatureVector<T>, T)],
) -> Result<EvalReport, SdeError> {
    if testset.is_empty() {
        return Err(SdeError::EmptyDataset);
    }
    let samples = testset
        .iter()
        .map(|(f, d)| {
            let p = predict(model, f)?.as_f64();
            let t = d.as_f64();
            Ok(SamplePrediction {
                true_m: t,
                predicted_m: p,
                residual_m: p - t,
            })
        })
        .collect::<Result<Vec<_>, SdeError>>()?;

    let mut per_range: Vec<RangeMae> = DISTANCE_BUCKETS
        .iter()
        .enumerate()
        .map(|(k, &lo)| RangeMae {
            lo_m: lo,
            hi_m: DISTANCE_BUCKETS.get(k + 1).copied(),
            n: 0,
            mae_m: None,
        })
        .collect();
    for bucket in per_range.iter_mut() {
        let probe = bucket.clone();
        let inside = || samples.iter().filter(|s| probe.contains(s.true_m));
        bucket.n = inside().count();
        bucket.mae_m = mean_abs(inside().map(|s| s.residual_m));
    }

    let truths: Vec<f64> = samples.iter().map(|s| s.true_m).collect();
    let preds: Vec<f64> = samples.iter().map(|s| s.predicted_m).collect();
    Ok(EvalReport {
        schema_version: EVAL_SCHEMA_VERSION.to_string(),
        n_samples: samples.len(),
        mae_m: mean_abs(samples.iter().map(|s| s.residual_m)).unwrap_or(0.0),
        zero_model_mae_m: mean_abs(truths.iter().copied()).unwrap_or(0.0),
        pearson_r: pearson(&preds, &truths),
        per_range_mae: per_range,
        predicted_histogram: Histogram::from_values(preds.iter().copied(), DISTANCE_BIN_M),
        truth_histogram: Histogram::from_values(truths.iter().copied(), DISTANCE_BIN_M),
        samples,
    })
}
