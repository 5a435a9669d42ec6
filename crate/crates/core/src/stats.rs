//! Small descriptive statistics shared by reports.

use serde::{Deserialize, Serialize};

/// Bin width used for every distance histogram, meters.
pub const DISTANCE_BIN_M: f64 = 0.5;

/// Fixed-width histogram starting at zero; bin `k` covers `[k·w, (k+1)·w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Negative and non-finite values are ignored.
    pub fn from_values(values: impl IntoIterator<Item = f64>, bin_width: f64) -> Self {
        let mut counts: Vec<usize> = Vec::new();
        for v in values {
            if !(v.is_finite() && v >= 0.0) {
                continue;
            }
            let bin = (v / bin_width).floor() as usize;
            if bin >= counts.len() {
                counts.resize(bin + 1, 0);
            }
            counts[bin] += 1;
        }
        Self { bin_width, counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(lower edge, upper edge, count)` per bin.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        self.counts.iter().enumerate().map(move |(k, &c)| {
            (k as f64 * self.bin_width, (k + 1) as f64 * self.bin_width, c)
        })
    }

    /// CSV with header `bin_lo_m,bin_hi_m,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo_m,bin_hi_m,count\n");
        for (lo, hi, c) in self.rows() {
            out.push_str(&format!("{lo},{hi},{c}\n"));
        }
        out
    }
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Pearson correlation; `None` when either side has zero variance or fewer than two pairs.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x)?, mean(y)?);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_bins() {
        let h = Histogram::from_values([0.1, 0.49, 0.5, 1.2, 3.0, -1.0, f64::NAN], 0.5);
        assert_eq!(h.counts, vec![2, 1, 1, 0, 0, 0, 1]);
        assert_eq!(h.total(), 5);
        assert!(h.to_csv().starts_with("bin_lo_m,bin_hi_m,count\n0,0.5,2\n"));
        assert!(Histogram::from_values([], 0.5).counts.is_empty());
    }

    #[test]
    fn pearson_cases() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -2.0 * v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&x, &[2.0; 4]), None);
        assert_eq!(pearson(&[1.0], &[1.0]), None);
    }
}
