//! BRISQUE-style scoring: a ridge regressor over min-max normalized NSS
//! features. Scores share the orientation of the training labels (higher
//! is better when trained on PSNR).

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::Frame;

use super::features::{brisque_features, FeatureVector, FEATURE_DIM};

pub const DEFAULT_LAMBDA: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct BrisqueRegressor {
    /// One weight per feature followed by the bias.
    pub weights: Vec<f64>,
    pub feature_min: Vec<f64>,
    pub feature_max: Vec<f64>,
}

impl BrisqueRegressor {
    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != FEATURE_DIM + 1
            || self.feature_min.len() != FEATURE_DIM
            || self.feature_max.len() != FEATURE_DIM
        {
            return Err(Error::Model("BRISQUE model has wrong dimensions".into()));
        }
        for (k, (lo, hi)) in self.feature_min.iter().zip(&self.feature_max).enumerate() {
            if !(hi > lo) {
                return Err(Error::Model(format!("empty normalization range for feature {k}")));
            }
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Model("non-finite weight".into()));
        }
        Ok(())
    }

    /// Maps a feature into [−1, 1], clamping values outside the training range.
    fn normalize(&self, features: &FeatureVector) -> Vec<f64> {
        features
            .0
            .iter()
            .zip(self.feature_min.iter().zip(&self.feature_max))
            .map(|(&v, (&lo, &hi))| 2.0 * (v.clamp(lo, hi) - lo) / (hi - lo) - 1.0)
            .collect()
    }

    pub fn predict(&self, features: &FeatureVector) -> f64 {
        let x = self.normalize(features);
        x.iter().zip(&self.weights).map(|(a, w)| a * w).sum::<f64>() + self.weights[FEATURE_DIM]
    }
}

/// Solves min ‖Xw − y‖² + λ‖w‖² over the feature weights, leaving the
/// trailing bias unregularized. `rows` holds the features without the bias column.
pub fn ridge_fit(rows: &[Vec<f64>], labels: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = rows.len();
    let d = rows.first().map_or(0, |r| r.len());
    if n == 0 || labels.len() != n {
        return Err(Error::InvalidParameter("ridge fit needs matched, non-empty data".into()));
    }
    let x = DMatrix::from_fn(n, d + 1, |i, j| if j < d { rows[i][j] } else { 1.0 });
    let y = DVector::from_column_slice(labels);
    let mut gram = x.transpose() * &x;
    for j in 0..d {
        gram[(j, j)] += lambda;
    }
    let rhs = x.transpose() * y;
    let w = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => gram
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Model("normal equations are singular".into()))?,
    };
    Ok(w.iter().copied().collect())
}

fn distinct_labels(labels: &[f64]) -> usize {
    let mut v: Vec<f64> = labels.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v.len()
}

pub fn train_brisque(corpus: &[(Frame, f64)]) -> Result<BrisqueRegressor> {
    train_brisque_with_lambda(corpus, DEFAULT_LAMBDA)
}

pub fn train_brisque_with_lambda(corpus: &[(Frame, f64)], lambda: f64) -> Result<BrisqueRegressor> {
    let features: Vec<FeatureVector> = corpus
        .par_iter()
        .map(|(f, _)| brisque_features(f))
        .collect::<Result<_>>()?;
    let labels: Vec<f64> = corpus.iter().map(|(_, y)| *y).collect();
    train_from_features(&features, &labels, lambda)
}

/// Trains on precomputed features.
pub fn train_from_features(features: &[FeatureVector], labels: &[f64], lambda: f64) -> Result<BrisqueRegressor> {
    if features.len() < FEATURE_DIM + 1 {
        return Err(Error::InsufficientSamples(format!(
            "BRISQUE training needs {} pairs, got {}",
            FEATURE_DIM + 1,
            features.len()
        )));
    }
    if labels.iter().any(|y| !y.is_finite()) || distinct_labels(labels) < 3 {
        return Err(Error::InvalidParameter(
            "BRISQUE labels must be finite with at least 3 distinct values".into(),
        ));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("ridge lambda must be positive, got {lambda}")));
    }
    let mut feature_min = vec![f64::INFINITY; FEATURE_DIM];
    let mut feature_max = vec![f64::NEG_INFINITY; FEATURE_DIM];
    for f in features {
        for k in 0..FEATURE_DIM {
            feature_min[k] = feature_min[k].min(f.0[k]);
            feature_max[k] = feature_max[k].max(f.0[k]);
        }
    }
    for k in 0..FEATURE_DIM {
        // a feature constant over the corpus maps to 0 after normalization
        if feature_max[k] - feature_min[k] < 1e-12 {
            feature_min[k] -= 0.5;
            feature_max[k] += 0.5;
        }
    }
    let mut model = BrisqueRegressor {
        weights: Vec::new(),
        feature_min,
        feature_max,
    };
    let rows: Vec<Vec<f64>> = features.iter().map(|f| model.normalize(f)).collect();
    model.weights = ridge_fit(&rows, labels, lambda)?;
    model.validate()?;
    Ok(model)
}

pub fn brisque_score(frame: &Frame, model: &BrisqueRegressor) -> Result<f64> {
    Ok(model.predict(&brisque_features(frame)?))
}
