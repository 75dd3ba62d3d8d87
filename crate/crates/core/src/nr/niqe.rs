//! NIQE: distance between the multivariate Gaussian of a frame's patch
//! features and one fitted to a pristine corpus.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::Frame;

use super::features::{features_of, FeatureVector, FEATURE_DIM};

pub const DEFAULT_PATCH: usize = 96;
/// Patches at least this fraction as sharp as the sharpest one are kept.
pub const SHARPNESS_FRACTION: f64 = 0.75;
/// Pooled-covariance eigenvalues at or below this are treated as zero.
pub const EIGEN_FLOOR: f64 = 1e-10;

/// Mean vector and covariance (row-major) of NSS features.
#[derive(Debug, Clone, PartialEq)]
pub struct MvgModel {
    pub mean: Vec<f64>,
    pub covariance: Vec<f64>,
}

impl MvgModel {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if self.covariance.len() != d * d {
            return Err(Error::Model(format!(
                "covariance has {} entries, expected {}",
                self.covariance.len(),
                d * d
            )));
        }
        if self.mean.iter().chain(&self.covariance).any(|v| !v.is_finite()) {
            return Err(Error::Model("non-finite model entry".into()));
        }
        for i in 0..d {
            if self.covariance[i * d + i] < 0.0 {
                return Err(Error::Model(format!("negative variance at {i}")));
            }
            for j in 0..i {
                if (self.covariance[i * d + j] - self.covariance[j * d + i]).abs() > 1e-9 {
                    return Err(Error::Model(format!("covariance not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    fn from_samples(samples: &[FeatureVector]) -> MvgModel {
        let n = samples.len();
        let mut mean = vec![0.0; FEATURE_DIM];
        for s in samples {
            for (m, v) in mean.iter_mut().zip(s.0.iter()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut covariance = vec![0.0; FEATURE_DIM * FEATURE_DIM];
        if n >= 2 {
            for s in samples {
                for i in 0..FEATURE_DIM {
                    let di = s.0[i] - mean[i];
                    for j in i..FEATURE_DIM {
                        covariance[i * FEATURE_DIM + j] += di * (s.0[j] - mean[j]);
                    }
                }
            }
            for i in 0..FEATURE_DIM {
                for j in i..FEATURE_DIM {
                    let v = covariance[i * FEATURE_DIM + j] / (n - 1) as f64;
                    covariance[i * FEATURE_DIM + j] = v;
                    covariance[j * FEATURE_DIM + i] = v;
                }
            }
        }
        MvgModel { mean, covariance }
    }

    pub(crate) fn covariance_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.covariance)
    }
}

/// Features of the sharpest non-overlapping `patch`×`patch` tiles of a frame.
pub fn select_patches(frame: &Frame, patch: usize) -> Result<Vec<FeatureVector>> {
    if patch == 0 {
        return Err(Error::InvalidParameter("patch size must be positive".into()));
    }
    let (nx, ny) = (frame.width() / patch, frame.height() / patch);
    let mut scored = Vec::with_capacity(nx * ny);
    for py in 0..ny {
        for px in 0..nx {
            let tile = frame.crop(py * patch, px * patch, patch, patch)?;
            scored.push(features_of(&tile.to_f64(), patch, patch)?);
        }
    }
    let max = scored.iter().map(|(_, s)| *s).fold(0.0f64, f64::max);
    Ok(scored
        .into_iter()
        .filter(|(_, s)| *s >= SHARPNESS_FRACTION * max)
        .map(|(f, _)| f)
        .collect())
}

/// Fits the pristine model. Needs at least twice the feature dimension in patches.
pub fn niqe_fit(pristine: &[Frame], patch: usize) -> Result<MvgModel> {
    let per_image: Vec<Vec<FeatureVector>> = pristine
        .par_iter()
        .map(|f| select_patches(f, patch))
        .collect::<Result<_>>()?;
    let samples: Vec<FeatureVector> = per_image.into_iter().flatten().collect();
    let required = 2 * FEATURE_DIM;
    if samples.len() < required {
        return Err(Error::InsufficientPatches {
            found: samples.len(),
            required,
        });
    }
    Ok(MvgModel::from_samples(&samples))
}

pub fn niqe_score(frame: &Frame, model: &MvgModel) -> Result<f64> {
    niqe_score_with_patch(frame, model, DEFAULT_PATCH)
}

pub fn niqe_score_with_patch(frame: &Frame, model: &MvgModel, patch: usize) -> Result<f64> {
    if model.dim() != FEATURE_DIM {
        return Err(Error::Model(format!("model dimension {} != {FEATURE_DIM}", model.dim())));
    }
    let samples = select_patches(frame, patch)?;
    if samples.is_empty() {
        return Err(Error::InsufficientPatches {
            found: 0,
            required: 1,
        });
    }
    let test = MvgModel::from_samples(&samples);
    Ok(mvg_distance(model, &test))
}

/// sqrt(dᵀ ((Σ1+Σ2)/2)⁺ d) with d the mean difference.
pub fn mvg_distance(a: &MvgModel, b: &MvgModel) -> f64 {
    let pooled = (a.covariance_matrix() + b.covariance_matrix()) * 0.5;
    let d = DVector::from_iterator(a.dim(), a.mean.iter().zip(&b.mean).map(|(x, y)| x - y));
    let eig = SymmetricEigen::new(pooled);
    let proj = eig.eigenvectors.transpose() * &d;
    let q: f64 = proj
        .iter()
        .zip(eig.eigenvalues.iter())
        .filter(|(_, &lam)| lam > EIGEN_FLOOR)
        .map(|(p, lam)| p * p / lam)
        .sum();
    q.max(0.0).sqrt()
}
