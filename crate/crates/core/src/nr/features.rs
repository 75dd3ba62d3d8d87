//! The 36-dimensional spatial NSS feature vector shared by BRISQUE and NIQE.

use crate::error::{Error, Result};
use crate::frame::Frame;

use super::nss::{fit_aggd, fit_ggd, mscn_samples, AggdFit, GgdFit, MscnField};

pub const FEATURES_PER_SCALE: usize = 18;
pub const SCALES: usize = 2;
pub const FEATURE_DIM: usize = FEATURES_PER_SCALE * SCALES;

/// Smallest edge accepted by [`brisque_features`].
pub const MIN_EDGE: usize = 32;

/// Per scale: GGD shape and variance of the MSCN field, then shape, mean,
/// left and right variance of the AGGD fitted to each of the horizontal,
/// vertical, main-diagonal and anti-diagonal neighbour products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_DIM]);

impl FeatureVector {
    pub fn values(&self) -> &[f64; FEATURE_DIM] {
        &self.0
    }

    pub fn distance(&self, other: &FeatureVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Fit used when every sample is zero (flat content): zero spread, Gaussian shape.
const FLAT_GGD: GgdFit = GgdFit { shape: 2.0, sigma: 0.0 };
const FLAT_AGGD: AggdFit = AggdFit {
    shape: 2.0,
    mean: 0.0,
    sigma_left: 0.0,
    sigma_right: 0.0,
};

fn ggd_or_flat(samples: &[f64]) -> Result<GgdFit> {
    match fit_ggd(samples) {
        Err(Error::InsufficientSamples(_)) if samples.iter().all(|&x| x == samples[0]) => Ok(FLAT_GGD),
        other => other,
    }
}

/// AGGD fit that tolerates degenerate sample sets produced by flat or
/// near-flat content (all zero, or only one sign present).
fn aggd_or_flat(samples: &[f64]) -> Result<AggdFit> {
    match fit_aggd(samples) {
        Err(Error::InsufficientSamples(_)) if samples.len() >= super::nss::MIN_SAMPLES => {
            let n = samples.len() as f64;
            let left = samples.iter().filter(|&&x| x < 0.0).map(|x| x * x).sum::<f64>() / n;
            let right = samples.iter().filter(|&&x| x > 0.0).map(|x| x * x).sum::<f64>() / n;
            Ok(AggdFit {
                sigma_left: left.sqrt(),
                sigma_right: right.sqrt(),
                ..FLAT_AGGD
            })
        }
        other => other,
    }
}

/// Neighbour products of an MSCN field: horizontal, vertical, main diagonal, anti-diagonal.
pub fn pairwise_products(field: &MscnField) -> [Vec<f64>; 4] {
    let (w, h) = (field.width, field.height);
    let mut hz = Vec::with_capacity((w - 1) * h);
    let mut vt = Vec::with_capacity(w * (h - 1));
    let mut d1 = Vec::with_capacity((w - 1) * (h - 1));
    let mut d2 = Vec::with_capacity((w - 1) * (h - 1));
    for i in 0..h {
        for j in 0..w {
            let c = field.at(i, j);
            if j + 1 < w {
                hz.push(c * field.at(i, j + 1));
            }
            if i + 1 < h {
                vt.push(c * field.at(i + 1, j));
                if j + 1 < w {
                    d1.push(c * field.at(i + 1, j + 1));
                }
                if j >= 1 {
                    d2.push(c * field.at(i + 1, j - 1));
                }
            }
        }
    }
    [hz, vt, d1, d2]
}

fn scale_features(field: &MscnField, out: &mut [f64]) -> Result<()> {
    let g = ggd_or_flat(&field.coefficients)?;
    out[0] = g.shape;
    out[1] = g.sigma * g.sigma;
    for (k, prod) in pairwise_products(field).iter().enumerate() {
        let a = aggd_or_flat(prod)?;
        let o = &mut out[2 + 4 * k..6 + 4 * k];
        o[0] = a.shape;
        o[1] = a.mean;
        o[2] = a.sigma_left * a.sigma_left;
        o[3] = a.sigma_right * a.sigma_right;
    }
    Ok(())
}

/// 2×2 box-average decimation (odd trailing row/column dropped).
pub fn downsample2(data: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let (dw, dh) = (w / 2, h / 2);
    let mut out = Vec::with_capacity(dw * dh);
    for i in 0..dh {
        for j in 0..dw {
            let a = data[2 * i * w + 2 * j];
            let b = data[2 * i * w + 2 * j + 1];
            let c = data[(2 * i + 1) * w + 2 * j];
            let d = data[(2 * i + 1) * w + 2 * j + 1];
            out.push((a + b + c + d) / 4.0);
        }
    }
    (out, dw, dh)
}

/// Features of a real-valued plane; also returns the mean local deviation
/// at full scale (used as patch sharpness by NIQE).
pub(crate) fn features_of(data: &[f64], w: usize, h: usize) -> Result<(FeatureVector, f64)> {
    if w < MIN_EDGE || h < MIN_EDGE {
        return Err(Error::FrameTooSmall {
            width: w,
            height: h,
            min_width: MIN_EDGE,
            min_height: MIN_EDGE,
        });
    }
    let mut values = [0.0; FEATURE_DIM];
    let full = mscn_samples(data, w, h)?;
    scale_features(&full, &mut values[..FEATURES_PER_SCALE])?;
    let (half, hw, hh) = downsample2(data, w, h);
    let coarse = mscn_samples(&half, hw, hh)?;
    scale_features(&coarse, &mut values[FEATURES_PER_SCALE..])?;
    Ok((FeatureVector(values), full.mean_sigma()))
}

pub fn brisque_features(frame: &Frame) -> Result<FeatureVector> {
    Ok(features_of(&frame.to_f64(), frame.width(), frame.height())?.0)
}
