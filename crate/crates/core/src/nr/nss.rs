//! Natural-scene-statistics building blocks: locally normalized luminance
//! (MSCN) fields and moment-matching GGD / AGGD estimators.

use std::sync::OnceLock;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::filter::{filter_valid, gaussian_taps};
use crate::frame::Frame;

pub const MSCN_WINDOW: usize = 7;
pub const MSCN_SIGMA: f64 = 7.0 / 6.0;
/// Divisive stabilizer on the [0, 255] scale.
pub const MSCN_C: f64 = 1.0;

/// Lower end of the shape-parameter search grid.
pub const SHAPE_MIN: f64 = 0.2;
/// Upper end of the shape-parameter search grid.
pub const SHAPE_MAX: f64 = 10.0;
pub const SHAPE_STEP: f64 = 0.001;

/// Minimum sample count accepted by the distribution fits.
pub const MIN_SAMPLES: usize = 100;

/// Mean-subtracted contrast-normalized coefficients over the valid region,
/// together with the local deviation map they were divided by.
#[derive(Debug, Clone, PartialEq)]
pub struct MscnField {
    pub width: usize,
    pub height: usize,
    pub coefficients: Vec<f64>,
    pub local_sigma: Vec<f64>,
}

impl MscnField {
    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.coefficients[row * self.width + col]
    }

    pub fn mean_sigma(&self) -> f64 {
        self.local_sigma.iter().sum::<f64>() / self.local_sigma.len() as f64
    }
}

/// Computes Î = (I − μ) / (σ + C) with 7×7 Gaussian-weighted local moments.
pub fn mscn(frame: &Frame) -> Result<MscnField> {
    mscn_samples(&frame.to_f64(), frame.width(), frame.height())
}

pub(crate) fn mscn_samples(data: &[f64], w: usize, h: usize) -> Result<MscnField> {
    if w < MSCN_WINDOW || h < MSCN_WINDOW {
        return Err(Error::FrameTooSmall {
            width: w,
            height: h,
            min_width: MSCN_WINDOW,
            min_height: MSCN_WINDOW,
        });
    }
    let taps = gaussian_taps(MSCN_WINDOW, MSCN_SIGMA);
    let sq: Vec<f64> = data.iter().map(|v| v * v).collect();
    let mu = filter_valid(data, w, h, &taps);
    let e2 = filter_valid(&sq, w, h, &taps);
    let half = MSCN_WINDOW / 2;
    let ow = w - MSCN_WINDOW + 1;
    let oh = h - MSCN_WINDOW + 1;
    let mut coefficients = Vec::with_capacity(ow * oh);
    let mut local_sigma = Vec::with_capacity(ow * oh);
    for i in 0..oh {
        for j in 0..ow {
            let k = i * ow + j;
            let sigma = (e2[k] - mu[k] * mu[k]).max(0.0).sqrt();
            let centre = data[(i + half) * w + j + half];
            let d = centre - mu[k];
            // rounding noise on flat regions must not leak into the field
            let d = if d.abs() < 1e-9 { 0.0 } else { d };
            coefficients.push(d / (sigma + MSCN_C));
            local_sigma.push(sigma);
        }
    }
    Ok(MscnField {
        width: ow,
        height: oh,
        coefficients,
        local_sigma,
    })
}

/// Generalized Gaussian fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgdFit {
    pub shape: f64,
    /// Standard deviation of the fitted distribution.
    pub sigma: f64,
}

/// Asymmetric generalized Gaussian fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggdFit {
    pub shape: f64,
    pub mean: f64,
    pub sigma_left: f64,
    pub sigma_right: f64,
}

/// Γ(1/β)Γ(3/β)/Γ(2/β)², the GGD moment ratio E[x²]/E[|x|]².
pub fn ggd_ratio(beta: f64) -> f64 {
    (ln_gamma(1.0 / beta) + ln_gamma(3.0 / beta) - 2.0 * ln_gamma(2.0 / beta)).exp()
}

/// Γ(2/α)²/(Γ(1/α)Γ(3/α)), the AGGD generalized moment ratio.
pub fn aggd_ratio(alpha: f64) -> f64 {
    1.0 / ggd_ratio(alpha)
}

struct ShapeGrid {
    shapes: Vec<f64>,
    /// Strictly decreasing in shape.
    ggd: Vec<f64>,
}

fn grid() -> &'static ShapeGrid {
    static GRID: OnceLock<ShapeGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        let n = ((SHAPE_MAX - SHAPE_MIN) / SHAPE_STEP).round() as usize + 1;
        let shapes: Vec<f64> = (0..n).map(|i| SHAPE_MIN + i as f64 * SHAPE_STEP).collect();
        let ggd = shapes.iter().map(|&b| ggd_ratio(b)).collect();
        ShapeGrid { shapes, ggd }
    })
}

/// Grid point whose GGD ratio is closest to `target`.
fn invert_ggd_ratio(target: f64) -> f64 {
    let g = grid();
    // partition point of a decreasing sequence
    let idx = g.ggd.partition_point(|&r| r > target);
    let candidates = [idx.saturating_sub(1), idx.min(g.ggd.len() - 1)];
    let best = candidates
        .into_iter()
        .min_by(|&a, &b| {
            (g.ggd[a] - target)
                .abs()
                .partial_cmp(&(g.ggd[b] - target).abs())
                .unwrap()
                .then(a.cmp(&b))
        })
        .unwrap();
    g.shapes[best]
}

/// Grid point whose AGGD ratio is closest to `target`.
fn invert_aggd_ratio(target: f64) -> f64 {
    let g = grid();
    // ρ(α) = 1 / r(α) is increasing; search on reciprocals
    let idx = g.ggd.partition_point(|&r| 1.0 / r < target);
    let candidates = [idx.saturating_sub(1), idx.min(g.ggd.len() - 1)];
    let best = candidates
        .into_iter()
        .min_by(|&a, &b| {
            (1.0 / g.ggd[a] - target)
                .abs()
                .partial_cmp(&(1.0 / g.ggd[b] - target).abs())
                .unwrap()
                .then(a.cmp(&b))
        })
        .unwrap();
    g.shapes[best]
}

/// Moment-matching GGD estimator.
pub fn fit_ggd(samples: &[f64]) -> Result<GgdFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!(
            "GGD fit needs {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let first = samples[0];
    if samples.iter().all(|&x| x == first) {
        return Err(Error::InsufficientSamples(
            "GGD fit needs non-identical samples".into(),
        ));
    }
    let n = samples.len() as f64;
    let var = samples.iter().map(|x| x * x).sum::<f64>() / n;
    let abs_mean = samples.iter().map(|x| x.abs()).sum::<f64>() / n;
    let rho = var / (abs_mean * abs_mean);
    Ok(GgdFit {
        shape: invert_ggd_ratio(rho),
        sigma: var.sqrt(),
    })
}

/// Moment-matching AGGD estimator.
pub fn fit_aggd(samples: &[f64]) -> Result<AggdFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples(format!(
            "AGGD fit needs {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let (mut left_sq, mut left_n, mut right_sq, mut right_n) = (0.0, 0usize, 0.0, 0usize);
    let (mut abs_sum, mut sq_sum) = (0.0, 0.0);
    for &x in samples {
        if x < 0.0 {
            left_sq += x * x;
            left_n += 1;
        } else if x > 0.0 {
            right_sq += x * x;
            right_n += 1;
        }
        abs_sum += x.abs();
        sq_sum += x * x;
    }
    if left_n == 0 || right_n == 0 {
        return Err(Error::InsufficientSamples(
            "AGGD fit needs both positive and negative samples".into(),
        ));
    }
    let n = samples.len() as f64;
    let sigma_left = (left_sq / left_n as f64).sqrt();
    let sigma_right = (right_sq / right_n as f64).sqrt();
    let gamma_hat = sigma_left / sigma_right;
    let r_hat = (abs_sum / n).powi(2) / (sq_sum / n);
    let big_r = r_hat * (gamma_hat.powi(3) + 1.0) * (gamma_hat + 1.0)
        / (gamma_hat * gamma_hat + 1.0).powi(2);
    let shape = invert_aggd_ratio(big_r);
    let mean = (sigma_right - sigma_left) * gamma(2.0 / shape) / gamma(1.0 / shape);
    Ok(AggdFit {
        shape,
        mean,
        sigma_left,
        sigma_right,
    })
}
