//! Scoring a distorted frame or sequence with all six metrics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fr::{psnr, ssim, SsimParams};
use crate::frame::{Frame, VideoSequence};
use crate::nr::blockiness::{blockiness, DEFAULT_BLOCK};
use crate::nr::{blur, brisque_score, niqe_score, BrisqueRegressor, MvgModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Psnr,
    Ssim,
    Blockiness,
    Blur,
    Niqe,
    Brisque,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Psnr,
        Metric::Ssim,
        Metric::Blockiness,
        Metric::Blur,
        Metric::Niqe,
        Metric::Brisque,
    ];

    /// Everything that is correlated against PSNR.
    pub const COMPARED: [Metric; 5] = [Metric::Ssim, Metric::Blockiness, Metric::Blur, Metric::Niqe, Metric::Brisque];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Psnr => "psnr",
            Metric::Ssim => "ssim",
            Metric::Blockiness => "blockiness",
            Metric::Blur => "blur",
            Metric::Niqe => "niqe",
            Metric::Brisque => "brisque",
        }
    }

    pub fn is_full_reference(self) -> bool {
        matches!(self, Metric::Psnr | Metric::Ssim)
    }

    /// Axis label including units.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Psnr => "PSNR (dB)",
            Metric::Ssim => "SSIM",
            Metric::Blockiness => "Blockiness (dB)",
            Metric::Blur => "Blur (0-10)",
            Metric::Niqe => "NIQE",
            Metric::Brisque => "BRISQUE (predicted PSNR, dB)",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric \"{s}\"")))
    }
}

/// One value per metric.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Scores {
    pub psnr: f64,
    pub ssim: f64,
    pub blockiness: f64,
    pub blur: f64,
    pub niqe: f64,
    pub brisque: f64,
}

impl Scores {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::Psnr => self.psnr,
            Metric::Ssim => self.ssim,
            Metric::Blockiness => self.blockiness,
            Metric::Blur => self.blur,
            Metric::Niqe => self.niqe,
            Metric::Brisque => self.brisque,
        }
    }

    fn set(&mut self, m: Metric, v: f64) {
        match m {
            Metric::Psnr => self.psnr = v,
            Metric::Ssim => self.ssim = v,
            Metric::Blockiness => self.blockiness = v,
            Metric::Blur => self.blur = v,
            Metric::Niqe => self.niqe = v,
            Metric::Brisque => self.brisque = v,
        }
    }

    pub fn is_finite(&self) -> bool {
        Metric::ALL.iter().all(|&m| self.get(m).is_finite())
    }
}

/// Fitted no-reference models.
#[derive(Debug, Clone, PartialEq)]
pub struct NrModels {
    pub niqe: MvgModel,
    pub brisque: BrisqueRegressor,
}

/// Scores one metric. `reference` is required for full-reference metrics,
/// `models` for NIQE and BRISQUE.
pub fn score_metric(metric: Metric, reference: Option<&Frame>, distorted: &Frame, models: Option<&NrModels>) -> Result<f64> {
    let need_ref = || reference.ok_or_else(|| Error::InvalidParameter(format!("{metric} requires a reference")));
    let need_models = || models.ok_or_else(|| Error::InvalidParameter(format!("{metric} requires a model")));
    match metric {
        Metric::Psnr => Ok(psnr(need_ref()?, distorted)?.db),
        Metric::Ssim => ssim(need_ref()?, distorted, &SsimParams::default()),
        Metric::Blockiness => blockiness(distorted, DEFAULT_BLOCK),
        Metric::Blur => blur(distorted),
        Metric::Niqe => niqe_score(distorted, &need_models()?.niqe),
        Metric::Brisque => brisque_score(distorted, &need_models()?.brisque),
    }
}

pub fn score_frame(reference: &Frame, distorted: &Frame, models: &NrModels) -> Result<Scores> {
    let mut s = Scores::default();
    for m in Metric::ALL {
        s.set(m, score_metric(m, Some(reference), distorted, Some(models))?);
    }
    Ok(s)
}

/// Unweighted mean of per-frame scores.
pub fn score_video(reference: &VideoSequence, distorted: &VideoSequence, models: &NrModels) -> Result<Scores> {
    if reference.len() != distorted.len() {
        return Err(Error::InvalidParameter(format!(
            "sequence lengths differ: {} vs {}",
            reference.len(),
            distorted.len()
        )));
    }
    let mut total = Scores::default();
    for (r, d) in reference.frames().iter().zip(distorted.frames()) {
        let s = score_frame(r, d, models)?;
        for m in Metric::ALL {
            total.set(m, total.get(m) + s.get(m));
        }
    }
    let n = reference.len() as f64;
    for m in Metric::ALL {
        total.set(m, total.get(m) / n);
    }
    Ok(total)
}
