//! The three degradation sweeps and the per-input correlation report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{transmit_video, ChannelConfig, Modulation};
use crate::distortion::{jpeg_emulate, JpegQuality};
use crate::error::{Error, Result};
use crate::frame::{Frame, VideoSequence};

use super::metrics::{score_frame, score_video, Metric, NrModels, Scores};
use super::stats::pearson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisKind {
    Snr,
    Modulation,
    Compression,
}

impl AxisKind {
    pub fn name(self) -> &'static str {
        match self {
            AxisKind::Snr => "snr",
            AxisKind::Modulation => "modulation",
            AxisKind::Compression => "compression",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AxisKind::Snr => "Channel SNR (dB)",
            AxisKind::Modulation => "Bits per symbol",
            AxisKind::Compression => "JPEG quality (%)",
        }
    }
}

impl fmt::Display for AxisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(AxisKind::Snr),
            "modulation" => Ok(AxisKind::Modulation),
            "compression" => Ok(AxisKind::Compression),
            _ => Err(Error::InvalidParameter(format!("unknown sweep kind \"{s}\""))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    Snr(Vec<f64>),
    Modulation(Vec<Modulation>),
    Compression(Vec<u32>),
}

impl SweepAxis {
    pub fn kind(&self) -> AxisKind {
        match self {
            SweepAxis::Snr(_) => AxisKind::Snr,
            SweepAxis::Modulation(_) => AxisKind::Modulation,
            SweepAxis::Compression(_) => AxisKind::Compression,
        }
    }

    /// Numeric axis values; modulations are placed at their bits per symbol.
    pub fn values(&self) -> Vec<f64> {
        match self {
            SweepAxis::Snr(v) => v.clone(),
            SweepAxis::Modulation(v) => v.iter().map(|m| m.bits_per_symbol() as f64).collect(),
            SweepAxis::Compression(v) => v.iter().map(|&q| q as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepAxis::Snr(v) => v.len(),
            SweepAxis::Modulation(v) => v.len(),
            SweepAxis::Compression(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    /// Modulation held constant during an SNR sweep.
    pub fixed_modulation: Modulation,
    /// Channel SNRs (one report row each) during a modulation sweep.
    pub fixed_snrs: Vec<f64>,
    pub seed: u64,
}

pub const MIN_AXIS_POINTS: usize = 3;

impl SweepConfig {
    /// 10..=20 dB in 1 dB steps at 32-QAM.
    pub fn snr_default(seed: u64) -> Self {
        SweepConfig {
            axis: SweepAxis::Snr((10..=20).map(|v| v as f64).collect()),
            fixed_modulation: Modulation::Qam32,
            fixed_snrs: vec![],
            seed,
        }
    }

    /// QPSK → 64-QAM at 10, 13 and 15 dB.
    pub fn modulation_default(seed: u64) -> Self {
        SweepConfig {
            axis: SweepAxis::Modulation(Modulation::ALL.to_vec()),
            fixed_modulation: Modulation::Qam32,
            fixed_snrs: vec![10.0, 13.0, 15.0],
            seed,
        }
    }

    /// JPEG quality 10..=90 in steps of 10.
    pub fn compression_default(seed: u64) -> Self {
        SweepConfig {
            axis: SweepAxis::Compression((1..=9).map(|k| k * 10).collect()),
            fixed_modulation: Modulation::Qam32,
            fixed_snrs: vec![],
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axis.len() < MIN_AXIS_POINTS {
            return Err(Error::InvalidParameter(format!(
                "sweep axis needs at least {MIN_AXIS_POINTS} points, got {}",
                self.axis.len()
            )));
        }
        let v = self.axis.values();
        if v.windows(2).any(|w| !(w[1] > w[0])) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("sweep axis must be finite and strictly increasing".into()));
        }
        if let SweepAxis::Compression(qs) = &self.axis {
            for &q in qs {
                JpegQuality::new(q)?;
            }
        }
        if self.axis.kind() == AxisKind::Modulation
            && (self.fixed_snrs.is_empty() || self.fixed_snrs.iter().any(|s| !s.is_finite()))
        {
            return Err(Error::InvalidParameter("modulation sweep needs finite fixed SNRs".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub input: String,
    pub axis_kind: AxisKind,
    pub axis_value: f64,
    pub scores: Scores,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub input: String,
    pub metric: Metric,
    /// `None` when the correlation is undefined (constant series).
    pub pearson_r: Option<f64>,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
}

impl CorrelationReport {
    pub fn get(&self, input: &str, metric: Metric) -> Option<&CorrelationRow> {
        self.rows.iter().find(|r| r.input == input && r.metric == metric)
    }

    /// Pearson r of every compared metric against PSNR, per input, across axis points.
    pub fn from_records(records: &[SweepRecord]) -> CorrelationReport {
        let mut groups: BTreeMap<&str, Vec<&SweepRecord>> = BTreeMap::new();
        for r in records {
            groups.entry(&r.input).or_default().push(r);
        }
        let mut rows = Vec::new();
        for (input, mut recs) in groups {
            recs.sort_by(|a, b| a.axis_value.total_cmp(&b.axis_value));
            let psnr: Vec<f64> = recs.iter().map(|r| r.scores.psnr).collect();
            for m in Metric::COMPARED {
                let ys: Vec<f64> = recs.iter().map(|r| r.scores.get(m)).collect();
                rows.push(CorrelationRow {
                    input: input.to_string(),
                    metric: m,
                    pearson_r: pearson(&psnr, &ys).ok(),
                    n_points: recs.len(),
                });
            }
        }
        CorrelationReport { rows }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub report: CorrelationReport,
}

fn check_kind(config: &SweepConfig, kind: AxisKind) -> Result<()> {
    config.validate()?;
    if config.axis.kind() != kind {
        return Err(Error::InvalidParameter(format!(
            "expected a {kind} sweep, got {}",
            config.axis.kind()
        )));
    }
    Ok(())
}

fn check_inputs<T>(inputs: &[(String, T)]) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one input".into()));
    }
    let mut ids: Vec<&str> = inputs.iter().map(|(id, _)| id.as_str()).collect();
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("sweep input ids must be unique".into()));
    }
    Ok(())
}

/// Channel SNR sweep at a fixed modulation. Point `k` of the axis uses seed `seed + k`.
pub fn run_snr_sweep(config: &SweepConfig, inputs: &[(String, VideoSequence)], models: &NrModels) -> Result<SweepOutput> {
    check_kind(config, AxisKind::Snr)?;
    check_inputs(inputs)?;
    let SweepAxis::Snr(snrs) = &config.axis else { unreachable!() };
    let tasks: Vec<(usize, usize)> = (0..inputs.len())
        .flat_map(|i| (0..snrs.len()).map(move |k| (i, k)))
        .collect();
    let records = tasks
        .par_iter()
        .map(|&(i, k)| {
            let (id, seq) = &inputs[i];
            let channel = ChannelConfig {
                snr_db: snrs[k],
                modulation: config.fixed_modulation,
                seed: config.seed.wrapping_add(k as u64),
            };
            let rx = transmit_video(seq, &channel)?;
            Ok(SweepRecord {
                input: id.clone(),
                axis_kind: AxisKind::Snr,
                axis_value: snrs[k],
                scores: score_video(seq, &rx, models)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = CorrelationReport::from_records(&records);
    Ok(SweepOutput { records, report })
}

/// Record id for one video at one fixed SNR of a modulation sweep.
pub fn modulation_row_id(input: &str, snr_db: f64) -> String {
    format!("{input}@{snr_db}dB")
}

/// Modulation sweep at each fixed SNR. Correlations are computed per video
/// and additionally averaged over videos into `mean@<snr>dB` rows.
pub fn run_modulation_sweep(config: &SweepConfig, inputs: &[(String, VideoSequence)], models: &NrModels) -> Result<SweepOutput> {
    check_kind(config, AxisKind::Modulation)?;
    check_inputs(inputs)?;
    let SweepAxis::Modulation(mods) = &config.axis else { unreachable!() };
    let mut tasks = Vec::new();
    for (s, _) in config.fixed_snrs.iter().enumerate() {
        for i in 0..inputs.len() {
            for k in 0..mods.len() {
                tasks.push((s, i, k));
            }
        }
    }
    let records = tasks
        .par_iter()
        .map(|&(s, i, k)| {
            let (id, seq) = &inputs[i];
            let snr = config.fixed_snrs[s];
            let channel = ChannelConfig {
                snr_db: snr,
                modulation: mods[k],
                seed: config.seed.wrapping_add(k as u64),
            };
            let rx = transmit_video(seq, &channel)?;
            Ok(SweepRecord {
                input: modulation_row_id(id, snr),
                axis_kind: AxisKind::Modulation,
                axis_value: mods[k].bits_per_symbol() as f64,
                scores: score_video(seq, &rx, models)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = CorrelationReport::from_records(&records);
    for &snr in &config.fixed_snrs {
        for m in Metric::COMPARED {
            let rs: Vec<Option<f64>> = inputs
                .iter()
                .map(|(id, _)| {
                    report
                        .get(&modulation_row_id(id, snr), m)
                        .and_then(|r| r.pearson_r)
                })
                .collect();
            // an undefined per-video correlation leaves the average undefined
            let mean = rs
                .iter()
                .copied()
                .collect::<Option<Vec<f64>>>()
                .map(|v| v.iter().sum::<f64>() / v.len() as f64);
            report.rows.push(CorrelationRow {
                input: modulation_row_id("mean", snr),
                metric: m,
                pearson_r: mean,
                n_points: mods.len(),
            });
        }
    }
    Ok(SweepOutput { records, report })
}

/// JPEG quality sweep over still images.
pub fn run_compression_sweep(config: &SweepConfig, inputs: &[(String, Frame)], models: &NrModels) -> Result<SweepOutput> {
    check_kind(config, AxisKind::Compression)?;
    check_inputs(inputs)?;
    let SweepAxis::Compression(qs) = &config.axis else { unreachable!() };
    let tasks: Vec<(usize, usize)> = (0..inputs.len())
        .flat_map(|i| (0..qs.len()).map(move |k| (i, k)))
        .collect();
    let records = tasks
        .par_iter()
        .map(|&(i, k)| {
            let (id, frame) = &inputs[i];
            let out = jpeg_emulate(frame, JpegQuality::new(qs[k])?);
            Ok(SweepRecord {
                input: id.clone(),
                axis_kind: AxisKind::Compression,
                axis_value: qs[k] as f64,
                scores: score_frame(frame, &out, models)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = CorrelationReport::from_records(&records);
    Ok(SweepOutput { records, report })
}
