//! Uncoded QAM over an AWGN channel with hard-decision demapping, and a
//! video transport that drops any macroblock whose bits arrive corrupted.

use std::fmt;
use std::str::FromStr;

use crate::distortion::{conceal_losses, macroblock_bytes};
use crate::error::{Error, Result};
use crate::frame::VideoSequence;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modulation {
    Qpsk,
    Qam16,
    Qam32,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [Modulation::Qpsk, Modulation::Qam16, Modulation::Qam32, Modulation::Qam64];

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam32 => 5,
            Modulation::Qam64 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam32 => "qam32",
            Modulation::Qam64 => "qam64",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" | "qam4" => Ok(Modulation::Qpsk),
            "qam16" | "16qam" => Ok(Modulation::Qam16),
            "qam32" | "32qam" => Ok(Modulation::Qam32),
            "qam64" | "64qam" => Ok(Modulation::Qam64),
            other => Err(Error::InvalidParameter(format!("unsupported modulation \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Es/N0 in dB.
    pub snr_db: f64,
    pub modulation: Modulation,
    pub seed: u64,
}

/// Unit-energy constellation; `points[label]` is the symbol carrying `label`'s bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub modulation: Modulation,
    pub points: Vec<(f64, f64)>,
    /// Grid coordinates (odd integers) of each label before normalization.
    grid: Vec<(i32, i32)>,
    /// Label at grid cell, indexed `[(y + m) / 2][(x + m) / 2]`; `None` for unused cells.
    cells: Vec<Vec<Option<usize>>>,
    scale: f64,
    max_coord: i32,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Square Gray-mapped grid with `m` bits per axis; returns grid coordinates by label.
fn square_grid(bits_per_axis: usize) -> Vec<(i32, i32)> {
    let levels = 1usize << bits_per_axis;
    let mut grid = vec![(0, 0); levels * levels];
    for xi in 0..levels {
        for yi in 0..levels {
            let label = (gray(xi) << bits_per_axis) | gray(yi);
            let coord = |i: usize| 2 * i as i32 - (levels as i32 - 1);
            grid[label] = (coord(xi), coord(yi));
        }
    }
    grid
}

/// 32-point cross: an 8×4 Gray rectangle whose outer columns (|x| = 7) are
/// folded onto the rows y = ±5, yielding a 6×6 grid without its corners.
fn cross32_grid() -> Vec<(i32, i32)> {
    let mut grid = vec![(0, 0); 32];
    for xi in 0..8usize {
        for yi in 0..4usize {
            let label = (gray(xi) << 2) | gray(yi);
            let x = 2 * xi as i32 - 7;
            let y = 2 * yi as i32 - 3;
            grid[label] = if x.abs() == 7 {
                // (±7, ±1) -> (±3, ±5), (±7, ±3) -> (±1, ±5)
                let fx = if y.abs() == 1 { 3 } else { 1 };
                (x.signum() * fx, y.signum() * 5)
            } else {
                (x, y)
            };
        }
    }
    grid
}

pub fn build_constellation(modulation: Modulation) -> Constellation {
    let grid = match modulation {
        Modulation::Qpsk => square_grid(1),
        Modulation::Qam16 => square_grid(2),
        Modulation::Qam32 => cross32_grid(),
        Modulation::Qam64 => square_grid(3),
    };
    let energy = grid
        .iter()
        .map(|&(x, y)| (x * x + y * y) as f64)
        .sum::<f64>()
        / grid.len() as f64;
    let scale = 1.0 / energy.sqrt();
    let max_coord = grid.iter().map(|&(x, y)| x.abs().max(y.abs())).max().unwrap();
    let side = (max_coord + 1) as usize;
    let mut cells = vec![vec![None; side]; side];
    for (label, &(x, y)) in grid.iter().enumerate() {
        cells[((y + max_coord) / 2) as usize][((x + max_coord) / 2) as usize] = Some(label);
    }
    let points = grid.iter().map(|&(x, y)| (x as f64 * scale, y as f64 * scale)).collect();
    Constellation {
        modulation,
        points,
        grid,
        cells,
        scale,
        max_coord,
    }
}

impl Constellation {
    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn grid_coordinates(&self) -> &[(i32, i32)] {
        &self.grid
    }

    /// Nearest-point (hard decision) label.
    pub fn demap(&self, re: f64, im: f64) -> usize {
        let m = self.max_coord;
        let slice = |v: f64| -> i32 {
            let u = v / self.scale;
            // nearest odd integer within the grid
            let k = ((u + m as f64) / 2.0).round().clamp(0.0, m as f64);
            k as i32
        };
        let (cx, cy) = (slice(re), slice(im));
        if let Some(label) = self.cells[cy as usize][cx as usize] {
            return label;
        }
        // unused grid cell (cross corners): fall back to an exhaustive search
        self.points
            .iter()
            .enumerate()
            .map(|(l, &(px, py))| (l, (px - re).powi(2) + (py - im).powi(2)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap()
            .0
    }
}

/// Per-component noise standard deviation at unit symbol energy.
pub fn noise_sigma(snr_db: f64) -> f64 {
    let es_n0 = 10f64.powf(snr_db / 10.0);
    (0.5 / es_n0).sqrt()
}

/// Sends `bits` through the channel, drawing noise from `rng`.
pub fn transmit_bits_with(bits: &[bool], constellation: &Constellation, snr_db: f64, rng: &mut Rng) -> Vec<bool> {
    let k = constellation.bits_per_symbol();
    let sigma = noise_sigma(snr_db);
    let mut out = Vec::with_capacity(bits.len().div_ceil(k) * k);
    for chunk in bits.chunks(k) {
        let mut label = 0usize;
        for b in 0..k {
            label = (label << 1) | chunk.get(b).copied().unwrap_or(false) as usize;
        }
        let (x, y) = constellation.points[label];
        let rx = x + sigma * rng.gaussian();
        let ry = y + sigma * rng.gaussian();
        let got = constellation.demap(rx, ry);
        for b in (0..k).rev() {
            out.push((got >> b) & 1 == 1);
        }
    }
    out.truncate(bits.len());
    out
}

pub fn transmit_bits(bits: &[bool], config: &ChannelConfig) -> Result<Vec<bool>> {
    if !config.snr_db.is_finite() {
        return Err(Error::InvalidParameter(format!("snr {} is not finite", config.snr_db)));
    }
    let c = build_constellation(config.modulation);
    Ok(transmit_bits_with(bits, &c, config.snr_db, &mut Rng::new(config.seed)))
}

pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |k| (b >> k) & 1 == 1))
        .collect()
}

/// Outcome of a video transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub received: VideoSequence,
    pub macroblocks: usize,
    pub lost: usize,
    pub bits: usize,
    pub bit_errors: usize,
}

impl Transmission {
    pub fn loss_fraction(&self) -> f64 {
        self.lost as f64 / self.macroblocks as f64
    }

    pub fn bit_error_rate(&self) -> f64 {
        self.bit_errors as f64 / self.bits as f64
    }
}

/// Sends each 16×16 macroblock as one integrity-checked unit; a unit with any
/// bit error is dropped and concealed.
pub fn transmit_video_detailed(seq: &VideoSequence, config: &ChannelConfig) -> Result<Transmission> {
    if !config.snr_db.is_finite() {
        return Err(Error::InvalidParameter(format!("snr {} is not finite", config.snr_db)));
    }
    let c = build_constellation(config.modulation);
    let mut rng = Rng::new(config.seed);
    let (mut macroblocks, mut lost, mut bits, mut bit_errors) = (0, 0, 0, 0);
    let received = conceal_losses(seq, |_, frame, (row, col, w, h)| {
        let payload = bytes_to_bits(&macroblock_bytes(frame, row, col, w, h));
        let rx = transmit_bits_with(&payload, &c, config.snr_db, &mut rng);
        let errors = payload.iter().zip(&rx).filter(|(a, b)| a != b).count();
        macroblocks += 1;
        bits += payload.len();
        bit_errors += errors;
        lost += (errors > 0) as usize;
        errors > 0
    });
    Ok(Transmission {
        received,
        macroblocks,
        lost,
        bits,
        bit_errors,
    })
}

pub fn transmit_video(seq: &VideoSequence, config: &ChannelConfig) -> Result<VideoSequence> {
    Ok(transmit_video_detailed(seq, config)?.received)
}
