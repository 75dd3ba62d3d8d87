//! Blind blockiness: energy of intensity steps across block boundaries
//! relative to steps everywhere else, in dB.

use crate::error::{Error, Result};
use crate::frame::Frame;

pub const DEFAULT_BLOCK: usize = 8;

/// Floor applied to both mean energies so that flat input maps to 0 dB.
pub const ENERGY_FLOOR: f64 = 1e-6;

/// Mean squared step across block boundaries and across all other adjacent pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEnergy {
    pub boundary: f64,
    pub interior: f64,
}

pub fn boundary_energy(frame: &Frame, block_size: usize) -> Result<BoundaryEnergy> {
    if block_size == 0 {
        return Err(Error::InvalidParameter("block size must be positive".into()));
    }
    let (w, h) = (frame.width(), frame.height());
    if w < 2 * block_size || h < 2 * block_size {
        return Err(Error::FrameTooSmall {
            width: w,
            height: h,
            min_width: 2 * block_size,
            min_height: 2 * block_size,
        });
    }
    let px = |i: usize, j: usize| frame.get(i, j) as f64;
    let (mut eb, mut nb, mut ei, mut ni) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..h {
        for j in 0..w - 1 {
            let d = px(i, j + 1) - px(i, j);
            if (j + 1) % block_size == 0 {
                eb += d * d;
                nb += 1;
            } else {
                ei += d * d;
                ni += 1;
            }
        }
    }
    for i in 0..h - 1 {
        for j in 0..w {
            let d = px(i + 1, j) - px(i, j);
            if (i + 1) % block_size == 0 {
                eb += d * d;
                nb += 1;
            } else {
                ei += d * d;
                ni += 1;
            }
        }
    }
    Ok(BoundaryEnergy {
        boundary: eb / nb as f64,
        interior: ei / ni as f64,
    })
}

/// 10·log10(E_boundary / E_interior), both floored at [`ENERGY_FLOOR`].
pub fn blockiness(frame: &Frame, block_size: usize) -> Result<f64> {
    let e = boundary_energy(frame, block_size)?;
    Ok(10.0 * (e.boundary.max(ENERGY_FLOOR) / e.interior.max(ENERGY_FLOOR)).log10())
}
