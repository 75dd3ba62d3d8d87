//! DCT-domain blur score in [0, 10]: the weighted share of high-frequency
//! coefficients that are numerically null across all 8×8 blocks.

use crate::dct;
use crate::error::{Error, Result};
use crate::frame::Frame;

/// Coefficients with u+v at or above this order are inspected.
pub const MIN_ORDER: usize = 4;
/// Magnitude below which a coefficient counts as null.
pub const NULL_THRESHOLD: f64 = 1.0;

pub fn blur(frame: &Frame) -> Result<f64> {
    let (w, h) = (frame.width(), frame.height());
    if w < 8 || h < 8 {
        return Err(Error::FrameTooSmall {
            width: w,
            height: h,
            min_width: 8,
            min_height: 8,
        });
    }
    let (bw, bh) = (w / 8, h / 8);
    let mut null_weight = 0.0;
    let mut total_weight = 0.0;
    let mut block = [0.0; 64];
    for by in 0..bh {
        for bx in 0..bw {
            for y in 0..8 {
                for x in 0..8 {
                    block[y * 8 + x] = frame.get(by * 8 + y, bx * 8 + x) as f64;
                }
            }
            let c = dct::forward(&block);
            for v in 0..8 {
                for u in 0..8 {
                    let order = u + v;
                    if order < MIN_ORDER {
                        continue;
                    }
                    let weight = order as f64;
                    total_weight += weight;
                    if c[v * 8 + u].abs() < NULL_THRESHOLD {
                        null_weight += weight;
                    }
                }
            }
        }
    }
    Ok(10.0 * null_weight / total_weight)
}
