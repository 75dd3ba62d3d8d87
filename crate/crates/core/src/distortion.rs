//! Deterministic degradation generators: JPEG-style quantization, macroblock
//! loss with concealment, Gaussian blur and additive white Gaussian noise.

use crate::dct;
use crate::error::{Error, Result};
use crate::frame::{clamp_u8, Frame, VideoSequence};
use crate::rng::Rng;

/// JPEG quality percentage in [1, 100].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JpegQuality(u8);

impl JpegQuality {
    pub fn new(q: u32) -> Result<Self> {
        if (1..=100).contains(&q) {
            Ok(JpegQuality(q as u8))
        } else {
            Err(Error::InvalidParameter(format!("JPEG quality {q} outside [1, 100]")))
        }
    }

    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// IJG scale factor in percent.
    pub fn scale_factor(self) -> u32 {
        let q = self.get();
        if q < 50 {
            5000 / q
        } else {
            200 - 2 * q
        }
    }

    /// Luminance quantization table scaled to this quality, row-major.
    pub fn table(self) -> [u16; 64] {
        let s = self.scale_factor();
        let mut t = [0u16; 64];
        for (dst, &base) in t.iter_mut().zip(BASE_LUMA_TABLE.iter()) {
            *dst = ((base as u32 * s + 50) / 100).clamp(1, 255) as u16;
        }
        t
    }
}

/// Standard JPEG luminance quantization table (ITU T.81 Annex K), row-major.
pub const BASE_LUMA_TABLE: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Quantizes every 8×8 block the way a baseline JPEG encoder would, then
/// reconstructs. Entropy coding is lossless and therefore skipped.
pub fn jpeg_emulate(frame: &Frame, q: JpegQuality) -> Frame {
    let (w, h) = (frame.width(), frame.height());
    let pw = w.div_ceil(8) * 8;
    let ph = h.div_ceil(8) * 8;
    let table = q.table();
    let mut out = vec![0u8; w * h];

    for by in (0..ph).step_by(8) {
        for bx in (0..pw).step_by(8) {
            let mut block = [0.0; 64];
            for y in 0..8 {
                let sy = (by + y).min(h - 1);
                for x in 0..8 {
                    let sx = (bx + x).min(w - 1);
                    block[y * 8 + x] = frame.get(sy, sx) as f64 - 128.0;
                }
            }
            let mut coeffs = dct::forward(&block);
            for (c, &qs) in coeffs.iter_mut().zip(table.iter()) {
                let qs = qs as f64;
                *c = (*c / qs).round() * qs;
            }
            let rec = dct::inverse(&coeffs);
            for y in 0..8 {
                let oy = by + y;
                if oy >= h {
                    break;
                }
                for x in 0..8 {
                    let ox = bx + x;
                    if ox >= w {
                        break;
                    }
                    out[oy * w + ox] = clamp_u8(rec[y * 8 + x] + 128.0);
                }
            }
        }
    }
    Frame::new(w, h, out).expect("dimensions preserved")
}

/// Macroblock edge length in pixels.
pub const MACROBLOCK: usize = 16;

/// Value written into lost macroblocks of the first frame.
pub const CONCEALMENT_GRAY: u8 = 128;

/// Macroblock rectangles of a frame in raster order; edge blocks may be partial.
pub fn macroblocks(width: usize, height: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..height.div_ceil(MACROBLOCK)).flat_map(move |by| {
        (0..width.div_ceil(MACROBLOCK)).map(move |bx| {
            let row = by * MACROBLOCK;
            let col = bx * MACROBLOCK;
            (row, col, MACROBLOCK.min(width - col), MACROBLOCK.min(height - row))
        })
    })
}

/// Copies macroblock samples (row-major) out of a frame.
pub fn macroblock_bytes(frame: &Frame, row: usize, col: usize, w: usize, h: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(w * h);
    for i in row..row + h {
        out.extend_from_slice(&frame.luma()[i * frame.width() + col..i * frame.width() + col + w]);
    }
    out
}

/// Rebuilds a sequence in which macroblocks flagged by `is_lost(frame_index, frame, rect)`
/// are concealed: copied from the previous output frame, or mid-gray in frame 0.
pub fn conceal_losses(
    seq: &VideoSequence,
    mut is_lost: impl FnMut(usize, &Frame, (usize, usize, usize, usize)) -> bool,
) -> VideoSequence {
    let (w, h) = (seq.width(), seq.height());
    let mut out: Vec<Frame> = Vec::with_capacity(seq.len());
    for (k, src) in seq.frames().iter().enumerate() {
        let mut luma = src.luma().to_vec();
        for rect in macroblocks(w, h) {
            if !is_lost(k, src, rect) {
                continue;
            }
            let (row, col, bw, bh) = rect;
            for i in row..row + bh {
                let span = i * w + col..i * w + col + bw;
                match out.last() {
                    Some(prev) => luma[span.clone()].copy_from_slice(&prev.luma()[span]),
                    None => luma[span].fill(CONCEALMENT_GRAY),
                }
            }
        }
        out.push(Frame::new(w, h, luma).expect("dimensions preserved"));
    }
    VideoSequence::new(out, seq.frame_rate()).expect("dimensions preserved")
}

/// Drops each macroblock independently with probability `loss_rate` and conceals it.
pub fn block_loss(seq: &VideoSequence, loss_rate: f64, rng: &mut Rng) -> Result<VideoSequence> {
    if !(0.0..=1.0).contains(&loss_rate) {
        return Err(Error::InvalidParameter(format!("loss rate {loss_rate} outside [0, 1]")));
    }
    Ok(conceal_losses(seq, |_, _, _| rng.bernoulli(loss_rate)))
}

/// Separable Gaussian blur, radius ceil(3σ), replicated borders.
pub fn gaussian_blur(frame: &Frame, sigma: f64) -> Result<Frame> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("blur sigma must be positive, got {sigma}")));
    }
    let r = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-r..=r)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);

    let (w, h) = (frame.width() as isize, frame.height() as isize);
    let src = frame.to_f64();
    let idx = |i: isize, j: isize| (i.clamp(0, h - 1) * w + j.clamp(0, w - 1)) as usize;

    let mut tmp = vec![0.0; src.len()];
    for i in 0..h {
        for j in 0..w {
            tmp[(i * w + j) as usize] = taps
                .iter()
                .enumerate()
                .map(|(t, k)| k * src[idx(i, j + t as isize - r)])
                .sum();
        }
    }
    let mut out = vec![0.0; src.len()];
    for i in 0..h {
        for j in 0..w {
            out[(i * w + j) as usize] = taps
                .iter()
                .enumerate()
                .map(|(t, k)| k * tmp[idx(i + t as isize - r, j)])
                .sum();
        }
    }
    Frame::from_f64(frame.width(), frame.height(), &out)
}

/// Adds N(0, σ²) to every pixel, rounding and clamping.
pub fn awgn(frame: &Frame, sigma: f64, rng: &mut Rng) -> Result<Frame> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("noise sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(frame.clone());
    }
    let luma = frame
        .luma()
        .iter()
        .map(|&v| clamp_u8(v as f64 + sigma * rng.gaussian()))
        .collect();
    Frame::new(frame.width(), frame.height(), luma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fr::{mse, psnr};

    fn textured(w: usize, h: usize) -> Frame {
        Frame::from_fn(w, h, |i, j| {
            let x = j as f64 / 7.0;
            let y = i as f64 / 5.0;
            (128.0 + 60.0 * (x.sin() * y.cos()) + 30.0 * ((x + y) * 1.7).sin()) as u8
        })
        .unwrap()
    }

    #[test]
    fn quality_scaling() {
        let q50 = JpegQuality::new(50).unwrap();
        assert_eq!(q50.scale_factor(), 100);
        assert_eq!(q50.table(), BASE_LUMA_TABLE);
        assert_eq!(JpegQuality::new(10).unwrap().scale_factor(), 500);
        assert_eq!(JpegQuality::new(90).unwrap().scale_factor(), 20);
        assert!(JpegQuality::new(100).unwrap().table().iter().all(|&v| v == 1));
        assert!(JpegQuality::new(0).is_err());
        assert!(JpegQuality::new(101).is_err());
    }

    #[test]
    fn jpeg_constant_128_is_lossless() {
        let f = Frame::filled(24, 16, 128).unwrap();
        let out = jpeg_emulate(&f, JpegQuality::new(10).unwrap());
        assert_eq!(out, f);
        assert!(psnr(&f, &out).unwrap().db >= 50.0);
    }

    #[test]
    fn jpeg_quality_ordering_and_padding() {
        let f = textured(37, 29);
        let lo = jpeg_emulate(&f, JpegQuality::new(10).unwrap());
        let hi = jpeg_emulate(&f, JpegQuality::new(90).unwrap());
        assert_eq!((lo.width(), lo.height()), (37, 29));
        assert!(psnr(&f, &hi).unwrap().db > psnr(&f, &lo).unwrap().db);
    }

    #[test]
    fn jpeg_q100_near_idempotent() {
        let f = textured(32, 32);
        let q = JpegQuality::new(100).unwrap();
        let once = jpeg_emulate(&f, q);
        let twice = jpeg_emulate(&once, q);
        assert!(psnr(&once, &twice).unwrap().db >= 45.0);
    }

    #[test]
    fn block_loss_extremes() {
        let f = textured(48, 32);
        let seq = VideoSequence::new(vec![f.clone(), f.clone()], 25.0).unwrap();
        let mut rng = Rng::new(1);
        assert_eq!(block_loss(&seq, 0.0, &mut rng).unwrap(), seq);
        let single = VideoSequence::new(vec![f], 25.0).unwrap();
        let out = block_loss(&single, 1.0, &mut rng).unwrap();
        assert!(out.frames()[0].luma().iter().all(|&v| v == 128));
        assert!(block_loss(&seq, 1.5, &mut rng).is_err());
    }

    #[test]
    fn block_loss_conceals_from_previous_output() {
        let a = Frame::filled(32, 32, 10).unwrap();
        let b = Frame::filled(32, 32, 200).unwrap();
        let seq = VideoSequence::new(vec![a.clone(), b], 25.0).unwrap();
        // lose everything in frame 1 only
        let out = conceal_losses(&seq, |k, _, _| k == 1);
        assert_eq!(out.frames()[1], a);
    }

    #[test]
    fn block_loss_fraction() {
        // 10^4 macroblocks: 25 frames of 32x25 MBs is 20000; use 16x25x25 = 10000
        let f = Frame::filled(16 * 16, 25 * 16, 50).unwrap();
        let mut rng = Rng::new(2024);
        let mut lost = 0usize;
        let mut total = 0usize;
        let seq = VideoSequence::new(vec![f; 25], 25.0).unwrap();
        let _ = conceal_losses(&seq, |_, _, _| {
            total += 1;
            let l = rng.bernoulli(0.3);
            lost += l as usize;
            l
        });
        assert_eq!(total, 10_000);
        let frac = lost as f64 / total as f64;
        assert!((0.28..=0.32).contains(&frac), "{frac}");
    }

    #[test]
    fn partial_macroblocks_cover_frame() {
        let n: usize = macroblocks(40, 20).map(|(_, _, w, h)| w * h).sum();
        assert_eq!(n, 800);
        assert_eq!(macroblocks(40, 20).count(), 6);
    }

    #[test]
    fn blur_properties() {
        let c = Frame::filled(20, 20, 77).unwrap();
        assert_eq!(gaussian_blur(&c, 1.3).unwrap(), c);
        assert!(gaussian_blur(&c, 0.0).is_err());
        assert!(gaussian_blur(&c, -1.0).is_err());

        let mut rng = Rng::new(3);
        let ramp = Frame::from_fn(40, 40, |_, j| (j * 5) as u8).unwrap();
        let noisy = awgn(&ramp, 15.0, &mut rng).unwrap();
        let blurred = gaussian_blur(&noisy, 2.0).unwrap();
        assert!((blurred.mean() - noisy.mean()).abs() <= 1.0);
        let var = |f: &Frame| {
            let m = f.mean();
            f.luma().iter().map(|&v| (v as f64 - m).powi(2)).sum::<f64>()
        };
        assert!(var(&blurred) < var(&noisy));
    }

    #[test]
    fn awgn_properties() {
        let f = Frame::filled(100, 100, 128).unwrap();
        let mut rng = Rng::new(11);
        assert_eq!(awgn(&f, 0.0, &mut rng).unwrap(), f);
        let n = awgn(&f, 10.0, &mut rng).unwrap();
        let m = mse(&f, &n).unwrap();
        assert!((80.0..=120.0).contains(&m), "{m}");

        let mut prev = f64::INFINITY;
        for s in [2.0, 5.0, 10.0, 20.0] {
            let p = psnr(&f, &awgn(&f, s, &mut Rng::new(5)).unwrap()).unwrap().db;
            assert!(p < prev);
            prev = p;
        }
        let a = awgn(&f, 7.0, &mut Rng::new(9)).unwrap();
        let b = awgn(&f, 7.0, &mut Rng::new(9)).unwrap();
        assert_eq!(a, b);
    }
}
