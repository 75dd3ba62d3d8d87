//! Full-reference metrics: MSE, PSNR and SSIM on luma planes.

use crate::error::{Error, Result};
use crate::filter::{filter_valid, gaussian_taps};
use crate::frame::Frame;

/// PSNR reported when the two frames are identical.
pub const PSNR_CAP_DB: f64 = 100.0;

const PEAK: f64 = 255.0;

/// Mean squared error, normalized by pixel count.
pub fn mse(orig: &Frame, rcvd: &Frame) -> Result<f64> {
    orig.same_dims(rcvd)?;
    let sum: f64 = orig
        .luma()
        .iter()
        .zip(rcvd.luma())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    Ok(sum / (orig.width() * orig.height()) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psnr {
    pub db: f64,
    /// True when MSE was zero and `db` holds the cap.
    pub identical: bool,
}

pub fn psnr_from_mse(mse: f64) -> Psnr {
    if mse == 0.0 {
        Psnr {
            db: PSNR_CAP_DB,
            identical: true,
        }
    } else {
        Psnr {
            db: 10.0 * (PEAK * PEAK / mse).log10(),
            identical: false,
        }
    }
}

pub fn psnr(orig: &Frame, rcvd: &Frame) -> Result<Psnr> {
    Ok(psnr_from_mse(mse(orig, rcvd)?))
}

/// Constants of the SSIM index.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub dynamic_range: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            window: 11,
            sigma: 1.5,
            dynamic_range: 255.0,
            k1: 0.01,
            k2: 0.03,
        }
    }
}

impl SsimParams {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    pub fn taps(&self) -> Vec<f64> {
        gaussian_taps(self.window, self.sigma)
    }

    fn validate(&self) -> Result<()> {
        if self.window == 0 || self.sigma <= 0.0 || self.c1() <= 0.0 || self.c2() <= 0.0 {
            return Err(Error::InvalidParameter(format!("bad SSIM params {self:?}")));
        }
        Ok(())
    }
}

/// Valid-region SSIM map with its dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl SsimMap {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Local SSIM at every pixel where the window fits entirely.
pub fn ssim_map(orig: &Frame, rcvd: &Frame, params: &SsimParams) -> Result<SsimMap> {
    orig.same_dims(rcvd)?;
    params.validate()?;
    let (w, h) = (orig.width(), orig.height());
    let k = params.window;
    if w < k || h < k {
        return Err(Error::FrameTooSmall {
            width: w,
            height: h,
            min_width: k,
            min_height: k,
        });
    }
    let x = orig.to_f64();
    let y = rcvd.to_f64();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * b).collect();

    let taps = params.taps();
    let mu_x = filter_valid(&x, w, h, &taps);
    let mu_y = filter_valid(&y, w, h, &taps);
    let e_xx = filter_valid(&xx, w, h, &taps);
    let e_yy = filter_valid(&yy, w, h, &taps);
    let e_xy = filter_valid(&xy, w, h, &taps);

    let (c1, c2) = (params.c1(), params.c2());
    let values = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x[i], mu_y[i]);
            let vx = e_xx[i] - mx * mx;
            let vy = e_yy[i] - my * my;
            let cxy = e_xy[i] - mx * my;
            local_ssim(mx, my, vx, vy, cxy, c1, c2)
        })
        .collect();
    Ok(SsimMap {
        width: w - k + 1,
        height: h - k + 1,
        values,
    })
}

#[inline]
pub(crate) fn local_ssim(mx: f64, my: f64, vx: f64, vy: f64, cxy: f64, c1: f64, c2: f64) -> f64 {
    let num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
    let den = (mx * mx + my * my + c1) * (vx + vy + c2);
    if num == den {
        1.0
    } else {
        num / den
    }
}

/// Mean SSIM over the valid region.
pub fn ssim(orig: &Frame, rcvd: &Frame, params: &SsimParams) -> Result<f64> {
    Ok(ssim_map(orig, rcvd, params)?.mean())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> Frame {
        Frame::from_fn(w, h, |i, j| ((i * 3 + j * 5) % 256) as u8).unwrap()
    }

    #[test]
    fn mse_examples() {
        let f = ramp(16, 16);
        assert_eq!(mse(&f, &f).unwrap(), 0.0);
        let a = Frame::filled(4, 3, 0).unwrap();
        let b = Frame::filled(4, 3, 255).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 65025.0);
        let a = Frame::new(2, 2, vec![0, 0, 0, 0]).unwrap();
        let b = Frame::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 7.5);
        assert_eq!(mse(&b, &a).unwrap(), 7.5);
    }

    #[test]
    fn psnr_examples() {
        let f = ramp(8, 8);
        let p = psnr(&f, &f).unwrap();
        assert_eq!(p.db, 100.0);
        assert!(p.identical);
        assert_eq!(psnr_from_mse(65025.0).db, 0.0);
        let p = psnr_from_mse(7.5).db;
        let expected = 10.0 * (65025.0f64 / 7.5).log10();
        assert!((p - expected).abs() < 1e-12);
        assert!((p - 39.38).abs() < 0.005);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Frame::filled(12, 12, 0).unwrap();
        let b = Frame::filled(12, 13, 0).unwrap();
        assert!(matches!(mse(&a, &b), Err(Error::DimensionMismatch(..))));
        assert!(psnr(&a, &b).is_err());
        assert!(ssim(&a, &b, &SsimParams::default()).is_err());
    }

    #[test]
    fn ssim_identity_and_map_shape() {
        let f = ramp(20, 15);
        let p = SsimParams::default();
        let m = ssim_map(&f, &f, &p).unwrap();
        assert_eq!((m.width, m.height), (10, 5));
        assert!(m.values.iter().all(|&v| v == 1.0));
        assert_eq!(ssim(&f, &f, &p).unwrap(), 1.0);
    }

    #[test]
    fn ssim_too_small() {
        let f = Frame::filled(10, 20, 3).unwrap();
        assert!(matches!(
            ssim(&f, &f, &SsimParams::default()),
            Err(Error::FrameTooSmall { .. })
        ));
    }

    #[test]
    fn ssim_constants() {
        let p = SsimParams::default();
        assert!((p.c1() - 6.5025).abs() < 1e-12);
        assert!((p.c2() - 58.5225).abs() < 1e-12);
        let t = p.taps();
        let s: f64 = t.iter().sum::<f64>().powi(2);
        assert!((s - 1.0).abs() < 1e-12);
    }
}
