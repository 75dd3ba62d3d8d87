#![allow(dead_code)]

use vqa_core::corpus::natural_images;
use vqa_core::distortion::{jpeg_emulate, JpegQuality};
use vqa_core::eval::NrModels;
use vqa_core::fr::psnr;
use vqa_core::nr::{niqe_fit, train_brisque};
use vqa_core::Frame;

pub const NIQE_CORPUS_SEED: u64 = 1000;
pub const BRISQUE_CORPUS_SEED: u64 = 2000;

/// NIQE fitted to generated pristine images, BRISQUE trained on JPEG
/// versions of a disjoint set labeled by PSNR.
pub fn models() -> NrModels {
    let pristine = natural_images(24, 384, 384, NIQE_CORPUS_SEED);
    let niqe = niqe_fit(&pristine, 96).expect("niqe fit");
    let mut training: Vec<(Frame, f64)> = Vec::new();
    for img in natural_images(10, 320, 240, BRISQUE_CORPUS_SEED) {
        for q in (10..=90).step_by(10) {
            let d = jpeg_emulate(&img, JpegQuality::new(q).unwrap());
            let label = psnr(&img, &d).unwrap().db;
            training.push((d, label));
        }
    }
    let brisque = train_brisque(&training).expect("brisque fit");
    NrModels { niqe, brisque }
}

pub fn laplace_samples(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = vqa_core::Rng::new(seed);
    (0..n)
        .map(|_| {
            let e = -(1.0 - rng.uniform()).ln();
            if rng.uniform() < 0.5 {
                -e
            } else {
                e
            }
        })
        .collect()
}

pub fn gaussian_samples(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = vqa_core::Rng::new(seed);
    (0..n).map(|_| rng.gaussian()).collect()
}

/// Rejection sampler for the α = 1 asymmetric generalized Gaussian whose
/// one-sided second moments are `sigma_left²` and `sigma_right²`, using a
/// symmetric Laplace envelope with the wider of the two scales.
pub fn aggd_alpha1_samples(n: usize, sigma_left: f64, sigma_right: f64, seed: u64) -> Vec<f64> {
    let mut rng = vqa_core::Rng::new(seed);
    let (bl, br) = (sigma_left / 2f64.sqrt(), sigma_right / 2f64.sqrt());
    let b = bl.max(br);
    let target = |x: f64| {
        if x < 0.0 {
            (x / bl).exp() / (bl + br)
        } else {
            (-x / br).exp() / (bl + br)
        }
    };
    let envelope = |x: f64| (-x.abs() / b).exp() / (2.0 * b);
    let m = 2.0 * b / (bl + br);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let e = -(1.0 - rng.uniform()).ln() * b;
        let x = if rng.uniform() < 0.5 { -e } else { e };
        if rng.uniform() * m * envelope(x) <= target(x) {
            out.push(x);
        }
    }
    out
}
