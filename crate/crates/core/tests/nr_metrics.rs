mod common;

use std::sync::OnceLock;

use nalgebra::SymmetricEigen;
use vqa_core::corpus::natural_images;
use vqa_core::distortion::{gaussian_blur, jpeg_emulate, JpegQuality};
use vqa_core::eval::{pearson, NrModels};
use vqa_core::fr::psnr;
use vqa_core::nr::niqe::select_patches;
use vqa_core::nr::nss::{SHAPE_MAX, SHAPE_MIN};
use vqa_core::nr::{blockiness, blur, brisque_features, brisque_score, fit_ggd, mscn, niqe_fit, niqe_score};
use vqa_core::Frame;

fn models() -> &'static NrModels {
    static MODELS: OnceLock<NrModels> = OnceLock::new();
    MODELS.get_or_init(common::models)
}

fn test_images() -> Vec<Frame> {
    natural_images(3, 320, 240, 100)
}

fn jpeg(f: &Frame, q: u32) -> Frame {
    jpeg_emulate(f, JpegQuality::new(q).unwrap())
}

fn tile_means(f: &Frame) -> Frame {
    let mut out = f.luma().to_vec();
    for bi in (0..f.height()).step_by(8) {
        for bj in (0..f.width()).step_by(8) {
            let mut sum = 0u32;
            for i in bi..bi + 8 {
                for j in bj..bj + 8 {
                    sum += f.get(i, j) as u32;
                }
            }
            let mean = (sum as f64 / 64.0).round() as u8;
            for i in bi..bi + 8 {
                for j in bj..bj + 8 {
                    out[i * f.width() + j] = mean;
                }
            }
        }
    }
    Frame::new(f.width(), f.height(), out).unwrap()
}

#[test]
fn pristine_mscn_shape_is_natural() {
    for f in test_images() {
        let beta = fit_ggd(&mscn(&f).unwrap().coefficients).unwrap().shape;
        assert!((1.5..=2.8).contains(&beta), "{beta}");
    }
}

#[test]
fn features_are_finite_and_shapes_on_grid() {
    for f in natural_images(6, 320, 240, 300) {
        let v = brisque_features(&f).unwrap();
        assert!(v.values().iter().all(|x| x.is_finite()));
        for scale in 0..2 {
            let base = scale * 18;
            let shapes = [base, base + 2, base + 6, base + 10, base + 14];
            for k in shapes {
                assert!((SHAPE_MIN..=SHAPE_MAX).contains(&v.values()[k]), "feature {k} = {}", v.values()[k]);
            }
        }
    }
}

#[test]
fn compression_moves_features() {
    for f in test_images() {
        let d = brisque_features(&f).unwrap().distance(&brisque_features(&jpeg(&f, 10)).unwrap());
        assert!(d > 0.0);
    }
}

#[test]
fn features_ignore_a_constant_offset() {
    for f in test_images() {
        // compress the range first so the offset never clips
        let low = Frame::from_fn(f.width(), f.height(), |i, j| (f.get(i, j) as f64 * 0.9).round() as u8).unwrap();
        let high = Frame::from_fn(f.width(), f.height(), |i, j| low.get(i, j) + 10).unwrap();
        let (a, b) = (brisque_features(&low).unwrap(), brisque_features(&high).unwrap());
        for (k, (x, y)) in a.values().iter().zip(b.values()).enumerate() {
            assert!((x - y).abs() <= 0.05, "feature {k}: {x} vs {y}");
        }
    }
}

#[test]
fn tile_quantization_raises_blockiness() {
    for f in test_images() {
        assert!(blockiness(&tile_means(&f), 8).unwrap() > blockiness(&f, 8).unwrap());
    }
}

#[test]
fn blockiness_falls_as_quality_rises() {
    for f in test_images() {
        let b: Vec<f64> = [10, 30, 50, 70, 90].iter().map(|&q| blockiness(&jpeg(&f, q), 8).unwrap()).collect();
        assert!(b.windows(2).all(|w| w[1] <= w[0]), "{b:?}");
    }
}

#[test]
fn blur_detects_smoothing() {
    for f in test_images() {
        assert!(blur(&gaussian_blur(&f, 2.0).unwrap()).unwrap() > blur(&f).unwrap());
    }
}

#[test]
fn niqe_covariance_is_psd() {
    let corpus = natural_images(72, 480, 384, 500);
    let patches: usize = corpus.iter().map(|f| select_patches(f, 96).unwrap().len()).sum();
    assert!(patches >= 500, "only {patches} patches");
    let m = niqe_fit(&corpus, 96).unwrap();
    m.validate().unwrap();
    let eig = SymmetricEigen::new(nalgebra::DMatrix::from_row_slice(36, 36, &m.covariance));
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-8, "min eigenvalue {min}");
}

#[test]
fn niqe_pristine_member_scores_within_leave_one_out_spread() {
    let corpus = natural_images(20, 384, 384, 600);
    let full = niqe_fit(&corpus, 96).unwrap();
    let loo: Vec<f64> = (0..corpus.len())
        .map(|k| {
            let rest: Vec<Frame> = corpus.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, f)| f.clone()).collect();
            niqe_score(&corpus[k], &niqe_fit(&rest, 96).unwrap()).unwrap()
        })
        .collect();
    let mean = loo.iter().sum::<f64>() / loo.len() as f64;
    let sd = (loo.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (loo.len() - 1) as f64).sqrt();
    for f in &corpus {
        let s = niqe_score(f, &full).unwrap();
        assert!(s < mean + 2.0 * sd, "{s} vs {mean} + 2·{sd}");
    }
}

#[test]
fn niqe_penalizes_compression() {
    let m = &models().niqe;
    for f in test_images() {
        let clean = niqe_score(&f, m).unwrap();
        let compressed = niqe_score(&jpeg(&f, 10), m).unwrap();
        assert!(clean >= 0.0);
        assert!(compressed > clean, "{compressed} <= {clean}");
        assert_eq!(clean, niqe_score(&f, m).unwrap());
    }
}

#[test]
fn brisque_prefers_clean_training_images() {
    let m = &models().brisque;
    for f in natural_images(10, 320, 240, common::BRISQUE_CORPUS_SEED) {
        assert!(brisque_score(&f, m).unwrap() > brisque_score(&jpeg(&f, 10), m).unwrap());
    }
}

#[test]
fn brisque_interpolates_held_out_quality() {
    let m = &models().brisque;
    for f in test_images() {
        let lo = brisque_score(&jpeg(&f, 10), m).unwrap();
        let mid = brisque_score(&jpeg(&f, 45), m).unwrap();
        let hi = brisque_score(&jpeg(&f, 90), m).unwrap();
        assert!(lo < mid && mid < hi, "{lo} {mid} {hi}");
        assert_eq!(mid, brisque_score(&jpeg(&f, 45), m).unwrap());
    }
}

#[test]
fn brisque_tracks_quality_level() {
    let m = &models().brisque;
    for f in test_images() {
        let qs: Vec<f64> = (10..=90).step_by(10).map(|q| q as f64).collect();
        let scores: Vec<f64> = (10..=90).step_by(10).map(|q| brisque_score(&jpeg(&f, q), m).unwrap()).collect();
        let r = pearson(&qs, &scores).unwrap();
        assert!(r >= 0.8, "{r}");
    }
}

#[test]
fn jpeg_quality_orders_psnr() {
    for f in natural_images(5, 320, 240, 700) {
        assert!(psnr(&f, &jpeg(&f, 90)).unwrap().db > psnr(&f, &jpeg(&f, 10)).unwrap().db);
    }
}
