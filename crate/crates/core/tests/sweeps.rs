mod common;

use std::sync::OnceLock;

use vqa_core::corpus::{natural_images, natural_video, SceneKind};
use vqa_core::eval::{
    emit_csv, emit_svg_plot, modulation_row_id, run_compression_sweep, run_modulation_sweep, run_snr_sweep, Metric,
    NrModels, SweepAxis, SweepConfig, SweepRecord,
};
use vqa_core::{Frame, VideoSequence};

fn models() -> &'static NrModels {
    static MODELS: OnceLock<NrModels> = OnceLock::new();
    MODELS.get_or_init(common::models)
}

fn images() -> Vec<(String, Frame)> {
    natural_images(2, 320, 240, 100).into_iter().enumerate().map(|(k, f)| (format!("img{k}"), f)).collect()
}

fn clips() -> Vec<(String, VideoSequence)> {
    vec![
        ("head".into(), natural_video(SceneKind::TalkingHead, 3, 320, 240, 1)),
        ("pan".into(), natural_video(SceneKind::GlobalMotion, 3, 320, 240, 2)),
    ]
}

fn series<'a>(records: &'a [SweepRecord], input: &str) -> Vec<&'a SweepRecord> {
    let mut out: Vec<_> = records.iter().filter(|r| r.input == input).collect();
    out.sort_by(|a, b| a.axis_value.total_cmp(&b.axis_value));
    out
}

#[test]
fn compression_sweep_trends() {
    let out = run_compression_sweep(&SweepConfig::compression_default(0), &images(), models()).unwrap();
    assert_eq!(out.records.len(), 2 * 9);
    for (id, _) in images() {
        let s = series(&out.records, &id);
        assert_eq!(s.len(), 9);
        assert!(s.windows(2).all(|w| w[1].scores.psnr > w[0].scores.psnr));
        assert!(s.windows(2).all(|w| w[1].scores.blur <= w[0].scores.blur), "{id}");
        for m in Metric::COMPARED {
            assert_eq!(out.report.get(&id, m).unwrap().n_points, 9);
        }
    }
    assert!(out.records.iter().all(|r| r.scores.is_finite()));
}

#[test]
fn snr_sweep_record_count_and_range() {
    let out = run_snr_sweep(&SweepConfig::snr_default(4), &clips(), models()).unwrap();
    assert_eq!(out.records.len(), 2 * 11);
    for row in &out.report.rows {
        if let Some(r) = row.pearson_r {
            assert!((-1.0..=1.0).contains(&r));
        }
    }
}

#[test]
fn modulation_sweep_psnr_does_not_rise_with_order() {
    let out = run_modulation_sweep(&SweepConfig::modulation_default(5), &clips(), models()).unwrap();
    assert_eq!(out.records.len(), 3 * 2 * 4);
    for snr in [10.0, 13.0, 15.0] {
        for (id, _) in clips() {
            let row = modulation_row_id(&id, snr);
            let p: Vec<f64> = series(&out.records, &row).iter().map(|r| r.scores.psnr).collect();
            assert_eq!(p.len(), 4);
            assert!(p.windows(2).all(|w| w[1] <= w[0]), "{row}: {p:?}");
            assert_eq!(out.report.get(&row, Metric::Blockiness).unwrap().n_points, 4);
        }
        assert!(out.report.get(&modulation_row_id("mean", snr), Metric::Blur).is_some());
    }
}

#[test]
fn svg_has_one_polyline_per_input() {
    let out = run_compression_sweep(&SweepConfig::compression_default(0), &images(), models()).unwrap();
    for m in Metric::ALL {
        let svg = emit_svg_plot(&out.records, m.name()).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        let lines: Vec<&str> = svg.lines().filter(|l| l.trim_start().starts_with("<polyline")).collect();
        assert_eq!(lines.len(), 2);
        for l in lines {
            let points = l.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
            assert_eq!(points.split_whitespace().count(), 9);
        }
    }
    assert!(emit_svg_plot(&out.records, "sharpness").is_err());
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let mut config = SweepConfig::snr_default(9);
    config.axis = SweepAxis::Snr(vec![19.0, 20.0, 21.0, 22.0]);
    let a = run_snr_sweep(&config, &clips(), models()).unwrap();
    let b = run_snr_sweep(&config, &clips(), models()).unwrap();
    assert_eq!(emit_csv(&a.records, &a.report).unwrap(), emit_csv(&b.records, &b.report).unwrap());
}
