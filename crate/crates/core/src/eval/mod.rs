//! Sweep harness: run degradation experiments, score every output, and
//! correlate each metric against PSNR.

pub mod metrics;
pub mod report;
pub mod stats;
pub mod svg;
pub mod sweep;

pub use metrics::{score_frame, score_metric, score_video, Metric, NrModels, Scores};
pub use report::{emit_csv, fmt_sig, parse_records_csv, CsvOutput};
pub use stats::pearson;
pub use svg::emit_svg_plot;
pub use sweep::{
    modulation_row_id, run_compression_sweep, run_modulation_sweep, run_snr_sweep, AxisKind, CorrelationReport, CorrelationRow,
    SweepAxis, SweepConfig, SweepOutput, SweepRecord,
};
