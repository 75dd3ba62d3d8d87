mod axis;
mod commands;
mod failure;
mod media;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vqa_core::channel::Modulation;
use vqa_core::eval::{AxisKind, Metric};

use failure::Failure;

/// Video quality assessment: metrics, degradations, channel emulation and sweeps.
#[derive(Debug, Parser)]
#[command(name = "vqa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a distorted image or video with one metric.
    Score(ScoreArgs),
    /// Apply a synthetic degradation to an image or video.
    Distort(DistortArgs),
    /// Send a video through the QAM/AWGN channel with macroblock concealment.
    Transmit(TransmitArgs),
    /// Fit a NIQE model or train a BRISQUE regressor from a directory of PGM images.
    Fit(FitArgs),
    /// Run an SNR, modulation or compression sweep and write CSV and SVG reports.
    Sweep(SweepArgs),
    /// Write procedurally generated test images or clips.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    metric: Metric,
    /// Distorted PGM or Y4M file.
    #[arg(long)]
    dist: PathBuf,
    /// Reference file, required for psnr and ssim.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    /// Model file, required for niqe and brisque.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistortKind {
    Jpeg,
    Blockloss,
    Blur,
    Awgn,
}

#[derive(Debug, Args)]
struct DistortArgs {
    #[arg(long, value_enum)]
    kind: DistortKind,
    /// JPEG quality (1..=100), loss rate (0..=1), blur sigma (> 0) or noise sigma (>= 0).
    #[arg(long, allow_negative_numbers = true)]
    param: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TransmitArgs {
    /// Es/N0 in dB.
    #[arg(long, allow_negative_numbers = true)]
    snr: f64,
    #[arg(long = "mod")]
    modulation: Modulation,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    Niqe,
    Brisque,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long, value_enum)]
    kind: ModelKind,
    /// Directory of PGM images.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// CSV with columns file,label (file names relative to the corpus directory).
    #[arg(long, conflicts_with = "auto_label")]
    labels: Option<PathBuf>,
    /// Label JPEG q=10..90 versions of every corpus image by their PSNR.
    #[arg(long)]
    auto_label: bool,
    /// NIQE patch edge in pixels.
    #[arg(long, default_value_t = vqa_core::nr::niqe::DEFAULT_PATCH)]
    patch: usize,
    /// BRISQUE ridge penalty.
    #[arg(long, default_value_t = vqa_core::nr::brisque::DEFAULT_LAMBDA)]
    lambda: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    kind: AxisKind,
    /// Input files: Y4M clips for snr/modulation, PGM images for compression.
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Axis values: start:stop:step or a comma list (modulation names for a modulation sweep).
    #[arg(long)]
    axis: Option<String>,
    /// Modulation held fixed in an SNR sweep.
    #[arg(long, default_value = "qam32")]
    fixed_mod: Modulation,
    /// Comma-separated SNRs held fixed in a modulation sweep.
    #[arg(long, allow_negative_numbers = true)]
    fixed_snr: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    niqe_model: PathBuf,
    #[arg(long)]
    brisque_model: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenerateKind {
    Image,
    TalkingHead,
    SlowMotion,
    GlobalMotion,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenerateKind,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Frames per clip.
    #[arg(long, default_value_t = 30)]
    frames: usize,
    #[arg(long, default_value_t = vqa_core::corpus::DEFAULT_WIDTH)]
    width: usize,
    #[arg(long, default_value_t = vqa_core::corpus::DEFAULT_HEIGHT)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("VQA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("VQA_THREADS must be a positive integer, got \"{value}\"")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Score(a) => commands::score(a),
        Command::Distort(a) => commands::distort(a),
        Command::Transmit(a) => commands::transmit(a),
        Command::Fit(a) => commands::fit(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Generate(a) => commands::generate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
