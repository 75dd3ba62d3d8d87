use std::fs;
use std::path::{Path, PathBuf};

use vqa_core::channel::{transmit_video, ChannelConfig};
use vqa_core::corpus::{natural_images, natural_video, SceneKind};
use vqa_core::distortion::{awgn, block_loss, gaussian_blur, jpeg_emulate, JpegQuality};
use vqa_core::eval::{
    emit_csv, emit_svg_plot, fmt_sig, run_compression_sweep, run_modulation_sweep, run_snr_sweep, score_metric,
    AxisKind, Metric, NrModels, SweepAxis, SweepConfig,
};
use vqa_core::fr::psnr;
use vqa_core::nr::brisque::train_brisque_with_lambda;
use vqa_core::nr::model_io::{read_brisque, read_niqe, write_brisque, write_niqe};
use vqa_core::nr::{brisque_score, niqe_fit, niqe_score, BrisqueRegressor, MvgModel};
use vqa_core::{Frame, Rng, VideoSequence};

use crate::axis::{parse_modulations, parse_numbers, parse_qualities};
use crate::failure::Failure;
use crate::media::{input_id, load, read_bytes, write_all_atomic, write_atomic, Media};
use crate::{DistortArgs, DistortKind, FitArgs, GenerateArgs, GenerateKind, ModelKind, ScoreArgs, SweepArgs, TransmitArgs};

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_bytes(path)?).map_err(|_| Failure::data(format!("{} is not UTF-8 text", path.display())))
}

fn load_niqe(path: &Path) -> Result<MvgModel, Failure> {
    read_niqe(&read_text(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn load_brisque(path: &Path) -> Result<BrisqueRegressor, Failure> {
    read_brisque(&read_text(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn score(args: ScoreArgs) -> Result<(), Failure> {
    let metric = args.metric;
    if metric.is_full_reference() && args.reference.is_none() {
        return Err(Failure::usage(format!("{metric} is a full-reference metric and requires --ref")));
    }
    if matches!(metric, Metric::Niqe | Metric::Brisque) && args.model.is_none() {
        return Err(Failure::usage(format!("{metric} requires --model")));
    }

    let dist = load(&args.dist)?;
    let reference = args.reference.as_deref().map(load).transpose()?;
    if let Some(r) = &reference {
        if r.frames().len() != dist.frames().len() {
            return Err(Failure::data(format!(
                "reference has {} frames, distorted has {}",
                r.frames().len(),
                dist.frames().len()
            )));
        }
    }

    let scorer: Box<dyn Fn(Option<&Frame>, &Frame) -> vqa_core::Result<f64>> = match (metric, args.model.as_deref()) {
        (Metric::Niqe, Some(p)) => {
            let model = load_niqe(p)?;
            Box::new(move |_, d| niqe_score(d, &model))
        }
        (Metric::Brisque, Some(p)) => {
            let model = load_brisque(p)?;
            Box::new(move |_, d| brisque_score(d, &model))
        }
        _ => Box::new(move |r, d| score_metric(metric, r, d, None)),
    };

    let mut values = Vec::with_capacity(dist.frames().len());
    for (k, d) in dist.frames().iter().enumerate() {
        let r = reference.as_ref().map(|m| &m.frames()[k]);
        values.push(scorer(r, d)?);
    }

    let mut out = String::new();
    match dist {
        Media::Image(_) => out.push_str(&format!("{metric} {}\n", fmt_sig(values[0]))),
        Media::Video(_) => {
            for (k, v) in values.iter().enumerate() {
                out.push_str(&format!("{metric} frame {k} {}\n", fmt_sig(*v)));
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            out.push_str(&format!("mean {}\n", fmt_sig(mean)));
        }
    }
    print!("{out}");
    Ok(())
}

fn jpeg_quality(param: f64) -> Result<JpegQuality, Failure> {
    if param.fract() != 0.0 || !(1.0..=100.0).contains(&param) {
        return Err(Failure::usage(format!("JPEG quality must be an integer in 1..=100, got {param}")));
    }
    Ok(JpegQuality::new(param as u32)?)
}

pub fn distort(args: DistortArgs) -> Result<(), Failure> {
    if !args.param.is_finite() {
        return Err(Failure::usage("--param must be finite"));
    }
    let input = load(&args.input)?;
    let mut rng = Rng::new(args.seed);
    let output = match args.kind {
        DistortKind::Jpeg => {
            let q = jpeg_quality(args.param)?;
            input.with_frames(input.frames().iter().map(|f| jpeg_emulate(f, q)).collect())?
        }
        DistortKind::Blur => {
            let frames = input.frames().iter().map(|f| gaussian_blur(f, args.param)).collect::<Result<_, _>>()?;
            input.with_frames(frames)?
        }
        DistortKind::Awgn => {
            let frames = input.frames().iter().map(|f| awgn(f, args.param, &mut rng)).collect::<Result<_, _>>()?;
            input.with_frames(frames)?
        }
        DistortKind::Blockloss => {
            let seq = block_loss(&input.clone().into_video(), args.param, &mut rng)?;
            input.with_frames(seq.into_frames())?
        }
    };
    write_atomic(&args.out, &output.encode())
}

pub fn transmit(args: TransmitArgs) -> Result<(), Failure> {
    let input = load(&args.input)?;
    let config = ChannelConfig {
        snr_db: args.snr,
        modulation: args.modulation,
        seed: args.seed,
    };
    let received = transmit_video(&input.clone().into_video(), &config)?;
    let output = input.with_frames(received.into_frames())?;
    write_atomic(&args.out, &output.encode())
}

fn corpus_images(dir: &Path) -> Result<Vec<(String, Frame)>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::runtime(format!("cannot list {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::data(format!("no .pgm images in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| match load(p)? {
            Media::Image(f) => Ok((p.file_name().unwrap().to_string_lossy().into_owned(), f)),
            Media::Video(_) => Err(Failure::data(format!("{} is not a PGM image", p.display()))),
        })
        .collect()
}

fn labelled_corpus(images: &[(String, Frame)], labels_path: &Path) -> Result<Vec<(Frame, f64)>, Failure> {
    let bytes = read_bytes(labels_path)?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let mut corpus = Vec::new();
    for (n, row) in reader.records().enumerate() {
        let bad = |what: &str| Failure::data(format!("{} row {}: {what}", labels_path.display(), n + 2));
        let row = row.map_err(|e| bad(&e.to_string()))?;
        let (Some(file), Some(label)) = (row.get(0), row.get(1)) else {
            return Err(bad("expected file,label"));
        };
        let label: f64 = label.trim().parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| bad("bad label"))?;
        let frame = images
            .iter()
            .find(|(name, _)| name == file.trim())
            .map(|(_, f)| f.clone())
            .ok_or_else(|| bad(&format!("{file} is not in the corpus")))?;
        corpus.push((frame, label));
    }
    Ok(corpus)
}

fn auto_labelled_corpus(images: &[(String, Frame)]) -> Result<Vec<(Frame, f64)>, Failure> {
    let mut corpus = Vec::new();
    for (_, img) in images {
        for q in (10..=90).step_by(10) {
            let d = jpeg_emulate(img, JpegQuality::new(q)?);
            let label = psnr(img, &d)?.db;
            corpus.push((d, label));
        }
    }
    Ok(corpus)
}

pub fn fit(args: FitArgs) -> Result<(), Failure> {
    let text = match args.kind {
        ModelKind::Niqe => {
            let images = corpus_images(&args.corpus)?;
            let frames: Vec<Frame> = images.into_iter().map(|(_, f)| f).collect();
            write_niqe(&niqe_fit(&frames, args.patch)?)
        }
        ModelKind::Brisque => {
            if args.labels.is_none() && !args.auto_label {
                return Err(Failure::usage("brisque fitting requires --labels CSV or --auto-label"));
            }
            let images = corpus_images(&args.corpus)?;
            let corpus = match &args.labels {
                Some(path) => labelled_corpus(&images, path)?,
                None => auto_labelled_corpus(&images)?,
            };
            write_brisque(&train_brisque_with_lambda(&corpus, args.lambda)?)
        }
    };
    write_atomic(&args.out, text.as_bytes())
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    let mut config = match args.kind {
        AxisKind::Snr => SweepConfig::snr_default(args.seed),
        AxisKind::Modulation => SweepConfig::modulation_default(args.seed),
        AxisKind::Compression => SweepConfig::compression_default(args.seed),
    };
    if let Some(text) = &args.axis {
        config.axis = match args.kind {
            AxisKind::Snr => SweepAxis::Snr(parse_numbers(text)?),
            AxisKind::Modulation => SweepAxis::Modulation(parse_modulations(text)?),
            AxisKind::Compression => SweepAxis::Compression(parse_qualities(text)?),
        };
    }
    config.fixed_modulation = args.fixed_mod;
    if let Some(text) = &args.fixed_snr {
        config.fixed_snrs = parse_numbers(text)?;
    }
    config.validate()?;
    Ok(config)
}

pub fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let config = sweep_config(&args)?;
    let models = NrModels {
        niqe: load_niqe(&args.niqe_model)?,
        brisque: load_brisque(&args.brisque_model)?,
    };

    let output = match args.kind {
        AxisKind::Compression => {
            let inputs = args
                .inputs
                .iter()
                .map(|p| match load(p)? {
                    Media::Image(f) => Ok((input_id(p), f)),
                    Media::Video(_) => Err(Failure::usage(format!("compression sweeps take PGM images, got {}", p.display()))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            run_compression_sweep(&config, &inputs, &models)?
        }
        kind => {
            let inputs: Vec<(String, VideoSequence)> = args
                .inputs
                .iter()
                .map(|p| Ok((input_id(p), load(p)?.into_video())))
                .collect::<Result<_, Failure>>()?;
            if kind == AxisKind::Snr {
                run_snr_sweep(&config, &inputs, &models)?
            } else {
                run_modulation_sweep(&config, &inputs, &models)?
            }
        }
    };

    let csv = emit_csv(&output.records, &output.report)?;
    let mut files = vec![
        (args.out_dir.join("records.csv"), csv.records),
        (args.out_dir.join("correlations.csv"), csv.correlations),
    ];
    for metric in Metric::ALL {
        let svg = emit_svg_plot(&output.records, metric.name())?;
        files.push((args.out_dir.join(format!("{metric}.svg")), svg.into_bytes()));
    }
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::runtime(format!("cannot create {}: {e}", args.out_dir.display())))?;
    write_all_atomic(&files)?;

    println!("records {}", output.records.len());
    for row in &output.report.rows {
        let r = row.pearson_r.map(fmt_sig).unwrap_or_else(|| "n/a".into());
        println!("{} {} {r}", row.input, row.metric);
    }
    Ok(())
}

pub fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let scene = match args.kind {
        GenerateKind::Image => None,
        GenerateKind::TalkingHead => Some(SceneKind::TalkingHead),
        GenerateKind::SlowMotion => Some(SceneKind::SlowMotion),
        GenerateKind::GlobalMotion => Some(SceneKind::GlobalMotion),
    };
    if args.count == 0 || args.frames == 0 {
        return Err(Failure::usage("--count and --frames must be positive"));
    }
    let files: Vec<(PathBuf, Vec<u8>)> = match scene {
        None => natural_images(args.count, args.width, args.height, args.seed)
            .iter()
            .enumerate()
            .map(|(k, f)| (args.out_dir.join(format!("image_{k:03}.pgm")), Media::Image(f.clone()).encode()))
            .collect(),
        Some(scene) => (0..args.count)
            .map(|k| {
                let seq = natural_video(scene, args.frames, args.width, args.height, args.seed + k as u64);
                (args.out_dir.join(format!("{}_{k:03}.y4m", scene.name())), Media::Video(seq).encode())
            })
            .collect(),
    };
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::runtime(format!("cannot create {}: {e}", args.out_dir.display())))?;
    write_all_atomic(&files)?;
    for (path, _) in &files {
        println!("{}", path.display());
    }
    Ok(())
}
