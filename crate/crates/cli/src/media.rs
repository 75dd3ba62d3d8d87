use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use vqa_core::frame::{load_pgm, load_y4m, save_pgm, save_y4m};
use vqa_core::{Frame, VideoSequence};

use crate::failure::Failure;

/// A still image or a clip, remembering which container it came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Media {
    Image(Frame),
    Video(VideoSequence),
}

impl Media {
    pub fn frames(&self) -> &[Frame] {
        match self {
            Media::Image(f) => std::slice::from_ref(f),
            Media::Video(v) => v.frames(),
        }
    }

    pub fn into_video(self) -> VideoSequence {
        match self {
            Media::Image(f) => VideoSequence::new(vec![f], 30.0).expect("single frame"),
            Media::Video(v) => v,
        }
    }

    /// Rebuilds the same kind of container around new frames.
    pub fn with_frames(&self, frames: Vec<Frame>) -> Result<Media, Failure> {
        Ok(match self {
            Media::Image(_) => Media::Image(frames.into_iter().next().expect("one frame")),
            Media::Video(v) => Media::Video(VideoSequence::new(frames, v.frame_rate())?),
        })
    }

    pub fn encode(&self) -> Vec<u8> {
        match self {
            Media::Image(f) => save_pgm(f),
            Media::Video(v) => save_y4m(v),
        }
    }
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::runtime(format!("cannot read {}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<Media, Failure> {
    let bytes = read_bytes(path)?;
    let parsed = if bytes.starts_with(b"YUV4MPEG2") {
        load_y4m(&bytes).map(Media::Video)
    } else {
        load_pgm(&bytes).map(Media::Image)
    };
    parsed.map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn temp_path(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.{}.tmp", std::process::id()))
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let tmp = temp_path(path);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(bytes).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Failure::runtime(format!("cannot write {}: {e}", path.display()))
    })
}

/// Writes several files, each atomically; nothing is written until all are ready.
pub fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<(), Failure> {
    for (path, bytes) in files {
        write_atomic(path, bytes)?;
    }
    Ok(())
}

pub fn input_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}
