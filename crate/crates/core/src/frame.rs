//! Luma-plane frames and sequences, plus binary PGM and YUV4MPEG2 I/O.
//!
//! Every metric in this crate works on a single 8-bit luma plane. Chroma
//! planes found in Y4M input are skipped on load.

use crate::error::{parse_err, Error, Result};

/// A single 8-bit luma plane stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    luma: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, luma: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidFrame(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if luma.len() != width * height {
            return Err(Error::InvalidFrame(format!(
                "luma length {} does not match {width}x{height}",
                luma.len()
            )));
        }
        Ok(Frame {
            width,
            height,
            luma,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Frame::new(width, height, vec![value; width * height])
    }

    /// Builds a frame by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut luma = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                luma.push(f(i, j));
            }
        }
        Frame::new(width, height, luma)
    }

    /// Rounds and clamps real-valued samples into a frame.
    pub fn from_f64(width: usize, height: usize, samples: &[f64]) -> Result<Self> {
        let luma = samples.iter().map(|&v| clamp_u8(v)).collect();
        Frame::new(width, height, luma)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn luma(&self) -> &[u8] {
        &self.luma
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.luma[row * self.width + col]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.luma.iter().map(|&v| v as f64).collect()
    }

    pub fn into_luma(self) -> Vec<u8> {
        self.luma
    }

    pub fn same_dims(&self, other: &Frame) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.luma.iter().map(|&v| v as f64).sum::<f64>() / self.luma.len() as f64
    }

    /// Copies the `w`×`h` window whose top-left corner is at (`row`, `col`).
    pub fn crop(&self, row: usize, col: usize, w: usize, h: usize) -> Result<Frame> {
        if row + h > self.height || col + w > self.width {
            return Err(Error::InvalidParameter(format!(
                "crop {w}x{h}@({row},{col}) exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut luma = Vec::with_capacity(w * h);
        for i in row..row + h {
            luma.extend_from_slice(&self.luma[i * self.width + col..i * self.width + col + w]);
        }
        Frame::new(w, h, luma)
    }
}

/// Rounds half away from zero and clamps into [0, 255].
#[inline]
pub fn clamp_u8(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.round().clamp(0.0, 255.0) as u8
}

/// Ordered frames of identical dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoSequence {
    frames: Vec<Frame>,
    frame_rate: f64,
}

impl VideoSequence {
    pub fn new(frames: Vec<Frame>, frame_rate: f64) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::InvalidFrame("sequence must contain at least one frame".into()))?;
        for f in &frames[1..] {
            first.same_dims(f)?;
        }
        Ok(VideoSequence { frames, frame_rate })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<usize> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(start, format!("{what} out of range")))
    }
}

/// Parses a binary PGM (`P5`, maxval 255).
pub fn load_pgm(bytes: &[u8]) -> Result<Frame> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(parse_err(0, "wrong magic, expected P5"));
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.read_uint("width")?;
    let height = cur.read_uint("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.read_uint("maxval")?;
    if maxval != 255 {
        return Err(parse_err(maxval_at, format!("unsupported maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(parse_err(cur.pos, "expected whitespace after maxval")),
    }
    if width == 0 || height == 0 {
        return Err(parse_err(2, format!("invalid dimensions {width}x{height}")));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| parse_err(2, "dimensions overflow"))?;
    let end = cur.pos + n;
    if bytes.len() < end {
        return Err(parse_err(
            bytes.len(),
            format!("truncated payload: need {n} bytes, have {}", bytes.len() - cur.pos),
        ));
    }
    Frame::new(width, height, bytes[cur.pos..end].to_vec())
}

/// Serializes a frame as canonical binary PGM.
pub fn save_pgm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend_from_slice(frame.luma());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chroma {
    C420,
    Mono,
}

fn parse_rate(tag: &str) -> Option<f64> {
    let (n, d) = tag.split_once(':')?;
    let n: f64 = n.parse().ok()?;
    let d: f64 = d.parse().ok()?;
    (d != 0.0).then(|| n / d)
}

/// Parses a YUV4MPEG2 stream (4:2:0 or mono), keeping only the Y plane.
pub fn load_y4m(bytes: &[u8]) -> Result<VideoSequence> {
    const SIG: &[u8] = b"YUV4MPEG2";
    if !bytes.starts_with(SIG) {
        return Err(parse_err(0, "missing YUV4MPEG2 signature"));
    }
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| parse_err(bytes.len(), "unterminated stream header"))?;
    let header = std::str::from_utf8(&bytes[SIG.len()..header_end])
        .map_err(|_| parse_err(SIG.len(), "stream header is not ASCII"))?;

    let mut width = None;
    let mut height = None;
    let mut rate = 25.0;
    let mut chroma = Chroma::C420;
    let mut offset = SIG.len();
    for tag in header.split(' ') {
        let at = offset;
        offset += tag.len() + 1;
        if tag.is_empty() {
            continue;
        }
        let (key, val) = tag.split_at(1);
        match key {
            "W" => width = Some(val.parse::<usize>().map_err(|_| parse_err(at, "bad W tag"))?),
            "H" => height = Some(val.parse::<usize>().map_err(|_| parse_err(at, "bad H tag"))?),
            "F" => rate = parse_rate(val).ok_or_else(|| parse_err(at, "bad F tag"))?,
            "C" => {
                chroma = if val.starts_with("420") {
                    Chroma::C420
                } else if val == "mono" {
                    Chroma::Mono
                } else {
                    return Err(parse_err(at, format!("unsupported chroma C{val}")));
                }
            }
            // interlacing, aspect, comments
            _ => {}
        }
    }
    let width = width.ok_or_else(|| parse_err(header_end, "missing W tag"))?;
    let height = height.ok_or_else(|| parse_err(header_end, "missing H tag"))?;
    if width == 0 || height == 0 {
        return Err(parse_err(header_end, "zero dimension"));
    }
    let luma_len = width * height;
    let chroma_len = match chroma {
        Chroma::C420 => 2 * width.div_ceil(2) * height.div_ceil(2),
        Chroma::Mono => 0,
    };

    let mut pos = header_end + 1;
    let mut frames = Vec::new();
    while pos < bytes.len() {
        if !bytes[pos..].starts_with(b"FRAME") {
            return Err(parse_err(pos, "expected FRAME marker"));
        }
        let nl = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| parse_err(pos, "unterminated FRAME header"))?;
        pos += nl + 1;
        if bytes.len() < pos + luma_len + chroma_len {
            return Err(parse_err(bytes.len(), format!("truncated frame {}", frames.len())));
        }
        frames.push(Frame::new(width, height, bytes[pos..pos + luma_len].to_vec())?);
        pos += luma_len + chroma_len;
    }
    if frames.is_empty() {
        return Err(parse_err(pos, "stream contains no frames"));
    }
    VideoSequence::new(frames, rate)
}

fn rate_tag(rate: f64) -> String {
    if rate > 0.0 && (rate - rate.round()).abs() < 1e-9 {
        format!("{}:1", rate.round() as u64)
    } else if rate > 0.0 {
        format!("{}:1001", (rate * 1001.0).round() as u64)
    } else {
        "25:1".to_string()
    }
}

/// Writes a monochrome YUV4MPEG2 stream.
pub fn save_y4m(seq: &VideoSequence) -> Vec<u8> {
    let mut out = format!(
        "YUV4MPEG2 W{} H{} F{} Ip A1:1 Cmono\n",
        seq.width(),
        seq.height(),
        rate_tag(seq.frame_rate())
    )
    .into_bytes();
    for f in seq.frames() {
        out.extend_from_slice(b"FRAME\n");
        out.extend_from_slice(f.luma());
    }
    out
}

/// BT.601 luma from three equally sized channel planes.
pub fn rgb_to_luma(width: usize, height: usize, r: &[u8], g: &[u8], b: &[u8]) -> Result<Frame> {
    let n = width * height;
    for (name, plane) in [("r", r), ("g", g), ("b", b)] {
        if plane.len() != n {
            return Err(Error::InvalidFrame(format!(
                "{name} plane has {} samples, expected {n}",
                plane.len()
            )));
        }
    }
    let luma = r
        .iter()
        .zip(g)
        .zip(b)
        .map(|((&r, &g), &b)| clamp_u8(0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64))
        .collect();
    Frame::new(width, height, luma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pgm_basic_payload() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 128, 255, 64]);
        let f = load_pgm(&bytes).unwrap();
        assert_eq!((f.width(), f.height()), (2, 2));
        assert_eq!(f.luma(), &[0, 128, 255, 64]);
    }

    #[test]
    fn pgm_rejects_16bit() {
        let bytes = b"P5\n1 1\n65535\n\x00\x00".to_vec();
        let err = load_pgm(&bytes).unwrap_err();
        assert!(err.to_string().contains("unsupported maxval"), "{err}");
    }

    #[test]
    fn pgm_errors_name_offsets() {
        assert!(matches!(load_pgm(b"P6\n1 1\n255\n\x00"), Err(Error::Parse { offset: 0, .. })));
        let err = load_pgm(b"P5\n4 4\n255\n\x00\x01").unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 13, .. }), "{err}");
        assert!(load_pgm(b"P5\nx 4\n255\n").is_err());
        assert!(load_pgm(b"P5\n0 4\n255\n").is_err());
    }

    #[test]
    fn pgm_accepts_comments() {
        let f = load_pgm(b"P5 # made by hand\n1 1\n255\n\x07").unwrap();
        assert_eq!(f.luma(), &[7]);
    }

    #[test]
    fn save_pgm_layout() {
        let f = Frame::new(1, 1, vec![0]).unwrap();
        assert_eq!(save_pgm(&f), b"P5\n1 1\n255\n\x00");
        let f = Frame::new(2, 1, vec![10, 20]).unwrap();
        assert_eq!(save_pgm(&f), b"P5\n2 1\n255\n\x0a\x14");
    }

    fn y4m_stream(w: usize, h: usize, n: usize, chroma: &str) -> (Vec<u8>, Vec<Vec<u8>>) {
        let mut out = format!("YUV4MPEG2 W{w} H{h} F30:1 Ip A1:1 {chroma}\n").into_bytes();
        let mut lumas = Vec::new();
        let c_len = if chroma == "Cmono" { 0 } else { 2 * w.div_ceil(2) * h.div_ceil(2) };
        for k in 0..n {
            out.extend_from_slice(b"FRAME\n");
            let y: Vec<u8> = (0..w * h).map(|i| (i * 7 + k * 13) as u8).collect();
            out.extend_from_slice(&y);
            out.extend(std::iter::repeat(200u8).take(c_len));
            lumas.push(y);
        }
        (out, lumas)
    }

    #[test]
    fn y4m_two_frames_c420() {
        let (bytes, lumas) = y4m_stream(4, 4, 2, "C420jpeg");
        let seq = load_y4m(&bytes).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.frame_rate(), 30.0);
        for (f, y) in seq.frames().iter().zip(&lumas) {
            assert_eq!(f.luma(), &y[..]);
        }
    }

    #[test]
    fn y4m_mono_has_no_chroma() {
        let (bytes, lumas) = y4m_stream(5, 3, 3, "Cmono");
        let seq = load_y4m(&bytes).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.frames()[2].luma(), &lumas[2][..]);
    }

    #[test]
    fn y4m_generated_frame_count() {
        for n in [1, 4, 17] {
            let (bytes, _) = y4m_stream(6, 2, n, "C420");
            assert_eq!(load_y4m(&bytes).unwrap().len(), n);
        }
    }

    #[test]
    fn y4m_errors() {
        assert!(load_y4m(b"YUV4MPEG W4 H4\nFRAME\n").is_err());
        assert!(load_y4m(b"YUV4MPEG2 H4 C420\nFRAME\n").is_err());
        assert!(load_y4m(b"YUV4MPEG2 W4 C420\nFRAME\n").is_err());
        let (mut bytes, _) = y4m_stream(4, 4, 2, "C420");
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(load_y4m(&bytes), Err(Error::Parse { .. })));
        assert!(load_y4m(b"YUV4MPEG2 W2 H2 C444\nFRAME\n").is_err());
    }

    #[test]
    fn y4m_save_roundtrip_luma() {
        let (bytes, _) = y4m_stream(8, 6, 3, "C420");
        let seq = load_y4m(&bytes).unwrap();
        let back = load_y4m(&save_y4m(&seq)).unwrap();
        assert_eq!(back, seq);
    }

    #[test]
    fn luma_weights() {
        let f = rgb_to_luma(3, 1, &[255, 0, 255], &[255, 0, 0], &[255, 0, 0]).unwrap();
        assert_eq!(f.luma(), &[255, 0, 76]);
        assert!(rgb_to_luma(2, 1, &[0, 0], &[0], &[0, 0]).is_err());
    }

    #[test]
    fn sequence_rejects_mixed_dims() {
        let a = Frame::filled(4, 4, 0).unwrap();
        let b = Frame::filled(4, 5, 0).unwrap();
        assert!(VideoSequence::new(vec![a, b], 25.0).is_err());
        assert!(VideoSequence::new(vec![], 25.0).is_err());
    }

    proptest! {
        #[test]
        fn pgm_roundtrip(w in 1usize..24, h in 1usize..24, seed in any::<u64>()) {
            let luma: Vec<u8> = (0..w * h)
                .map(|i| (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64).wrapping_mul(1442695040888963407) >> 56) as u8)
                .collect();
            let f = Frame::new(w, h, luma).unwrap();
            let bytes = save_pgm(&f);
            let back = load_pgm(&bytes).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(save_pgm(&back), bytes);
        }
    }
}
