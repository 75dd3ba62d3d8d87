use vqa_core::channel::Modulation;

use crate::failure::Failure;

/// Parses `start:stop:step` (stop included when the steps land on it) or a
/// comma-separated list.
pub fn parse_numbers(text: &str) -> Result<Vec<f64>, Failure> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Failure::usage(format!("bad number \"{s}\" in axis \"{text}\"")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(number).collect(),
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 || stop < start {
                return Err(Failure::usage(format!("axis \"{text}\" needs step > 0 and stop >= start")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(Failure::usage(format!("axis \"{text}\" is neither start:stop:step nor a list"))),
    }
}

pub fn parse_qualities(text: &str) -> Result<Vec<u32>, Failure> {
    parse_numbers(text)?
        .into_iter()
        .map(|v| {
            if v.fract() == 0.0 && (1.0..=100.0).contains(&v) {
                Ok(v as u32)
            } else {
                Err(Failure::usage(format!("JPEG quality {v} is not an integer in 1..=100")))
            }
        })
        .collect()
}

pub fn parse_modulations(text: &str) -> Result<Vec<Modulation>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<Modulation>().map_err(|e| Failure::usage(e.to_string())))
        .collect()
}
