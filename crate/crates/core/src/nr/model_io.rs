//! Line-oriented text format for fitted models.
//!
//! ```text
//! VQA-MODEL <kind> v1
//! <dimension>
//! <one number per line>
//! ```
//!
//! NIQE models list the mean vector then the covariance row-major. BRISQUE
//! models list the weights (bias last), then the per-feature minima, then
//! the maxima. Numbers use Rust's shortest round-trip rendering.

use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};

use super::brisque::BrisqueRegressor;
use super::niqe::MvgModel;

pub const NIQE_KIND: &str = "niqe";
pub const BRISQUE_KIND: &str = "brisque";

fn render(kind: &str, dim: usize, values: impl Iterator<Item = f64>) -> String {
    let mut out = format!("VQA-MODEL {kind} v1\n{dim}\n");
    for v in values {
        writeln!(out, "{v}").unwrap();
    }
    out
}

/// Returns the dimension and the numbers following the header.
fn parse(text: &str, kind: &str) -> Result<(usize, Vec<f64>)> {
    let mut lines = text.lines().enumerate();
    let expected = format!("VQA-MODEL {kind} v1");
    match lines.next() {
        Some((_, l)) if l.trim_end() == expected => {}
        Some((_, l)) if l.starts_with("VQA-MODEL ") => {
            return Err(parse_err(0, format!("expected \"{expected}\", found \"{l}\"")))
        }
        _ => return Err(parse_err(0, "missing VQA-MODEL header")),
    }
    let dim = match lines.next() {
        Some((n, l)) => l.trim().parse::<usize>().map_err(|_| parse_err(n, "bad dimension line"))?,
        None => return Err(parse_err(1, "missing dimension line")),
    };
    let mut values = Vec::new();
    for (n, l) in lines {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        values.push(l.parse::<f64>().map_err(|_| parse_err(n, format!("bad number \"{l}\"")))?);
    }
    Ok((dim, values))
}

pub fn write_niqe(model: &MvgModel) -> String {
    render(
        NIQE_KIND,
        model.dim(),
        model.mean.iter().chain(&model.covariance).copied(),
    )
}

pub fn read_niqe(text: &str) -> Result<MvgModel> {
    let (dim, values) = parse(text, NIQE_KIND)?;
    if values.len() != dim + dim * dim {
        return Err(Error::Model(format!(
            "niqe model of dimension {dim} needs {} numbers, found {}",
            dim + dim * dim,
            values.len()
        )));
    }
    let model = MvgModel {
        mean: values[..dim].to_vec(),
        covariance: values[dim..].to_vec(),
    };
    model.validate()?;
    Ok(model)
}

pub fn write_brisque(model: &BrisqueRegressor) -> String {
    render(
        BRISQUE_KIND,
        model.feature_min.len(),
        model
            .weights
            .iter()
            .chain(&model.feature_min)
            .chain(&model.feature_max)
            .copied(),
    )
}

pub fn read_brisque(text: &str) -> Result<BrisqueRegressor> {
    let (dim, values) = parse(text, BRISQUE_KIND)?;
    if values.len() != 3 * dim + 1 {
        return Err(Error::Model(format!(
            "brisque model of dimension {dim} needs {} numbers, found {}",
            3 * dim + 1,
            values.len()
        )));
    }
    let model = BrisqueRegressor {
        weights: values[..dim + 1].to_vec(),
        feature_min: values[dim + 1..2 * dim + 1].to_vec(),
        feature_max: values[2 * dim + 1..].to_vec(),
    };
    model.validate()?;
    Ok(model)
}
