//! CSV rendering of sweep records and correlation reports.

use crate::error::{Error, Result};

use super::metrics::{Metric, Scores};
use super::sweep::{AxisKind, CorrelationReport, SweepRecord};

pub const RECORDS_HEADER: [&str; 9] = [
    "input",
    "axis_kind",
    "axis_value",
    "psnr_db",
    "ssim",
    "blockiness_db",
    "blur",
    "niqe",
    "brisque",
];

pub const CORRELATIONS_HEADER: [&str; 4] = ["input", "metric", "pearson_r", "n_points"];

/// Renders `x` with six significant digits (fixed notation for moderate
/// magnitudes, scientific otherwise).
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return format!("{:.*}", (DIGITS - 1) as usize, 0.0);
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..DIGITS).contains(&exp) {
        return format!("{:.*e}", (DIGITS - 1) as usize, x);
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit (9.999996 -> 10.00000)
    let carried = s.parse::<f64>().map_or(false, |v| v.abs() >= 10f64.powi(exp + 1));
    if carried && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else if carried {
        format!("{:.*e}", (DIGITS - 1) as usize, x)
    } else {
        s
    }
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Sorted by (input, axis value).
pub fn sorted_records(records: &[SweepRecord]) -> Vec<&SweepRecord> {
    let mut v: Vec<&SweepRecord> = records.iter().collect();
    v.sort_by(|a, b| a.input.cmp(&b.input).then(a.axis_value.total_cmp(&b.axis_value)));
    v
}

pub fn records_csv(records: &[SweepRecord]) -> Vec<u8> {
    csv_bytes(
        &RECORDS_HEADER,
        sorted_records(records).into_iter().map(|r| {
            let mut row = vec![r.input.clone(), r.axis_kind.name().to_string(), fmt_sig(r.axis_value)];
            row.extend(Metric::ALL.iter().map(|&m| fmt_sig(r.scores.get(m))));
            row
        }),
    )
}

pub fn correlations_csv(report: &CorrelationReport) -> Vec<u8> {
    let mut rows: Vec<_> = report.rows.iter().collect();
    rows.sort_by(|a, b| a.input.cmp(&b.input).then(a.metric.cmp(&b.metric)));
    csv_bytes(
        &CORRELATIONS_HEADER,
        rows.into_iter().map(|r| {
            vec![
                r.input.clone(),
                r.metric.name().to_string(),
                r.pearson_r.map_or_else(|| "n/a".to_string(), fmt_sig),
                r.n_points.to_string(),
            ]
        }),
    )
}

/// `records.csv` and `correlations.csv` contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOutput {
    pub records: Vec<u8>,
    pub correlations: Vec<u8>,
}

pub fn emit_csv(records: &[SweepRecord], report: &CorrelationReport) -> Result<CsvOutput> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records to write".into()));
    }
    Ok(CsvOutput {
        records: records_csv(records),
        correlations: correlations_csv(report),
    })
}

/// Parses `records.csv` contents back into records.
pub fn parse_records_csv(bytes: &[u8]) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let header = rdr.headers().map_err(|e| Error::Parse { offset: 0, message: e.to_string() })?;
    if header.iter().ne(RECORDS_HEADER.iter().copied()) {
        return Err(Error::Parse {
            offset: 0,
            message: "unexpected records header".into(),
        });
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse { offset: line + 1, message: e.to_string() })?;
        let num = |k: usize| -> Result<f64> {
            rec[k].parse().map_err(|_| Error::Parse {
                offset: line + 1,
                message: format!("bad number \"{}\"", &rec[k]),
            })
        };
        let kind: AxisKind = rec[1].parse()?;
        out.push(SweepRecord {
            input: rec[0].to_string(),
            axis_kind: kind,
            axis_value: num(2)?,
            scores: Scores {
                psnr: num(3)?,
                ssim: num(4)?,
                blockiness: num(5)?,
                blur: num(6)?,
                niqe: num(7)?,
                brisque: num(8)?,
            },
        });
    }
    Ok(out)
}
