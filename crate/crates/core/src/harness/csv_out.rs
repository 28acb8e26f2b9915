use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use super::{AggregateStats, ArmStats, CheckpointRow, HarnessError};
use crate::learner::{RunTrace, StopReason};

const HEADER: [&str; 10] = [
    "arm",
    "cumulative_cost",
    "cycle",
    "bias_mean",
    "bias_median",
    "bias_lo",
    "bias_hi",
    "score_median",
    "score_lo",
    "score_hi",
];

const DIGITS: usize = 12;

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().expect("formatted float parses")
}

#[derive(Deserialize)]
struct Row {
    arm: String,
    cumulative_cost: u64,
    cycle: usize,
    bias_mean: Option<f64>,
    bias_median: Option<f64>,
    bias_lo: Option<f64>,
    bias_hi: Option<f64>,
    score_median: Option<f64>,
    score_lo: Option<f64>,
    score_hi: Option<f64>,
}

fn rounded(r: &CheckpointRow) -> CheckpointRow {
    let f = |v: Option<f64>| v.map(|x| round_sig(x, DIGITS));
    CheckpointRow {
        cumulative_cost: r.cumulative_cost,
        cycle: r.cycle,
        bias_mean: f(r.bias_mean),
        bias_median: f(r.bias_median),
        bias_lo: f(r.bias_lo),
        bias_hi: f(r.bias_hi),
        score_median: f(r.score_median),
        score_lo: f(r.score_lo),
        score_hi: f(r.score_hi),
    }
}

/// Header, then one row per (arm, checkpoint). Values carry 12 significant
/// digits; missing values are empty fields.
pub fn emit_csv<W: Write>(stats: &AggregateStats, out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER)?;
    for arm in &stats.arms {
        for r in &arm.rows {
            let r = rounded(r);
            let f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                arm.label.clone(),
                r.cumulative_cost.to_string(),
                r.cycle.to_string(),
                f(r.bias_mean),
                f(r.bias_median),
                f(r.bias_lo),
                f(r.bias_hi),
                f(r.score_median),
                f(r.score_lo),
                f(r.score_hi),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv(stats: &AggregateStats, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    emit_csv(stats, std::io::BufWriter::new(file))
}

/// Reads back what [`emit_csv`] wrote; consecutive rows with the same label
/// form one arm.
pub fn parse_csv<R: Read>(input: R) -> Result<AggregateStats, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(HEADER) {
        return Err(HarnessError::Parse { what: "csv header".into(), message: format!("{:?}", r.headers()?) });
    }
    let mut stats = AggregateStats::default();
    for row in r.deserialize() {
        let Row {
            arm,
            cumulative_cost,
            cycle,
            bias_mean,
            bias_median,
            bias_lo,
            bias_hi,
            score_median,
            score_lo,
            score_hi,
        } = row?;
        let row = CheckpointRow {
            cumulative_cost,
            cycle,
            bias_mean,
            bias_median,
            bias_lo,
            bias_hi,
            score_median,
            score_lo,
            score_hi,
        };
        match stats.arms.last_mut() {
            Some(last) if last.label == arm => last.rows.push(row),
            _ => stats.arms.push(ArmStats { label: arm, rows: vec![row] }),
        }
    }
    Ok(stats)
}

/// Per-cycle table of a single run.
pub fn trace_csv<W: Write>(trace: &RunTrace, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cycle", "cumulative_cost", "k", "bias", "score", "gap", "stop", "final_m"])?;
    let f = |v: Option<f64>| v.map(|x| round_sig(x, DIGITS).to_string()).unwrap_or_default();
    for rec in &trace.records {
        let inner = rec.inner;
        let stop = inner.map(|i| match i.stop {
            StopReason::Scheduled => "scheduled",
            StopReason::Accuracy => "accuracy",
            StopReason::Budget => "budget",
        });
        w.write_record([
            rec.cycle.to_string(),
            rec.cost.to_string(),
            inner.map(|i| i.steps.to_string()).unwrap_or_default(),
            f(rec.bias),
            f(rec.score),
            f(inner.and_then(|i| i.gap)),
            stop.unwrap_or_default().to_string(),
            f(inner.and_then(|i| i.final_m)),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
