use std::io::Write;

use crate::curve::CurvePoint;
use crate::error::SimResult;
use crate::run::{MethodMetrics, ScenarioResult};

/// Writes one row per (hypothesis, method). Empty means are written as `NA`.
pub fn write_result_csv<W: Write>(out: W, r: &ScenarioResult) -> SimResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "hypothesis",
        "method",
        "power",
        "mean_bound_finite",
        "mean_bound_rejected",
        "pct_finite",
    ])?;
    for (method, m) in [("ISCI", &r.isci), ("CSCI", &r.csci)] {
        write_method(&mut w, &r.labels, method, m)?;
    }
    w.flush()?;
    Ok(())
}

fn write_method<W: Write>(
    w: &mut csv::Writer<W>,
    labels: &[String],
    method: &str,
    m: &MethodMetrics,
) -> SimResult<()> {
    for (j, label) in labels.iter().enumerate() {
        w.write_record([
            label.clone(),
            method.to_string(),
            num(m.power[j]),
            num(m.mean_bound_finite[j]),
            num(m.mean_bound_rejected[j]),
            num(m.pct_finite[j]),
        ])?;
    }
    Ok(())
}

pub fn write_curve_csv<W: Write>(out: W, points: &[CurvePoint]) -> SimResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "q",
        "mean_bound_rejected",
        "mean_bound_rejected_se",
        "mean_rejections",
        "mean_rejections_se",
    ])?;
    for p in points {
        w.write_record([
            num(p.q),
            num(p.mean_bound_rejected),
            num(p.mean_bound_rejected_se),
            num(p.mean_rejections),
            num(p.mean_rejections_se),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "NA".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}
