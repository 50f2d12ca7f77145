//! Plot-ready series files: one whitespace-separated block per series,
//! blocks separated by two blank lines (gnuplot `index` layout).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::config::XValue;
use crate::sweep::{temp_beside, SweepRecord};

#[derive(Debug, Error)]
pub enum PlotDataError {
    #[error("no records to plot")]
    Empty,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// `(ξ, concurrence, error)` rows.
pub type Points = Vec<(f64, f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// In ascending `ξ`.
    pub points: Points,
}

/// Groups records into one series per `(σ/m, x)` in order of first
/// appearance. The delta rows of all widths share one series, since the
/// limit does not depend on the width; where widths disagree the lowest
/// concurrence and largest error are kept. Failed rows are skipped.
pub fn build_series(records: &[SweepRecord]) -> Vec<Series> {
    let mut series: Vec<(String, Points)> = Vec::new();
    for r in records {
        let label = match r.x_or_delta {
            XValue::Delta => "x=delta".to_owned(),
            x => format!("sigma_over_m={} x={x}", r.sigma_over_m),
        };
        let k = match series.iter().position(|(l, _)| *l == label) {
            Some(k) => k,
            None => {
                series.push((label, Vec::new()));
                series.len() - 1
            }
        };
        let (Some(c), Some(e)) = (r.concurrence, r.error_bound) else { continue };
        let points = &mut series[k].1;
        match points.iter_mut().find(|p| p.0 == r.xi) {
            Some(p) => {
                p.1 = p.1.min(c);
                p.2 = p.2.max(e);
            }
            None => points.push((r.xi, c, e)),
        }
    }
    series
        .into_iter()
        .map(|(label, mut points)| {
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series { label, points }
        })
        .collect()
}

pub fn render(series: &[Series]) -> String {
    let mut out = String::new();
    for (k, s) in series.iter().enumerate() {
        if k > 0 {
            out.push_str("\n\n");
        }
        writeln!(out, "# {}", s.label).unwrap();
        writeln!(out, "# xi concurrence error").unwrap();
        for (xi, c, e) in &s.points {
            writeln!(out, "{xi} {c} {e:e}").unwrap();
        }
    }
    out
}

/// Writes the series of `records` to `path`. Nothing is created when
/// `records` is empty.
pub fn emit_plot_data(records: &[SweepRecord], path: &Path) -> Result<Vec<Series>, PlotDataError> {
    if records.is_empty() {
        return Err(PlotDataError::Empty);
    }
    let series = build_series(records);
    let mut tmp = temp_beside(path)?;
    tmp.write_all(render(&series).as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(series)
}
