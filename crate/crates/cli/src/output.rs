//! Report formatting. Tables use fixed decimals; CSV and JSON carry the
//! shortest round-trip representation of every value.

use bkm_core::cases::{BenchmarkCase, Report};
use serde::Serialize;

pub const DEFAULT_DECIMALS: usize = 3;
pub const PRECISION_ENV: &str = "BKM_PRECISION";

/// Table decimals, from `BKM_PRECISION` when set.
pub fn table_decimals() -> Result<usize, String> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_DECIMALS),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(d) if d <= 17 => Ok(d),
            _ => Err(format!("{PRECISION_ENV} must be an integer from 0 to 17, got `{s}`")),
        },
    }
}

/// Fixed-point text with negative zero printed as zero.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn coordinate(v: f64) -> String {
    fixed(v, 2)
}

/// Right-aligned columns separated by two spaces.
pub fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(headers);
    out.push('\n');
    out.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

fn optional(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| fixed(x, decimals))
}

fn scientific(v: f64) -> String {
    format!("{v:.3e}")
}

fn summary_lines(report: &Report<f64>, decimals: usize) -> String {
    let s = &report.summary;
    let mut out = String::new();
    if let Some(avg) = s.avg_abs_rel_err_pct {
        out.push_str(&format!("avg |rel err|: {}%\n", fixed(avg, decimals)));
    }
    out.push_str(&format!("max |abs err|: {}\n", scientific(s.max_abs_err)));
    if let Some(c) = s.condition_estimate_drm {
        out.push_str(&format!("condition estimate (interpolation): {}\n", scientific(c)));
    }
    out.push_str(&format!("condition estimate (collocation): {}\n", scientific(s.condition_estimate_bkm)));
    out
}

pub fn run_table(case: &BenchmarkCase<f64>, report: &Report<f64>, decimals: usize) -> String {
    let headers: Vec<String> = ["x", "y", "exact", "computed", "rel err %"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                coordinate(r.point.x),
                coordinate(r.point.y),
                fixed(r.exact, decimals),
                fixed(r.computed, decimals),
                optional(r.rel_err_pct, decimals),
            ]
        })
        .collect();
    format!(
        "{} ({} boundary, {} interior knots)\n{}{}",
        case.title,
        report.summary.n_boundary,
        report.summary.n_interior,
        render_table(&headers, &rows),
        summary_lines(report, decimals)
    )
}

/// Reproduction of a published table: computed values beside the printed
/// comparison columns.
pub fn published_table(case: &BenchmarkCase<f64>, report: &Report<f64>, decimals: usize) -> String {
    let with_rel = case.name.is_nonlinear();
    let knots = report.summary.n_boundary + report.summary.n_interior;
    let mut headers: Vec<String> = vec!["x".into(), "y".into(), "Exact".into(), format!("BKM ({knots})")];
    if with_rel {
        headers.push("Relative error %".into());
    }
    let published: Vec<_> = case.published_columns.iter().filter(|c| c.label != "Exact").collect();
    headers.extend(published.iter().map(|c| format!("paper: {}", c.label)));
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![
                coordinate(r.point.x),
                coordinate(r.point.y),
                fixed(r.exact, decimals),
                fixed(r.computed, decimals),
            ];
            if with_rel {
                row.push(optional(r.rel_err_pct, decimals));
            }
            row.extend(published.iter().map(|c| c.values.get(i).map_or_else(|| "-".into(), |&v| fixed(v, decimals))));
            row
        })
        .collect();
    let mut out = format!("Table {}: {}\n{}", case.name.table(), case.title, render_table(&headers, &rows));
    if with_rel {
        if let Some(avg) = report.summary.avg_abs_rel_err_pct {
            out.push_str(&format!("avg |rel err|: {}%", fixed(avg, decimals)));
            if let Some(p) = case.name.published_average_rel_err_pct() {
                out.push_str(&format!(" (paper: {p}%)"));
            }
            out.push('\n');
        }
    }
    out
}

pub fn csv(report: &Report<f64>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "exact", "computed", "rel_err_pct"])?;
    for r in &report.rows {
        w.write_record([
            r.point.x.to_string(),
            r.point.y.to_string(),
            r.exact.to_string(),
            r.computed.to_string(),
            r.rel_err_pct.map_or_else(String::new, |v| v.to_string()),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Serialize)]
struct JsonRow {
    x: f64,
    y: f64,
    exact: f64,
    computed: f64,
    rel_err_pct: Option<f64>,
}

#[derive(Serialize)]
struct JsonSummary {
    avg_abs_rel_err_pct: Option<f64>,
    condition_estimate_drm: Option<f64>,
    condition_estimate_bkm: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    case: &'a str,
    rows: Vec<JsonRow>,
    summary: JsonSummary,
}

pub fn json(report: &Report<f64>) -> serde_json::Result<String> {
    let doc = JsonReport {
        case: report.case.as_str(),
        rows: report
            .rows
            .iter()
            .map(|r| JsonRow {
                x: r.point.x,
                y: r.point.y,
                exact: r.exact,
                computed: r.computed,
                rel_err_pct: r.rel_err_pct,
            })
            .collect(),
        summary: JsonSummary {
            avg_abs_rel_err_pct: report.summary.avg_abs_rel_err_pct,
            condition_estimate_drm: report.summary.condition_estimate_drm,
            condition_estimate_bkm: report.summary.condition_estimate_bkm,
        },
    };
    serde_json::to_string_pretty(&doc)
}
