//! Aggregate tables over batch records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use growcut::{Error, Result};

use crate::experiment::{RunRecord, CSV_COLUMNS};

/// Columns summarized per method, in output order.
pub const SUMMARY_METRICS: [&str; 11] = [
    "dsc",
    "sensitivity",
    "specificity",
    "bac",
    "err_area",
    "err_perimeter",
    "err_form_factor",
    "err_solidity",
    "err_feret_x",
    "err_feret_y",
    "ssp_pvalue",
];

/// Header of the signed-rank aggregate table.
pub const WILCOXON_COLUMNS: [&str; 7] = [
    "Techniques",
    "Average p-value",
    "#Reject Null Hypotheses",
    "#Not Reject Null Hypotheses",
    "Min p-value",
    "Max p Value",
    "Standard Deviation",
];

/// One parsed line of `records.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub id: String,
    pub method: String,
    pub values: BTreeMap<String, f64>,
    pub ssp_reject: bool,
}

impl RecordRow {
    fn from_fields(header: &[String], fields: &[String]) -> Result<Self> {
        let get = |name: &str| -> Result<&str> {
            header
                .iter()
                .position(|h| h == name)
                .and_then(|i| fields.get(i))
                .map(String::as_str)
                .ok_or_else(|| Error::InvalidParameter(format!("records: missing column {name}")))
        };
        let mut values = BTreeMap::new();
        for (h, f) in header.iter().zip(fields) {
            if matches!(h.as_str(), "id" | "method" | "ssp_reject") {
                continue;
            }
            let v = f
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("records: {h} = {f:?} is not a number")))?;
            values.insert(h.clone(), v);
        }
        let ssp_reject = get("ssp_reject")?
            .parse()
            .map_err(|_| Error::InvalidParameter("records: ssp_reject must be true or false".into()))?;
        Ok(RecordRow {
            id: get("id")?.to_string(),
            method: get("method")?.to_string(),
            values,
            ssp_reject,
        })
    }
}

impl From<&RunRecord> for RecordRow {
    fn from(r: &RunRecord) -> Self {
        let header: Vec<String> = CSV_COLUMNS.iter().map(|c| c.to_string()).collect();
        RecordRow::from_fields(&header, &r.csv_row()).expect("csv row of a run record parses")
    }
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<RecordRow>> {
    let path = path.as_ref();
    let unreadable = |reason: String| Error::UnreadableFile {
        path: path.to_path_buf(),
        reason,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| unreadable(e.to_string()))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| unreadable(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| unreadable(e.to_string()))?;
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        rows.push(RecordRow::from_fields(&header, &fields)?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub method: String,
    pub metric: String,
    pub n: usize,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotRow {
    pub method: String,
    pub metric: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonAggregate {
    pub method: String,
    pub mean_p: f64,
    pub rejected: usize,
    pub not_rejected: usize,
    pub min_p: f64,
    pub max_p: f64,
    pub std_p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub metrics: Vec<MetricSummary>,
    pub boxplots: Vec<BoxplotRow>,
    pub wilcoxon: Vec<WilcoxonAggregate>,
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

/// Linear-interpolation quantile of sorted data (`h = (n - 1) p`).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let (lo, frac) = (h.floor() as usize, h - h.floor());
    match sorted.get(lo + 1) {
        Some(hi) => sorted[lo] + frac * (hi - sorted[lo]),
        None => sorted[lo],
    }
}

/// Per-method statistics. Methods appear in name order; metrics missing from
/// every row of a method are skipped.
pub fn summarize(rows: &[RecordRow]) -> Result<Summary> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("summarize: no records".into()));
    }
    let mut by_method: BTreeMap<&str, Vec<&RecordRow>> = BTreeMap::new();
    for r in rows {
        by_method.entry(&r.method).or_default().push(r);
    }
    let mut out = Summary {
        metrics: Vec::new(),
        boxplots: Vec::new(),
        wilcoxon: Vec::new(),
    };
    for (method, rs) in by_method {
        for metric in SUMMARY_METRICS {
            let mut v: Vec<f64> = rs.iter().filter_map(|r| r.values.get(metric).copied()).collect();
            if v.is_empty() {
                continue;
            }
            v.sort_by(f64::total_cmp);
            let (min, max) = (v[0], v[v.len() - 1]);
            out.metrics.push(MetricSummary {
                method: method.to_string(),
                metric: metric.to_string(),
                n: v.len(),
                mean: mean(&v),
                max,
                min,
                std_dev: sample_std(&v),
            });
            out.boxplots.push(BoxplotRow {
                method: method.to_string(),
                metric: metric.to_string(),
                min,
                q1: quantile(&v, 0.25),
                median: quantile(&v, 0.5),
                q3: quantile(&v, 0.75),
                max,
            });
        }
        let p: Vec<f64> = rs.iter().filter_map(|r| r.values.get("ssp_pvalue").copied()).collect();
        if !p.is_empty() {
            let rejected = rs.iter().filter(|r| r.ssp_reject).count();
            out.wilcoxon.push(WilcoxonAggregate {
                method: method.to_string(),
                mean_p: mean(&p),
                rejected,
                not_rejected: rs.len() - rejected,
                min_p: p.iter().copied().fold(f64::INFINITY, f64::min),
                max_p: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                std_p: sample_std(&p),
            });
        }
    }
    Ok(out)
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn write_csv<const N: usize>(path: &Path, header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> Result<()> {
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

impl Summary {
    /// Writes `summary.csv`, `boxplot.csv`, `wilcoxon.csv` and a Markdown
    /// rendering of all three as `summary.md`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        write_csv(
            &dir.join("summary.csv"),
            ["method", "metric", "n", "mean", "max", "min", "std_dev"],
            self.metrics.iter().map(|m| {
                [
                    m.method.clone(),
                    m.metric.clone(),
                    m.n.to_string(),
                    f6(m.mean),
                    f6(m.max),
                    f6(m.min),
                    f6(m.std_dev),
                ]
            }),
        )?;
        write_csv(
            &dir.join("boxplot.csv"),
            ["method", "metric", "min", "q1", "median", "q3", "max"],
            self.boxplots.iter().map(|b| {
                [
                    b.method.clone(),
                    b.metric.clone(),
                    f6(b.min),
                    f6(b.q1),
                    f6(b.median),
                    f6(b.q3),
                    f6(b.max),
                ]
            }),
        )?;
        write_csv(
            &dir.join("wilcoxon.csv"),
            WILCOXON_COLUMNS,
            self.wilcoxon.iter().map(|w| {
                [
                    w.method.clone(),
                    f6(w.mean_p),
                    w.rejected.to_string(),
                    w.not_rejected.to_string(),
                    format!("{:.2E}", w.min_p),
                    f6(w.max_p),
                    f6(w.std_p),
                ]
            }),
        )?;
        std::fs::write(dir.join("summary.md"), self.markdown())?;
        Ok(())
    }

    pub fn markdown(&self) -> String {
        let mut s = String::from("| Method | Metric | Average | Max | Min | Std. Dev. |\n|---|---|---|---|---|---|\n");
        for m in &self.metrics {
            let _ = writeln!(
                s,
                "| {} | {} | {:.3} | {:.3} | {:.3} | {:.3} |",
                m.method, m.metric, m.mean, m.max, m.min, m.std_dev
            );
        }
        s.push('\n');
        let _ = writeln!(s, "| {} |", WILCOXON_COLUMNS.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(WILCOXON_COLUMNS.len()));
        for w in &self.wilcoxon {
            let _ = writeln!(
                s,
                "| {} | {:.4} | {} | {} | {:.2E} | {:.4} | {:.4} |",
                w.method, w.mean_p, w.rejected, w.not_rejected, w.min_p, w.max_p, w.std_p
            );
        }
        s
    }
}
