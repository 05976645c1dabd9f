use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::CSV_HEADER;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub family: String,
    pub d: usize,
    pub k_or_n: i64,
    pub alg: String,
    pub seed: u64,
    pub alg_count: u64,
    pub opt: u64,
    pub ratio_num: u64,
    pub ratio_den: u64,
}

impl CsvRow {
    pub fn ratio(&self) -> f64 {
        self.ratio_num as f64 / self.ratio_den as f64
    }
}

fn parse_row(line: &str) -> std::result::Result<CsvRow, String> {
    let f: Vec<&str> = line.split(',').map(str::trim).collect();
    if f.len() != 9 {
        return Err(format!("expected 9 fields, found {}", f.len()));
    }
    fn num<T: std::str::FromStr>(s: &str, name: &str) -> std::result::Result<T, String> {
        s.parse().map_err(|_| format!("bad {name} {s:?}"))
    }
    let row = CsvRow {
        family: f[0].to_string(),
        d: num(f[1], "d")?,
        k_or_n: num(f[2], "K_or_n")?,
        alg: f[3].to_string(),
        seed: num(f[4], "seed")?,
        alg_count: num(f[5], "alg_count")?,
        opt: num(f[6], "opt")?,
        ratio_num: num(f[7], "ratio_num")?,
        ratio_den: num(f[8], "ratio_den")?,
    };
    if row.family.is_empty() || row.alg.is_empty() {
        return Err("empty family or alg".into());
    }
    if row.ratio_den == 0 {
        return Err("zero ratio denominator".into());
    }
    if row.ratio_num as u128 * row.opt as u128 != row.alg_count as u128 * row.ratio_den as u128 {
        return Err("ratio does not equal alg_count/opt".into());
    }
    Ok(row)
}

/// Parses CSV text; header lines, `#` comments and blank lines are skipped. On error the
/// message lists every offending line.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == CSV_HEADER {
            continue;
        }
        match parse_row(line) {
            Ok(r) => rows.push(r),
            Err(e) => bad.push((i + 1, e)),
        }
    }
    match bad.first() {
        None => Ok(rows),
        Some(&(first, _)) => Err(Error::Parse {
            line: first,
            msg: bad
                .iter()
                .map(|(l, e)| format!("line {l}: {e}"))
                .collect::<Vec<_>>()
                .join("; "),
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub alg: String,
    pub family: String,
    pub d: usize,
    pub runs: usize,
    pub worst: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoint {
    pub alg: String,
    pub family: String,
    pub d: usize,
    pub mean: f64,
}

/// Worst and mean ratio per (algorithm, family, d), sorted by that key.
pub fn summarize(rows: &[CsvRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.alg.clone(), r.family.clone(), r.d))
            .or_default()
            .push(r.ratio());
    }
    groups
        .into_iter()
        .map(|((alg, family, d), v)| SummaryRow {
            alg,
            family,
            d,
            runs: v.len(),
            worst: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: v.iter().sum::<f64>() / v.len() as f64,
        })
        .collect()
}

/// Mean ratio against d for every (algorithm, family).
pub fn series_by_d(summary: &[SummaryRow]) -> Vec<SeriesPoint> {
    summary
        .iter()
        .map(|s| SeriesPoint {
            alg: s.alg.clone(),
            family: s.family.clone(),
            d: s.d,
            mean: s.mean,
        })
        .collect()
}

/// Fixed-width summary table followed by the mean-ratio-versus-d series.
pub fn render_report(rows: &[CsvRow]) -> String {
    let summary = summarize(rows);
    let mut out = format!(
        "{:<10} {:<12} {:>3} {:>6} {:>10} {:>10}\n",
        "alg", "family", "d", "runs", "worst", "mean"
    );
    for s in &summary {
        let _ = writeln!(
            out,
            "{:<10} {:<12} {:>3} {:>6} {:>10.4} {:>10.4}",
            s.alg, s.family, s.d, s.runs, s.worst, s.mean
        );
    }
    let mut series: BTreeMap<(String, String), Vec<SeriesPoint>> = BTreeMap::new();
    for p in series_by_d(&summary) {
        series.entry((p.alg.clone(), p.family.clone())).or_default().push(p);
    }
    if !series.is_empty() {
        out.push_str("\nmean ratio by d\n");
    }
    for ((alg, family), pts) in series {
        let body: Vec<String> = pts.iter().map(|p| format!("d={}:{:.4}", p.d, p.mean)).collect();
        let _ = writeln!(out, "{alg}/{family}: {}", body.join(" "));
    }
    out
}
