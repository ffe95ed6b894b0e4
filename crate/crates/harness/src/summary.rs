//! Per-cell percentile summaries of study CSV files.
//!
//! Percentiles use linear interpolation between closest ranks: for sorted
//! values `v_0 ≤ … ≤ v_{m-1}` the `q`-quantile is read at fractional rank
//! `h = q(m-1)` as `v_⌊h⌋ + (h - ⌊h⌋)(v_⌊h⌋+1 - v_⌊h⌋)`. The median of
//! `1, 2, …, 100` is therefore 50.5.

use std::io::{Read, Write};

use anyhow::{bail, ensure, Context, Result};

use crate::config::StudyKind;
use crate::study::{format_float, StudyRow, CSV_HEADER, SCHEMA_VERSION};

/// `q`-quantile (`0 ≤ q ≤ 1`) by linear interpolation between closest ranks.
/// Returns `None` for an empty slice. NaNs sort last.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    Some(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
}

impl Band {
    pub fn of(values: &[f64]) -> Option<Self> {
        Some(Self { median: percentile(values, 0.5)?, p10: percentile(values, 0.1)?, p90: percentile(values, 0.9)? })
    }
}

/// Summary of one (study, n, infidelity) cell over its successful rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub study: StudyKind,
    pub n: usize,
    pub infidelity_target: Option<f64>,
    pub rows: usize,
    pub failed: usize,
    pub true_infidelity: Band,
    pub est_infidelity: Band,
    pub empirical_cost: Band,
    pub exact_cost_median: f64,
    pub predicted_cost_chi2_median: f64,
    pub predicted_cost_uniform_median: f64,
    pub p_coll_median: f64,
}

/// Groups rows by cell in order of first appearance. Estimates are the
/// bias-corrected ones.
pub fn summarize(rows: &[StudyRow]) -> Result<Vec<CellSummary>> {
    ensure!(!rows.is_empty(), "no rows to summarize");
    let mut keys: Vec<(StudyKind, usize, Option<f64>)> = Vec::new();
    for r in rows {
        let key = (r.study, r.n, r.infidelity_target);
        if !keys.iter().any(|k| same_cell(k, &key)) {
            keys.push(key);
        }
    }
    let mut out = Vec::new();
    for key in keys {
        let cell: Vec<&StudyRow> = rows.iter().filter(|r| same_cell(&(r.study, r.n, r.infidelity_target), &key)).collect();
        let ok: Vec<&StudyRow> = cell.iter().copied().filter(|r| r.is_ok()).collect();
        let failed = cell.len() - ok.len();
        if ok.is_empty() {
            eprintln!("cell {} n={} infidelity={:?}: all {failed} rows failed", key.0, key.1, key.2);
            continue;
        }
        let col = |f: fn(&StudyRow) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
        let med = |f: fn(&StudyRow) -> f64| percentile(&col(f), 0.5).expect("nonempty");
        out.push(CellSummary {
            study: key.0,
            n: key.1,
            infidelity_target: key.2,
            rows: ok.len(),
            failed,
            true_infidelity: Band::of(&col(|r| r.true_infidelity)).expect("nonempty"),
            est_infidelity: Band::of(&col(|r| r.est_infidelity_corrected)).expect("nonempty"),
            empirical_cost: Band::of(&col(|r| r.empirical_cost)).expect("nonempty"),
            exact_cost_median: med(|r| r.exact_cost),
            predicted_cost_chi2_median: med(|r| r.predicted_cost_chi2),
            predicted_cost_uniform_median: med(|r| r.predicted_cost_uniform),
            p_coll_median: med(|r| r.p_coll),
        });
    }
    ensure!(!out.is_empty(), "every row failed");
    Ok(out)
}

fn same_cell(a: &(StudyKind, usize, Option<f64>), b: &(StudyKind, usize, Option<f64>)) -> bool {
    a.0 == b.0 && a.1 == b.1 && a.2.map(f64::to_bits) == b.2.map(f64::to_bits)
}

pub const SUMMARY_HEADER: [&str; 19] = [
    "schema_version",
    "study",
    "n",
    "infidelity_target",
    "rows",
    "failed",
    "true_infidelity_median",
    "est_infidelity_median",
    "est_infidelity_p10",
    "est_infidelity_p90",
    "empirical_cost_median",
    "empirical_cost_p10",
    "empirical_cost_p90",
    "exact_cost_median",
    "predicted_cost_chi2_median",
    "predicted_cost_uniform_median",
    "p_coll_median",
    "true_infidelity_p10",
    "true_infidelity_p90",
];

pub fn write_summary<W: Write>(out: W, cells: &[CellSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for c in cells {
        let f = format_float;
        w.write_record([
            SCHEMA_VERSION.to_string(),
            c.study.name().to_string(),
            c.n.to_string(),
            c.infidelity_target.map(f).unwrap_or_default(),
            c.rows.to_string(),
            c.failed.to_string(),
            f(c.true_infidelity.median),
            f(c.est_infidelity.median),
            f(c.est_infidelity.p10),
            f(c.est_infidelity.p90),
            f(c.empirical_cost.median),
            f(c.empirical_cost.p10),
            f(c.empirical_cost.p90),
            f(c.exact_cost_median),
            f(c.predicted_cost_chi2_median),
            f(c.predicted_cost_uniform_median),
            f(c.p_coll_median),
            f(c.true_infidelity.p10),
            f(c.true_infidelity.p90),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a study CSV written by [`crate::study::write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<StudyRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    ensure!(header == CSV_HEADER, "unexpected CSV header {header:?}");
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).with_context(|| format!("line {line}: missing column {}", CSV_HEADER[k]));
        let num = |k: usize| -> Result<f64> {
            field(k)?.parse::<f64>().with_context(|| format!("line {line}: bad {}", CSV_HEADER[k]))
        };
        let version: u32 = field(0)?.parse().with_context(|| format!("line {line}: bad schema_version"))?;
        if version != SCHEMA_VERSION {
            bail!("line {line}: schema version {version}, expected {SCHEMA_VERSION}");
        }
        let target = field(4)?;
        rows.push(StudyRow {
            study: field(1)?.parse()?,
            n: field(2)?.parse().with_context(|| format!("line {line}: bad n"))?,
            circuit: field(3)?.parse().with_context(|| format!("line {line}: bad circuit"))?,
            infidelity_target: if target.is_empty() { None } else { Some(num(4)?) },
            seed: field(5)?.parse().with_context(|| format!("line {line}: bad seed"))?,
            true_infidelity: num(6)?,
            est_infidelity_simple: num(7)?,
            est_infidelity_corrected: num(8)?,
            predicted_var: num(9)?,
            var_exact: num(10)?,
            var_plugin: num(11)?,
            empirical_cost: num(12)?,
            exact_cost: num(13)?,
            predicted_cost_chi2: num(14)?,
            predicted_cost_uniform: num(15)?,
            p_coll: num(16)?,
            chi2: num(17)?,
            h2: num(18)?,
            status: field(19)?.to_string(),
        });
    }
    ensure!(!rows.is_empty(), "CSV has no data rows");
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentile_convention() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(percentile(&v, 0.5), Some(50.5));
        assert!((percentile(&v, 0.1).unwrap() - 10.9).abs() < 1e-12);
        assert_eq!(percentile(&[3.0], 0.9), Some(3.0));
        assert_eq!(percentile(&[], 0.5), None);
        assert_eq!(percentile(&[4.0, 1.0, 2.0], 0.0), Some(1.0));
    }

    #[test]
    fn single_value_band_is_degenerate() {
        let b = Band::of(&[0.25]).unwrap();
        assert_eq!((b.median, b.p10, b.p90), (0.25, 0.25, 0.25));
    }
}
