//! Height-range scans of the defect sum with deterministic parallel
//! top-k reduction and a resumable checkpoint.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use f1curve_core::arith::{defect_sum, Rat};
use f1curve_core::error::Error as CoreError;

use crate::output::{sig12, Format};

/// Configuration of one scan.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub height_min: u64,
    pub height_max: u64,
    pub top_k: usize,
    pub format: Format,
    pub workers: usize,
    pub output: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl ScanConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.height_min < 2 {
            bail!("height range starts at 2 (height 1 has only exceptional numbers)");
        }
        if self.height_min > self.height_max {
            bail!(
                "empty range: min {} exceeds max {}",
                self.height_min,
                self.height_max
            );
        }
        if self.top_k == 0 {
            bail!("top-k must be at least 1");
        }
        Ok(())
    }
}

/// One scanned rational with its defect data. Ordering: dominant defect
/// sum first, ties by (numerator, denominator) lexicographic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: String,
    pub b: String,
    pub s: f64,
    pub numerator: String,
    pub degree: String,
}

fn row_key(row: &ScanRow) -> (std::cmp::Reverse<OrderedF64>, BigInt, BigInt) {
    (
        std::cmp::Reverse(OrderedF64(row.s)),
        row.a.parse().expect("row numerator"),
        row.b.parse().expect("row denominator"),
    )
}

/// Total order on the finite defect values.
#[derive(Debug, Clone, Copy, PartialEq)]
struct OrderedF64(f64);

impl Eq for OrderedF64 {}

impl PartialOrd for OrderedF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn merge_topk(mut left: Vec<ScanRow>, mut right: Vec<ScanRow>, k: usize) -> Vec<ScanRow> {
    left.append(&mut right);
    left.sort_by_key(row_key);
    left.truncate(k);
    left
}

/// All reduced q with height exactly `h`: `±h/b` and `±b/h` for
/// `1 <= b < h` coprime to `h`.
fn rationals_of_height(h: u64) -> Vec<Rat> {
    let mut out = Vec::new();
    for b in 1..h {
        if num_integer::gcd(b, h) != 1 {
            continue;
        }
        let (h, b) = (h as i64, b as i64);
        for (a, d) in [(h, b), (-h, b), (b, h), (-b, h)] {
            out.push(Rat::from_i64(a, d).expect("nonzero"));
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    height_min: u64,
    height_max: u64,
    top_k: usize,
    last_height: u64,
    rows: Vec<ScanRow>,
    skipped: u64,
}

/// Outcome of a scan: rows plus how many rationals were skipped for
/// exceeding magnitude limits.
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    pub skipped: u64,
}

fn scan_one(q: &Rat) -> Result<ScanRow, CoreError> {
    let d = defect_sum(q)?;
    Ok(ScanRow {
        a: q.numer().to_string(),
        b: q.denom().to_string(),
        s: d.value,
        numerator: d.numerator.to_string(),
        degree: d.degree.to_string(),
    })
}

const CHECKPOINT_CHUNK: u64 = 256;

/// Runs the scan. Heights are processed in fixed chunks; inside a chunk
/// the heights are scanned in parallel and reduced with an associative
/// top-k merge, so the outcome is byte-identical for every worker count.
pub fn run_scan(config: &ScanConfig) -> anyhow::Result<ScanOutcome> {
    config.validate()?;

    let mut best: Vec<ScanRow> = Vec::new();
    let mut skipped: u64 = 0;
    let mut start = config.height_min;

    if let Some(path) = &config.checkpoint {
        if path.exists() {
            let raw = fs::read_to_string(path)
                .with_context(|| format!("reading checkpoint {}", path.display()))?;
            let ck: Checkpoint = serde_json::from_str(&raw)
                .with_context(|| format!("parsing checkpoint {}", path.display()))?;
            if ck.height_min != config.height_min
                || ck.height_max != config.height_max
                || ck.top_k != config.top_k
            {
                bail!(
                    "checkpoint {} was written for a different scan configuration",
                    path.display()
                );
            }
            best = ck.rows;
            skipped = ck.skipped;
            start = ck.last_height + 1;
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .context("building worker pool")?;

    let mut h = start;
    while h <= config.height_max {
        let chunk_end = (h + CHECKPOINT_CHUNK - 1).min(config.height_max);
        let (chunk_best, chunk_skipped) = pool.install(|| {
            (h..=chunk_end)
                .into_par_iter()
                .map(|height| {
                    let mut local: Vec<ScanRow> = Vec::new();
                    let mut local_skipped = 0u64;
                    for q in rationals_of_height(height) {
                        match scan_one(&q) {
                            Ok(row) => local.push(row),
                            Err(CoreError::MagnitudeLimit(_)) => local_skipped += 1,
                            Err(e) => panic!("scan failed at {q}: {e}"),
                        }
                    }
                    local.sort_by_key(row_key);
                    local.truncate(config.top_k);
                    (local, local_skipped)
                })
                .reduce(
                    || (Vec::new(), 0u64),
                    |(la, sa), (lb, sb)| (merge_topk(la, lb, config.top_k), sa + sb),
                )
        });
        best = merge_topk(best, chunk_best, config.top_k);
        skipped += chunk_skipped;
        if let Some(path) = &config.checkpoint {
            let ck = Checkpoint {
                height_min: config.height_min,
                height_max: config.height_max,
                top_k: config.top_k,
                last_height: chunk_end,
                rows: best.clone(),
                skipped,
            };
            fs::write(path, serde_json::to_string_pretty(&ck)?)
                .with_context(|| format!("writing checkpoint {}", path.display()))?;
        }
        h = chunk_end + 1;
    }

    Ok(ScanOutcome { rows: best, skipped })
}

/// Renders a scan outcome in the chosen format.
pub fn render(outcome: &ScanOutcome, config: &ScanConfig) -> String {
    let mut rows = crate::output::Rows::new(&["rank", "q", "s", "numerator", "degree"]);
    for (i, row) in outcome.rows.iter().enumerate() {
        rows.push(vec![
            (i + 1).to_string(),
            format!("{}/{}", row.a, row.b),
            sig12(row.s),
            row.numerator.clone(),
            row.degree.clone(),
        ]);
    }
    match config.format {
        Format::Table => {
            let mut out = rows.to_table();
            out.push_str(&format!("skipped: {}\n", outcome.skipped));
            out
        }
        Format::Csv => rows.to_csv(),
        Format::Json => {
            let value = serde_json::json!({
                "height_min": config.height_min,
                "height_max": config.height_max,
                "top_k": config.top_k,
                "skipped": outcome.skipped,
                "rows": rows.to_json_rows(),
            });
            crate::output::json_to_string(&value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_of_height_two() {
        let qs = rationals_of_height(2);
        let shown: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
        assert_eq!(shown, vec!["2/1", "-2/1", "1/2", "-1/2"]);
    }

    #[test]
    fn merge_is_associative_on_samples() {
        let mk = |a: i64, s: f64| ScanRow {
            a: a.to_string(),
            b: "1".into(),
            s,
            numerator: "0".into(),
            degree: "2^1".into(),
        };
        let x = vec![mk(2, 0.5), mk(3, 0.4)];
        let y = vec![mk(5, 0.45)];
        let z = vec![mk(7, 0.6)];
        let k = 2;
        let left = merge_topk(merge_topk(x.clone(), y.clone(), k), z.clone(), k);
        let right = merge_topk(x, merge_topk(y, z, k), k);
        let key = |rows: &Vec<ScanRow>| -> Vec<String> {
            rows.iter().map(|r| format!("{}:{}", r.a, r.s)).collect()
        };
        assert_eq!(key(&left), key(&right));
    }

    #[test]
    fn scan_height_two_matches_closed_form() {
        let config = ScanConfig {
            height_min: 2,
            height_max: 2,
            top_k: 10,
            format: Format::Table,
            workers: 1,
            output: None,
            checkpoint: None,
        };
        let outcome = run_scan(&config).unwrap();
        assert_eq!(outcome.rows.len(), 4);
        let expected = (2f64.ln() - 1.0) / 2f64.ln();
        for row in &outcome.rows {
            assert!((row.s - expected).abs() < 1e-12, "{row:?}");
        }
    }
}
