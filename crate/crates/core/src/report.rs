//! Machine-readable exports (CSV, JSON lines) and plain-text tables of
//! experiment results.
//!
//! Every CSV starts with a `# smtwt-<kind> v<version>` comment line so
//! readers can tell the files apart and detect schema changes.

use crate::analysis::aggregate;
use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::search::{RunRecord, RunStats};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

pub const STATS_HEADER: &str = "# smtwt-stats v1";
pub const RUNS_HEADER: &str = "# smtwt-runs v1";
pub const OPTIMA_HEADER: &str = "# smtwt-optima v1";

fn to_csv<S: Serialize>(header: &str, rows: impl IntoIterator<Item = S>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let body = String::from_utf8(bytes).expect("csv output is utf-8");
    Ok(format!("{header}\n{body}"))
}

fn from_csv<S: for<'de> Deserialize<'de>>(header: &str, text: &str) -> Result<Vec<S>> {
    let first = text.lines().next().unwrap_or_default().trim();
    if first != header {
        return Err(Error::Parse(format!("expected {header:?} as first line, got {first:?}")));
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_stats_csv<T: Scalar>(stats: &[RunStats<T>]) -> Result<String> {
    to_csv(STATS_HEADER, stats)
}

pub fn read_stats_csv<T: Scalar>(text: &str) -> Result<Vec<RunStats<T>>> {
    from_csv(STATS_HEADER, text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RunRow<T> {
    pub instance: String,
    pub run_index: usize,
    pub final_cost: T,
    pub evaluations: u64,
    pub iterations: u64,
}

/// Columns `instance,run_index,final_cost,evaluations,iterations`.
pub fn write_runs_csv<T: Scalar>(instance: &str, records: &[RunRecord<T>]) -> Result<String> {
    to_csv(
        RUNS_HEADER,
        records.iter().map(|r| RunRow {
            instance: instance.to_string(),
            run_index: r.run_index,
            final_cost: r.final_cost,
            evaluations: r.evaluations,
            iterations: r.iterations,
        }),
    )
}

pub fn read_runs_csv<T: Scalar>(text: &str) -> Result<Vec<RunRow<T>>> {
    from_csv(RUNS_HEADER, text)
}

#[derive(Serialize)]
#[serde(bound = "T: Scalar")]
struct RunLine<'a, T> {
    instance: &'a str,
    #[serde(flatten)]
    record: &'a RunRecord<T>,
}

/// One JSON object per run, including the final permutation.
pub fn write_runs_jsonl<T: Scalar>(instance: &str, records: &[RunRecord<T>]) -> Result<String> {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(&RunLine { instance, record })?);
        out.push('\n');
    }
    Ok(out)
}

/// Optima count and entropies of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OptimaSummary<T> {
    pub instance: String,
    pub n: usize,
    pub rdd: Option<f64>,
    pub tf: Option<f64>,
    pub optimum: T,
    /// `enumeration` or `search`.
    pub method: String,
    pub count: usize,
    pub truncated: bool,
    pub entropy: Option<f64>,
    pub sample_entropy: Option<f64>,
    pub sample_size: usize,
    pub sample_seed: u64,
}

pub fn write_optima_csv<T: Scalar>(rows: &[OptimaSummary<T>]) -> Result<String> {
    to_csv(OPTIMA_HEADER, rows)
}

pub fn read_optima_csv<T: Scalar>(text: &str) -> Result<Vec<OptimaSummary<T>>> {
    from_csv(OPTIMA_HEADER, text)
}

/// Header plus rows of preformatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Column-aligned text; the first column is left-aligned, the rest right-aligned.
    pub fn to_text(&self) -> String {
        let columns = self.header.len();
        let mut widths = vec![0; columns];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (k, cell) in row.iter().enumerate().take(columns) {
                widths[k] = widths[k].max(cell.chars().count());
            }
        }
        let rule: String = "-".repeat(widths.iter().sum::<usize>() + 2 * columns.saturating_sub(1));
        let line = |row: &[String]| {
            let mut s = String::new();
            for (k, cell) in row.iter().enumerate().take(columns) {
                if k > 0 {
                    s.push_str("  ");
                }
                if k == 0 {
                    let _ = write!(s, "{cell:<w$}", w = widths[k]);
                } else {
                    let _ = write!(s, "{cell:>w$}", w = widths[k]);
                }
            }
            s.trim_end().to_string()
        };
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        out.push_str(&rule);
        out.push('\n');
        out.push_str(&line(&self.header));
        out.push('\n');
        out.push_str(&rule);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out.push_str(&rule);
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Table layouts, numbered like the tables of the hillclimbing/VNS study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStyle {
    /// Solved instances per algorithm and n.
    Table1,
    /// Solved instances on the RDD x TF grid per algorithm, all n pooled.
    Table2,
    /// Same layout as `Table1`, for descent over operator lists.
    Table3,
    /// Mean percent deviation per algorithm and n.
    Table4,
    /// Mean evaluations per run, per algorithm and n.
    Table5,
    /// Mean percent deviation on the RDD x TF grid per n, one algorithm.
    Table6,
    /// Optima counts and entropies of selected instances.
    Table7,
}

impl FromStr for TableStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "table1" => TableStyle::Table1,
            "table2" => TableStyle::Table2,
            "table3" => TableStyle::Table3,
            "table4" => TableStyle::Table4,
            "table5" => TableStyle::Table5,
            "table6" => TableStyle::Table6,
            "table7" => TableStyle::Table7,
            other => return Err(Error::Parse(format!("unknown table style {other:?}"))),
        })
    }
}

/// Algorithms in first-seen order and the sorted set of n values.
fn algorithms_and_sizes<T>(stats: &[RunStats<T>]) -> (Vec<String>, Vec<usize>) {
    let mut algorithms: Vec<String> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for s in stats {
        if !algorithms.contains(&s.algorithm) {
            algorithms.push(s.algorithm.clone());
        }
        if !sizes.contains(&s.n) {
            sizes.push(s.n);
        }
    }
    sizes.sort_unstable();
    (algorithms, sizes)
}

fn per_algorithm_and_size<T, F>(stats: &[RunStats<T>], title: &str, cell: F) -> Table
where
    F: Fn(&[&RunStats<T>]) -> String,
{
    let (algorithms, sizes) = algorithms_and_sizes(stats);
    let mut header = vec!["Algorithm".to_string()];
    header.extend(sizes.iter().map(|n| format!("n = {n}")));
    let rows = algorithms
        .iter()
        .map(|alg| {
            let mut row = vec![alg.clone()];
            for &n in &sizes {
                let group: Vec<&RunStats<T>> = stats
                    .iter()
                    .filter(|s| &s.algorithm == alg && s.n == n)
                    .collect();
                row.push(if group.is_empty() { "-".into() } else { cell(&group) });
            }
            row
        })
        .collect();
    Table {
        title: title.into(),
        header,
        rows,
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn level(v: f64) -> String {
    format!("{v:.1}")
}

/// Solved instances per algorithm and n.
pub fn solved_table<T: Scalar>(stats: &[RunStats<T>]) -> Table {
    per_algorithm_and_size(stats, "Instances solved to the reference value", |group| {
        group.iter().filter(|s| s.solved == Some(true)).count().to_string()
    })
}

/// Mean percent deviation per algorithm and n.
pub fn deviation_table<T: Scalar>(stats: &[RunStats<T>]) -> Table {
    per_algorithm_and_size(stats, "Average deviation from the reference value", |group| {
        mean(group.iter().filter_map(|s| s.mean_deviation))
            .map(|d| format!("{d:.2}%"))
            .unwrap_or_else(|| "-".into())
    })
}

/// Mean evaluations per run, per algorithm and n.
pub fn evaluations_table<T: Scalar>(stats: &[RunStats<T>]) -> Table {
    per_algorithm_and_size(stats, "Average number of evaluations per local optimum", |group| {
        let m = mean(group.iter().map(|s| s.mean_evaluations)).unwrap_or_default();
        thousands(m.round() as u64)
    })
}

fn thousands(v: u64) -> String {
    let digits = v.to_string();
    let mut out = String::new();
    for (k, ch) in digits.chars().enumerate() {
        if k > 0 && (digits.len() - k).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// Grid blocks side by side: one block per key, rows RDD, columns TF.
fn grid_blocks<T: Scalar>(
    title: &str,
    blocks: Vec<(String, Vec<RunStats<T>>)>,
    cell: fn(&crate::analysis::CellSummary) -> String,
) -> Result<Table> {
    let mut reports = Vec::new();
    for (key, group) in &blocks {
        reports.push((key.clone(), aggregate(group)?));
    }
    let mut rdd_levels: Vec<f64> = Vec::new();
    let mut tf_levels: Vec<f64> = Vec::new();
    for (_, r) in &reports {
        for &v in &r.rdd_values {
            if !rdd_levels.iter().any(|&x| level(x) == level(v)) {
                rdd_levels.push(v);
            }
        }
        for &v in &r.tf_values {
            if !tf_levels.iter().any(|&x| level(x) == level(v)) {
                tf_levels.push(v);
            }
        }
    }
    rdd_levels.sort_by(f64::total_cmp);
    tf_levels.sort_by(f64::total_cmp);

    let mut header = vec!["RDD \\ TF".to_string()];
    for (key, _) in &reports {
        for &tf in &tf_levels {
            header.push(format!("{key} {}", level(tf)));
        }
    }
    let rows = rdd_levels
        .iter()
        .map(|&rdd| {
            let mut row = vec![level(rdd)];
            for (_, report) in &reports {
                for &tf in &tf_levels {
                    row.push(report.cell(rdd, tf).map(cell).unwrap_or_else(|| "-".into()));
                }
            }
            row
        })
        .collect();
    Ok(Table {
        title: title.into(),
        header,
        rows,
    })
}

/// Solved counts on the RDD x TF grid, one block per algorithm, all n pooled.
pub fn solved_grid_table<T: Scalar>(stats: &[RunStats<T>]) -> Result<Table> {
    let (algorithms, _) = algorithms_and_sizes(stats);
    let blocks = algorithms
        .into_iter()
        .map(|alg| {
            let group = stats.iter().filter(|s| s.algorithm == alg).cloned().collect();
            (alg, group)
        })
        .collect();
    grid_blocks("Instances solved by RDD and TF", blocks, |c| c.solved.to_string())
}

/// Mean percent deviation on the RDD x TF grid, one block per n, for the
/// first algorithm in `stats`.
pub fn deviation_grid_table<T: Scalar>(stats: &[RunStats<T>]) -> Result<Table> {
    let (algorithms, sizes) = algorithms_and_sizes(stats);
    let Some(alg) = algorithms.first() else {
        return grid_blocks::<T>("Average deviation in percent by RDD and TF", vec![], |_| String::new());
    };
    let blocks = sizes
        .iter()
        .map(|&n| {
            let group = stats
                .iter()
                .filter(|s| &s.algorithm == alg && s.n == n)
                .cloned()
                .collect();
            (format!("n={n}"), group)
        })
        .collect();
    grid_blocks(
        &format!("Average deviation in percent of {alg} by RDD and TF"),
        blocks,
        |c| c.mean_deviation.map(|d| format!("{d:.1}")).unwrap_or_else(|| "-".into()),
    )
}

/// Optima counts and entropies per instance.
pub fn optima_table<T: Scalar>(rows: &[OptimaSummary<T>]) -> Table {
    let header = [
        "Instance",
        "n",
        "RDD",
        "TF",
        "Optimum",
        "Distinct optimal alt.",
        "Entropy",
        "Entropy of sample",
    ]
    .map(String::from)
    .to_vec();
    let opt_level = |v: Option<f64>| v.map(level).unwrap_or_else(|| "-".into());
    let sci = |v: Option<f64>| v.map(|e| format!("{e:.2E}")).unwrap_or_else(|| "-".into());
    let rows = rows
        .iter()
        .map(|r| {
            let count = if r.truncated {
                format!("> {}", thousands(r.count as u64))
            } else if r.method == "search" {
                format!(">= {}", thousands(r.count as u64))
            } else {
                thousands(r.count as u64)
            };
            vec![
                r.instance.clone(),
                r.n.to_string(),
                opt_level(r.rdd),
                opt_level(r.tf),
                r.optimum.to_string(),
                count,
                sci(r.entropy),
                r.sample_entropy.map(|e| format!("{e:.4}")).unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    Table {
        title: "Distinct optimal alternatives and their entropy".into(),
        header,
        rows,
    }
}

/// Renders run statistics in one of the layouts `Table1` to `Table6`.
pub fn stats_table<T: Scalar>(style: TableStyle, stats: &[RunStats<T>]) -> Result<Table> {
    match style {
        TableStyle::Table1 | TableStyle::Table3 => Ok(solved_table(stats)),
        TableStyle::Table2 => solved_grid_table(stats),
        TableStyle::Table4 => Ok(deviation_table(stats)),
        TableStyle::Table5 => Ok(evaluations_table(stats)),
        TableStyle::Table6 => deviation_grid_table(stats),
        TableStyle::Table7 => Err(Error::InvalidConfig(
            "table7 is built from optima summaries, not run statistics".into(),
        )),
    }
}

/// Grouping helper for callers that hold mixed result files.
pub fn group_by_algorithm<T: Scalar>(stats: Vec<RunStats<T>>) -> BTreeMap<String, Vec<RunStats<T>>> {
    let mut groups: BTreeMap<String, Vec<RunStats<T>>> = BTreeMap::new();
    for s in stats {
        groups.entry(s.algorithm.clone()).or_default().push(s);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stat(alg: &str, n: usize, rdd: f64, tf: f64, solved: bool, dev: f64) -> RunStats<i64> {
        RunStats {
            instance: format!("x{n}"),
            n,
            rdd: Some(rdd),
            tf: Some(tf),
            algorithm: alg.into(),
            restarts: 10,
            best_cost: 10,
            best_known: Some(10),
            solved: Some(solved),
            mean_cost: 10.5,
            mean_evaluations: 23146.6,
            mean_iterations: 30.0,
            mean_deviation: Some(dev),
            zero_best_misses: 0,
            new_best_alerts: 0,
        }
    }

    #[test]
    fn stats_csv_round_trip() {
        let stats = vec![stat("hillclimb:EX", 40, 0.2, 0.4, true, 0.0), {
            let mut s = stat("vnd:BSH,FSH,EX", 40, 1.0, 0.2, false, 2.5);
            s.rdd = None;
            s.mean_deviation = None;
            s
        }];
        let text = write_stats_csv(&stats).unwrap();
        assert!(text.starts_with(STATS_HEADER));
        assert_eq!(read_stats_csv::<i64>(&text).unwrap(), stats);
        assert!(read_stats_csv::<i64>("instance\n").is_err());
    }

    #[test]
    fn solved_and_evaluation_tables() {
        let stats = vec![
            stat("hillclimb:EX", 40, 0.2, 0.2, true, 0.0),
            stat("hillclimb:EX", 40, 0.2, 0.4, false, 1.0),
            stat("hillclimb:EX", 50, 0.2, 0.2, true, 0.0),
            stat("hillclimb:BSH", 40, 0.2, 0.2, false, 3.0),
        ];
        let t = solved_table(&stats);
        assert_eq!(t.header, vec!["Algorithm", "n = 40", "n = 50"]);
        assert_eq!(t.rows[0], vec!["hillclimb:EX", "1", "1"]);
        assert_eq!(t.rows[1], vec!["hillclimb:BSH", "0", "-"]);
        let e = evaluations_table(&stats);
        assert_eq!(e.rows[0][1], "23,147");
        let d = deviation_table(&stats);
        assert_eq!(d.rows[0][1], "0.50%");
        assert!(t.to_text().contains("hillclimb:BSH"));
    }

    #[test]
    fn grid_tables() {
        let stats = vec![
            stat("hillclimb:EX", 40, 0.2, 0.2, true, 0.0),
            stat("hillclimb:EX", 40, 0.2, 0.2, true, 0.0),
            stat("hillclimb:EX", 50, 0.4, 0.2, false, 6.0),
        ];
        let t = solved_grid_table(&stats).unwrap();
        assert_eq!(t.header, vec!["RDD \\ TF", "hillclimb:EX 0.2"]);
        assert_eq!(t.rows, vec![vec!["0.2", "2"], vec!["0.4", "0"]]);
        let d = deviation_grid_table(&stats).unwrap();
        assert_eq!(d.header.len(), 3);
        assert_eq!(d.rows[1], vec!["0.4", "-", "6.0"]);
    }

    #[test]
    fn empty_input_gives_empty_tables() {
        let none: Vec<RunStats<i64>> = vec![];
        for style in ["table1", "table2", "table3", "table4", "table5", "table6"] {
            let t = stats_table(style.parse().unwrap(), &none).unwrap();
            assert!(t.rows.is_empty(), "{style}");
            assert!(!t.to_text().is_empty());
        }
        assert!(optima_table::<i64>(&[]).rows.is_empty());
    }

    #[test]
    fn missing_metadata_is_an_error() {
        let mut s = stat("hillclimb:EX", 40, 0.2, 0.2, true, 0.0);
        s.tf = None;
        assert!(matches!(solved_grid_table(&[s]), Err(Error::MissingMetadata(_))));
    }

    #[test]
    fn thousands_separator() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(1000), "1,000");
        assert_eq!(thousands(950904), "950,904");
        assert_eq!(thousands(1000000), "1,000,000");
    }
}
