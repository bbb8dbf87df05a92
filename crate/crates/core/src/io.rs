//! OR-Library weighted tardiness files, the random instance generator,
//! best-known value registries and RDD/TF metadata.
//!
//! An OR-Library instance file is a stream of whitespace-separated integers.
//! Instance `i` (1-based) occupies tokens `[3n(i-1), 3ni)`: `n` processing
//! times, then `n` weights, then `n` due dates.
//!
//! The 125 instances of each published set are ordered by grid cell, five per
//! cell, with RDD as the outer and TF as the inner loop over
//! `{0.2, 0.4, 0.6, 0.8, 1.0}`; see [`orlib_grid_cell`].

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceMeta};
use crate::num::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

/// RDD and TF levels of the published benchmark grid.
pub const GRID_LEVELS: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

/// Instances per (RDD, TF) cell in the published sets.
pub const INSTANCES_PER_CELL: usize = 5;

/// Instances of one size, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSet<T> {
    pub name: String,
    pub n: usize,
    pub instances: Vec<Instance<T>>,
}

impl<T: Scalar> BenchmarkSet<T> {
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        Self {
            name: name.into(),
            n,
            instances: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// `"<name> #<index>"` with a 1-based index.
    pub fn label(&self, index: usize) -> String {
        format!("{} #{}", self.name, index)
    }

    /// Renames the set and relabels every instance.
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        for k in 0..self.instances.len() {
            let label = self.label(k + 1);
            self.instances[k].meta_mut().label = Some(label);
        }
        self
    }

    /// Attaches the published grid position to each instance by index.
    pub fn with_orlib_grid(mut self) -> Self {
        for (k, inst) in self.instances.iter_mut().enumerate() {
            if let Some((rdd, tf)) = orlib_grid_cell(k + 1) {
                inst.meta_mut().rdd = Some(rdd);
                inst.meta_mut().tf = Some(tf);
            }
        }
        self
    }

    /// Attaches metadata rows; unknown indices are an error.
    pub fn with_metadata(mut self, rows: &[MetadataRow]) -> Result<Self> {
        for row in rows {
            let inst = row
                .index
                .checked_sub(1)
                .and_then(|k| self.instances.get_mut(k))
                .ok_or_else(|| Error::UnknownInstance {
                    set: self.name.clone(),
                    index: row.index,
                })?;
            inst.meta_mut().rdd = Some(row.rdd);
            inst.meta_mut().tf = Some(row.tf);
        }
        Ok(self)
    }
}

/// (RDD, TF) of a 1-based instance index in a 125-instance published set.
pub fn orlib_grid_cell(index: usize) -> Option<(f64, f64)> {
    let cell = index.checked_sub(1)? / INSTANCES_PER_CELL;
    if cell >= GRID_LEVELS.len() * GRID_LEVELS.len() {
        return None;
    }
    Some((
        GRID_LEVELS[cell / GRID_LEVELS.len()],
        GRID_LEVELS[cell % GRID_LEVELS.len()],
    ))
}

/// Parses an OR-Library weighted tardiness file with `n` jobs per instance.
pub fn parse_orlib<T: Scalar>(text: &str, n: usize) -> Result<BenchmarkSet<T>> {
    if n == 0 {
        return Err(Error::Parse("job count must be positive".into()));
    }
    let tokens = text
        .split_ascii_whitespace()
        .enumerate()
        .map(|(k, tok)| {
            tok.parse::<T>()
                .map_err(|_| Error::Parse(format!("token {} is not an integer: {tok:?}", k + 1)))
        })
        .collect::<Result<Vec<T>>>()?;
    let block = 3 * n;
    if tokens.len() % block != 0 {
        return Err(Error::Parse(format!(
            "{} integers is not a multiple of 3n = {}",
            tokens.len(),
            block
        )));
    }
    let mut set = BenchmarkSet::new("", n);
    for (k, chunk) in tokens.chunks_exact(block).enumerate() {
        let inst = Instance::new(
            chunk[..n].to_vec(),
            chunk[n..2 * n].to_vec(),
            chunk[2 * n..].to_vec(),
        )
        .map_err(|e| Error::Parse(format!("instance {}: {e}", k + 1)))?;
        set.instances.push(inst);
    }
    Ok(set)
}

const VALUES_PER_LINE: usize = 20;

/// Writes a set in OR-Library layout, each array on lines of at most 20 values.
pub fn write_orlib<T: Scalar>(set: &BenchmarkSet<T>) -> String {
    let mut out = String::new();
    for inst in &set.instances {
        for values in [inst.processing_times(), inst.weights(), inst.due_dates()] {
            for line in values.chunks(VALUES_PER_LINE) {
                for (k, v) in line.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{v}");
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Parameters of the random generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    /// Relative range of due dates, in `(0, 1]`.
    pub rdd: f64,
    /// Average tardiness factor, in `(0, 1]`.
    pub tf: f64,
    pub seed: u64,
    /// Replace negative due dates by 0.
    pub clamp_negative_due_dates: bool,
}

impl GeneratorConfig {
    pub fn new(n: usize, rdd: f64, tf: f64, seed: u64) -> Self {
        Self {
            n,
            rdd,
            tf,
            seed,
            clamp_negative_due_dates: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        for (name, v) in [("rdd", self.rdd), ("tf", self.tf)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} is outside (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Integer due-date range `[ceil(P(1 - TF - RDD/2)), floor(P(1 - TF + RDD/2))]`.
///
/// Endpoints within 1e-9 of an integer are snapped to it first, so binary
/// representation error in RDD and TF cannot move a bound by one. When the
/// range holds no integer (tiny `P * RDD`) it collapses to the integer
/// nearest to `P(1 - TF)`.
pub fn due_date_bounds(total_processing: i64, rdd: f64, tf: f64) -> (i64, i64) {
    let p = total_processing as f64;
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() < 1e-9 {
            r
        } else {
            x
        }
    };
    let lower = snap(p * (1.0 - tf - rdd / 2.0)).ceil() as i64;
    let upper = snap(p * (1.0 - tf + rdd / 2.0)).floor() as i64;
    if lower <= upper {
        (lower, upper)
    } else {
        let mid = (p * (1.0 - tf)).round() as i64;
        (mid, mid)
    }
}

/// Random instance: processing times uniform on `[1, 100]`, weights on
/// `[1, 10]`, due dates uniform on [`due_date_bounds`] of the drawn total
/// processing time. Deterministic in `cfg`.
pub fn generate<T: Scalar>(cfg: &GeneratorConfig) -> Result<Instance<T>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let processing: Vec<i64> = (0..cfg.n).map(|_| rng.random_range(1..=100)).collect();
    let weights: Vec<i64> = (0..cfg.n).map(|_| rng.random_range(1..=10)).collect();
    let total: i64 = processing.iter().sum();
    let (lower, upper) = due_date_bounds(total, cfg.rdd, cfg.tf);
    let due_dates: Vec<i64> = (0..cfg.n)
        .map(|_| {
            let d = rng.random_range(lower..=upper);
            if cfg.clamp_negative_due_dates {
                d.max(0)
            } else {
                d
            }
        })
        .collect();

    let convert = |values: Vec<i64>| {
        values
            .into_iter()
            .map(|v| {
                T::from_i64(v)
                    .ok_or_else(|| Error::InvalidConfig(format!("{v} does not fit the scalar type")))
            })
            .collect::<Result<Vec<T>>>()
    };
    let inst = Instance::new(convert(processing)?, convert(weights)?, convert(due_dates)?)?;
    Ok(inst.with_meta(InstanceMeta {
        rdd: Some(cfg.rdd),
        tf: Some(cfg.tf),
        label: Some(format!(
            "gen n={} rdd={} tf={} seed={}",
            cfg.n, cfg.rdd, cfg.tf, cfg.seed
        )),
    }))
}

/// SplitMix64 finalizer over `(seed, index)`, for per-instance seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `count` instances with one (RDD, TF) setting; instance `k` uses seed
/// `derive_seed(seed, k)`.
pub fn generate_set<T: Scalar>(
    name: &str,
    n: usize,
    rdd: f64,
    tf: f64,
    count: usize,
    seed: u64,
    clamp_negative_due_dates: bool,
) -> Result<BenchmarkSet<T>> {
    let mut set = BenchmarkSet::new(name, n);
    for k in 0..count {
        let mut cfg = GeneratorConfig::new(n, rdd, tf, derive_seed(seed, k as u64));
        cfg.clamp_negative_due_dates = clamp_negative_due_dates;
        set.instances.push(generate(&cfg)?);
    }
    Ok(set.named(name))
}

/// The full grid in published order: five instances per (RDD, TF) cell,
/// RDD outer, TF inner, 125 instances in total.
pub fn generate_grid<T: Scalar>(
    name: &str,
    n: usize,
    seed: u64,
    clamp_negative_due_dates: bool,
) -> Result<BenchmarkSet<T>> {
    let mut set = BenchmarkSet::new(name, n);
    let cells = GRID_LEVELS.len() * GRID_LEVELS.len();
    for index in 1..=cells * INSTANCES_PER_CELL {
        let (rdd, tf) = orlib_grid_cell(index).expect("index inside the grid");
        let mut cfg = GeneratorConfig::new(n, rdd, tf, derive_seed(seed, index as u64 - 1));
        cfg.clamp_negative_due_dates = clamp_negative_due_dates;
        set.instances.push(generate(&cfg)?);
    }
    Ok(set.named(name))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ProvenOptimal,
    BestKnown,
}

/// Reference objective values keyed by (set name, 1-based index).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BestKnownRegistry<T> {
    entries: HashMap<(String, usize), (T, Provenance)>,
}

impl<T: Scalar> BestKnownRegistry<T> {
    pub fn new() -> Self {
        Self {
            entries: HashMap::new(),
        }
    }

    /// Provenance by published set name: the 40- and 50-job sets are
    /// proven optimal, everything else is best-known.
    pub fn default_provenance(set: &str) -> Provenance {
        match set {
            "wt40" | "wt50" => Provenance::ProvenOptimal,
            _ => Provenance::BestKnown,
        }
    }

    pub fn insert(&mut self, set: &str, index: usize, value: T, provenance: Provenance) {
        self.entries.insert((set.to_string(), index), (value, provenance));
    }

    /// Loads a best-known file: one integer per line, line `i` for instance
    /// `i`. Blank lines are ignored.
    pub fn load(&mut self, set: &str, text: &str, provenance: Provenance) -> Result<usize> {
        let mut count = 0;
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value = line.parse::<T>().map_err(|_| {
                Error::Parse(format!("line {}: not an integer: {line:?}", line_no + 1))
            })?;
            count += 1;
            self.insert(set, count, value, provenance);
        }
        Ok(count)
    }

    pub fn best_known(&self, set: &str, index: usize) -> Result<(T, Provenance)> {
        self.entries
            .get(&(set.to_string(), index))
            .copied()
            .ok_or_else(|| Error::UnknownInstance {
                set: set.to_string(),
                index,
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One line of an instance-metadata CSV (`index,rdd,tf`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetadataRow {
    pub index: usize,
    pub rdd: f64,
    pub tf: f64,
}

pub fn parse_metadata_csv(text: &str) -> Result<Vec<MetadataRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_metadata_csv<T: Scalar>(set: &BenchmarkSet<T>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for (k, inst) in set.instances.iter().enumerate() {
        let (Some(rdd), Some(tf)) = (inst.meta().rdd, inst.meta().tf) else {
            return Err(Error::MissingMetadata(set.label(k + 1)));
        };
        writer.serialize(MetadataRow {
            index: k + 1,
            rdd,
            tf,
        })?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal() {
        let set = parse_orlib::<i64>("1 1 1", 1).unwrap();
        assert_eq!(set.len(), 1);
        let inst = &set.instances[0];
        assert_eq!(
            (inst.processing_times(), inst.weights(), inst.due_dates()),
            (&[1][..], &[1][..], &[1][..])
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_orlib::<i64>("1 1", 1), Err(Error::Parse(_))));
        assert!(matches!(parse_orlib::<i64>("1 x 1", 1), Err(Error::Parse(_))));
        assert!(matches!(parse_orlib::<i64>("0 1 1", 1), Err(Error::Parse(_))));
        assert!(matches!(parse_orlib::<i64>("1 0 1", 1), Err(Error::Parse(_))));
        assert!(parse_orlib::<i64>("1 1 1", 0).is_err());
    }

    #[test]
    fn parse_accepts_negative_due_dates_and_newlines() {
        let set = parse_orlib::<i64>("3 4\n1 2\n-5\n7\n", 2).unwrap();
        assert_eq!(set.instances[0].due_dates(), &[-5, 7]);
    }

    #[test]
    fn empty_set_writes_nothing() {
        let set = BenchmarkSet::<i64>::new("empty", 10);
        assert_eq!(write_orlib(&set), "");
        assert_eq!(parse_orlib::<i64>("", 10).unwrap().len(), 0);
    }

    #[test]
    fn written_set_has_3n_values_per_instance() {
        let set = generate_set::<i64>("g", 7, 0.6, 0.4, 5, 3, false).unwrap();
        let text = write_orlib(&set);
        assert_eq!(text.split_ascii_whitespace().count(), 15 * 7);
        let back = parse_orlib::<i64>(&text, 7).unwrap().named("g");
        for (a, b) in set.instances.iter().zip(&back.instances) {
            assert_eq!(a.processing_times(), b.processing_times());
            assert_eq!(a.weights(), b.weights());
            assert_eq!(a.due_dates(), b.due_dates());
        }
    }

    #[test]
    fn grid_cells_follow_published_order() {
        assert_eq!(orlib_grid_cell(1), Some((0.2, 0.2)));
        assert_eq!(orlib_grid_cell(5), Some((0.2, 0.2)));
        assert_eq!(orlib_grid_cell(6), Some((0.2, 0.4)));
        assert_eq!(orlib_grid_cell(125), Some((1.0, 1.0)));
        assert_eq!(orlib_grid_cell(0), None);
        assert_eq!(orlib_grid_cell(126), None);
        // labelled instances of the hard-instance study
        assert_eq!(orlib_grid_cell(109), Some((1.0, 0.4)));
        assert_eq!(orlib_grid_cell(20), Some((0.2, 0.8)));
        assert_eq!(orlib_grid_cell(45), Some((0.4, 0.8)));
        assert_eq!(orlib_grid_cell(86), Some((0.8, 0.6)));
        assert_eq!(orlib_grid_cell(113), Some((1.0, 0.6)));
        assert_eq!(orlib_grid_cell(118), Some((1.0, 0.8)));
    }

    #[test]
    fn due_date_bounds_substitution() {
        assert_eq!(due_date_bounds(1000, 0.2, 0.2), (700, 900));
        assert_eq!(due_date_bounds(1000, 1.0, 1.0), (-500, 500));
        assert_eq!(due_date_bounds(999, 0.2, 0.2), (700, 899));
        // empty integer range collapses to the midpoint
        assert_eq!(due_date_bounds(2, 0.2, 0.2), (2, 2));
    }

    #[test]
    fn generator_rejects_bad_config() {
        for (rdd, tf) in [(0.0, 0.5), (0.5, 1.5), (-0.1, 0.2), (f64::NAN, 0.2)] {
            assert!(generate::<i64>(&GeneratorConfig::new(10, rdd, tf, 1)).is_err());
        }
        assert!(generate::<i64>(&GeneratorConfig::new(0, 0.2, 0.2, 1)).is_err());
    }

    #[test]
    fn generator_clamps_on_request() {
        let mut cfg = GeneratorConfig::new(40, 1.0, 1.0, 17);
        let raw = generate::<i64>(&cfg).unwrap();
        assert!(raw.due_dates().iter().any(|&d| d < 0));
        cfg.clamp_negative_due_dates = true;
        let clamped = generate::<i64>(&cfg).unwrap();
        assert!(clamped.due_dates().iter().all(|&d| d >= 0));
        assert_eq!(raw.processing_times(), clamped.processing_times());
    }

    #[test]
    fn registry_lookup() {
        let mut reg = BestKnownRegistry::<i64>::new();
        let prov = BestKnownRegistry::<i64>::default_provenance("wt40");
        assert_eq!(reg.load("wt40", "913\n1225\n\n537\n", prov).unwrap(), 3);
        assert_eq!(reg.best_known("wt40", 3).unwrap(), (537, Provenance::ProvenOptimal));
        assert!(matches!(
            reg.best_known("wt999", 1),
            Err(Error::UnknownInstance { .. })
        ));
        assert_eq!(
            BestKnownRegistry::<i64>::default_provenance("wt100"),
            Provenance::BestKnown
        );
        assert!(reg.load("bad", "12\nabc\n", prov).is_err());
    }

    #[test]
    fn metadata_round_trip() {
        let set = generate_grid::<i64>("grid", 3, 5, false).unwrap();
        let csv = write_metadata_csv(&set).unwrap();
        assert!(csv.starts_with("index,rdd,tf\n"));
        let rows = parse_metadata_csv(&csv).unwrap();
        assert_eq!(rows.len(), 125);
        assert_eq!(rows[108], MetadataRow { index: 109, rdd: 1.0, tf: 0.4 });
        let plain = parse_orlib::<i64>(&write_orlib(&set), 3).unwrap().named("grid");
        let tagged = plain.with_metadata(&rows).unwrap();
        assert_eq!(tagged.instances[108].meta().tf, Some(0.4));
        assert!(BenchmarkSet::<i64>::new("x", 3)
            .with_metadata(&rows[..1])
            .is_err());
    }
}
