use clap::{Args, Parser, Subcommand, ValueEnum};
use smtwt::io::{generate_grid, generate_set, parse_metadata_csv, write_metadata_csv, MetadataRow};
use smtwt::report::{
    optima_table, read_optima_csv, read_stats_csv, stats_table, write_optima_csv, write_runs_csv,
    write_runs_jsonl, write_stats_csv, TableStyle, OPTIMA_HEADER, STATS_HEADER,
};
use smtwt::search::RunStats;
use smtwt::{
    collect_optima_by_search, enumerate_optima, entropy, find_improving_move, parse_orlib, run_restarts,
    subsample, write_orlib, Algorithm, AlgorithmConfig, BenchmarkSet, BestKnownRegistry, Cost, Error,
    GeneratorConfig, Instance, OptimaSummary, Permutation, SolutionPool,
};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const DATA_DIR_ENV: &str = "SMTWT_DATA_DIR";

#[derive(Parser, Debug)]
#[command(name = "smtwt", version, about = "Single machine total weighted tardiness experiments")]
struct Cli {
    /// Worker threads for restarts (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate random instances in OR-Library format.
    Generate(GenerateArgs),
    /// Run a restart experiment on one instance.
    Solve(SolveArgs),
    /// Run a restart experiment on every instance of a benchmark set.
    Bench(BenchArgs),
    /// Count distinct optimal sequences of one instance.
    Optima(OptimaArgs),
    /// Precedence entropy of a pool of permutations.
    Entropy(EntropyArgs),
    /// Render result files as tables.
    Report(ReportArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
    Jsonl,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, required_unless_present = "grid")]
    rdd: Option<f64>,
    #[arg(long, required_unless_present = "grid")]
    tf: Option<f64>,
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Five instances for every cell of the RDD x TF grid, in published order.
    #[arg(long, conflicts_with_all = ["rdd", "tf", "count"])]
    grid: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace negative due dates by 0.
    #[arg(long)]
    clamp: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the `index,rdd,tf` metadata CSV here.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Instance file (OR-Library format) or set name looked up in $SMTWT_DATA_DIR.
    #[arg(long)]
    set: String,
    /// Jobs per instance; inferred from names like `wt40` when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Best-known values, one per line; defaults to `<set>_best.txt` next to the set if present.
    #[arg(long)]
    best: Option<PathBuf>,
    /// `index,rdd,tf` CSV; 125-instance sets default to the published grid order.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// `hillclimb:<OP>` or `vnd:<OP>,<OP>,...` with OP in EX, FSH, BSH.
    #[arg(long, default_value = "vnd:BSH,FSH,EX")]
    algo: String,
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail a run after this many accepted moves.
    #[arg(long)]
    iteration_cap: Option<u64>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// 1-based instance index within the file.
    #[arg(long, default_value_t = 1)]
    index: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Restrict to these 1-based indices, e.g. `1-10,42`.
    #[arg(long)]
    indices: Option<String>,
    /// Per-instance statistics CSV; a solved-count summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-run records file.
    #[arg(long)]
    runs: Option<PathBuf>,
    /// Format of the per-run records file.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Re-check every final permutation for an improving move.
    #[arg(long)]
    verify: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OptimaMethod {
    Enumerate,
    Search,
}

#[derive(Args, Debug)]
struct OptimaArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Objective value to enumerate; defaults to the best-known value.
    #[arg(long)]
    optimum: Option<Cost>,
    #[arg(long, default_value_t = 100_000)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = OptimaMethod::Enumerate)]
    method: OptimaMethod,
    #[command(flatten)]
    search: SearchArgs,
    /// Size of the random subsample for the second entropy value.
    #[arg(long, default_value_t = 100)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    sample_seed: u64,
    /// Write the optimal permutations here, one per line.
    #[arg(long)]
    list: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    /// Permutations, one per line, 1-based job indices.
    #[arg(long)]
    pool: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Statistics or optima CSV files written by `bench` / `optima`.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    inputs: Vec<PathBuf>,
    /// `table1` ... `table7`.
    #[arg(long, default_value = "table1")]
    style: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its process exit code: 1 usage, 2 I/O, 3 internal invariant.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl fmt::Display) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }

    fn io(message: impl fmt::Display) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    fn internal(message: impl fmt::Display) -> Self {
        Self {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) => CliError::usage(e),
            Error::NewBest { .. } | Error::IterationCap(_) => CliError::internal(e),
            _ => CliError::io(e),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(CliError::internal)?;
    }
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Optima(args) => cmd_optima(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be positive"));
    }
    let set: BenchmarkSet = if args.grid {
        generate_grid("generated", args.n, args.seed, args.clamp)?
    } else {
        let (rdd, tf) = (args.rdd.unwrap_or_default(), args.tf.unwrap_or_default());
        GeneratorConfig::new(args.n, rdd, tf, args.seed).validate()?;
        generate_set("generated", args.n, rdd, tf, args.count, args.seed, args.clamp)?
    };
    emit(args.out.as_deref(), &write_orlib(&set))?;
    if let Some(meta) = &args.meta {
        emit(Some(meta), &write_metadata_csv(&set)?)?;
    }
    eprintln!("generated {} instances with n = {}", set.len(), args.n);
    Ok(())
}

/// A loaded benchmark set plus its reference values.
struct LoadedSet {
    set: BenchmarkSet,
    best: BestKnownRegistry,
}

impl LoadedSet {
    fn best_known(&self, index: usize) -> Option<Cost> {
        self.best.best_known(&self.set.name, index).ok().map(|(v, _)| v)
    }

    fn instance(&self, index: usize) -> CliResult<&Instance> {
        index
            .checked_sub(1)
            .and_then(|k| self.set.instances.get(k))
            .ok_or_else(|| {
                CliError::usage(format!("{} has no instance #{index}", self.set.name))
            })
    }
}

fn resolve_set_path(set: &str) -> CliResult<PathBuf> {
    let direct = PathBuf::from(set);
    if direct.is_file() {
        return Ok(direct);
    }
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        for candidate in [Path::new(&dir).join(set), Path::new(&dir).join(format!("{set}.txt"))] {
            if candidate.is_file() {
                return Ok(candidate);
            }
        }
    }
    Err(CliError::io(format!(
        "instance file {set:?} not found (also looked in ${DATA_DIR_ENV})"
    )))
}

fn set_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "set".into())
}

fn infer_n(name: &str) -> Option<usize> {
    let digits: String = name
        .chars()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(char::is_ascii_digit)
        .collect();
    digits.parse().ok()
}

fn load_set(args: &InstanceArgs) -> CliResult<LoadedSet> {
    let path = resolve_set_path(&args.set)?;
    let name = set_name(&path);
    let n = args
        .n
        .or_else(|| infer_n(&name))
        .ok_or_else(|| CliError::usage(format!("cannot infer n from {name:?}; pass --n")))?;
    let mut set = parse_orlib::<Cost>(&read_text(&path)?, n)?.named(name.clone());

    match &args.meta {
        Some(meta) => {
            let rows: Vec<MetadataRow> = parse_metadata_csv(&read_text(meta)?)?;
            set = set.with_metadata(&rows)?;
        }
        None if set.len() == 125 => set = set.with_orlib_grid(),
        None => {}
    }

    let mut best = BestKnownRegistry::new();
    let best_path = args.best.clone().or_else(|| {
        let sibling = path.with_file_name(format!("{name}_best.txt"));
        sibling.is_file().then_some(sibling)
    });
    if let Some(best_path) = best_path {
        let provenance = BestKnownRegistry::default_provenance(&name);
        let count = best.load(&name, &read_text(&best_path)?, provenance)?;
        if count != set.len() {
            eprintln!(
                "warning: {} holds {count} values for {} instances",
                best_path.display(),
                set.len()
            );
        }
    }
    Ok(LoadedSet { set, best })
}

fn algorithm_config(args: &SearchArgs) -> CliResult<AlgorithmConfig> {
    let algorithm: Algorithm = args.algo.parse().map_err(CliError::usage)?;
    let mut cfg = AlgorithmConfig::new(algorithm, args.restarts, args.seed);
    cfg.iteration_cap = args.iteration_cap;
    cfg.validate().map_err(CliError::usage)?;
    Ok(cfg)
}

fn cmd_solve(args: SolveArgs) -> CliResult<()> {
    let cfg = algorithm_config(&args.search)?;
    let loaded = load_set(&args.instance)?;
    let inst = loaded.instance(args.index)?;
    let label = loaded.set.label(args.index);
    let records = run_restarts(inst, &cfg)?;
    let text = match args.format {
        Format::Csv => write_runs_csv(&label, &records)?,
        Format::Jsonl => write_runs_jsonl(&label, &records)?,
        Format::Text => {
            let stats = RunStats::summarize(inst, &cfg.algorithm, &records, loaded.best_known(args.index))?;
            let best = records
                .iter()
                .min_by_key(|r| r.final_cost)
                .expect("at least one restart");
            let mut text = format!(
                "instance {label}\nalgorithm {}\nrestarts {}\nbest {}\nmean {:.2}\nmean evaluations {:.0}\n",
                cfg.algorithm, cfg.restarts, stats.best_cost, stats.mean_cost, stats.mean_evaluations
            );
            if let Some(reference) = stats.best_known {
                text.push_str(&format!(
                    "reference {reference}\nsolved {}\n",
                    stats.solved == Some(true)
                ));
            }
            text.push_str(&format!("sequence {}\n", best.final_perm));
            text
        }
    };
    emit(args.out.as_deref(), &text)
}

fn parse_indices(spec: &str, len: usize) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) => (a.trim().parse::<usize>(), b.trim().parse::<usize>()),
            None => (part.parse::<usize>(), part.parse::<usize>()),
        };
        let (lo, hi) = match (lo, hi) {
            (Ok(lo), Ok(hi)) if lo >= 1 && lo <= hi && hi <= len => (lo, hi),
            _ => return Err(CliError::usage(format!("bad index range {part:?} for {len} instances"))),
        };
        out.extend(lo..=hi);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let cfg = algorithm_config(&args.search)?;
    let loaded = load_set(&args.instance)?;
    let indices = match &args.indices {
        Some(spec) => parse_indices(spec, loaded.set.len())?,
        None => (1..=loaded.set.len()).collect(),
    };

    let started = Instant::now();
    let mut stats = Vec::with_capacity(indices.len());
    let mut runs_text = String::new();
    let mut violations = 0usize;
    for (k, &index) in indices.iter().enumerate() {
        let inst = loaded.instance(index)?;
        let label = loaded.set.label(index);
        let records = run_restarts(inst, &cfg)?;
        if args.verify {
            for record in &records {
                if let Some(mv) = find_improving_move(inst, &record.final_perm, cfg.algorithm.operators())? {
                    eprintln!("{label} run {}: improving move {mv} remains", record.run_index);
                    violations += 1;
                }
            }
        }
        if args.runs.is_some() {
            let chunk = match args.format {
                Format::Jsonl => write_runs_jsonl(&label, &records)?,
                _ => write_runs_csv(&label, &records)?,
            };
            // keep a single header for CSV
            let body = if runs_text.is_empty() || args.format == Format::Jsonl {
                chunk.as_str()
            } else {
                chunk.splitn(3, '\n').nth(2).unwrap_or_default()
            };
            runs_text.push_str(body);
        }
        let s = RunStats::summarize(inst, &cfg.algorithm, &records, loaded.best_known(index))?;
        if s.new_best_alerts > 0 {
            eprintln!(
                "note: {label} reached {} below the reference {:?}",
                s.best_cost, s.best_known
            );
        }
        eprintln!(
            "[{}/{}] {label}: best {} solved {:?} ({:.1}s)",
            k + 1,
            indices.len(),
            s.best_cost,
            s.solved,
            started.elapsed().as_secs_f64()
        );
        stats.push(s);
    }

    if let Some(runs) = &args.runs {
        emit(Some(runs), &runs_text)?;
    }
    let solved = stats.iter().filter(|s| s.solved == Some(true)).count();
    let with_reference = stats.iter().filter(|s| s.solved.is_some()).count();
    match &args.out {
        Some(out) => {
            emit(Some(out), &write_stats_csv(&stats)?)?;
            println!(
                "{} {}: solved {solved} of {with_reference}",
                loaded.set.name, cfg.algorithm
            );
        }
        None => print!("{}", write_stats_csv(&stats)?),
    }
    if violations > 0 {
        return Err(CliError::internal(format!(
            "{violations} runs ended outside a local optimum"
        )));
    }
    Ok(())
}

fn cmd_optima(args: OptimaArgs) -> CliResult<()> {
    if args.cap == 0 {
        return Err(CliError::usage("--cap must be positive"));
    }
    let loaded = load_set(&args.instance)?;
    let inst = loaded.instance(args.index)?;
    let optimum = args
        .optimum
        .or_else(|| loaded.best_known(args.index))
        .ok_or_else(|| CliError::usage("no --optimum given and no best-known value available"))?;

    let (set, method) = match args.method {
        OptimaMethod::Enumerate => (enumerate_optima(inst, optimum, args.cap)?, "enumeration"),
        OptimaMethod::Search => {
            let cfg = algorithm_config(&args.search)?;
            (collect_optima_by_search(inst, optimum, &cfg, args.cap)?, "search")
        }
    };
    if let Some((cost, perm)) = &set.better {
        eprintln!("note: found cost {cost} below {optimum}: {perm}");
    }
    if let Some(list) = &args.list {
        emit(Some(list), &set.to_text())?;
    }

    let members: Vec<Permutation> = set.members.iter().cloned().collect();
    let (full, sample) = if members.is_empty() || inst.n() < 2 {
        (None, None)
    } else {
        let full = entropy(&SolutionPool::new(members.clone())?)?;
        let picked = subsample(&members, args.sample, args.sample_seed);
        (Some(full), Some(entropy(&SolutionPool::new(picked)?)?))
    };
    let summary = OptimaSummary {
        instance: loaded.set.label(args.index),
        n: inst.n(),
        rdd: inst.meta().rdd,
        tf: inst.meta().tf,
        optimum,
        method: method.into(),
        count: set.len(),
        truncated: set.truncated,
        entropy: full,
        sample_entropy: sample,
        sample_size: args.sample.min(set.len()),
        sample_seed: args.sample_seed,
    };
    let text = match args.format {
        Format::Text => optima_table(std::slice::from_ref(&summary)).to_text(),
        _ => write_optima_csv(std::slice::from_ref(&summary))?,
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_entropy(args: EntropyArgs) -> CliResult<()> {
    let text = read_text(&args.pool)?;
    let perms = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse::<Permutation>)
        .collect::<Result<Vec<_>, _>>()?;
    let pool = SolutionPool::new(perms)?;
    println!("{}", entropy(&pool)?);
    Ok(())
}

fn cmd_report(args: ReportArgs) -> CliResult<()> {
    let style: TableStyle = args.style.parse().map_err(CliError::usage)?;
    let mut stats: Vec<RunStats<Cost>> = Vec::new();
    let mut optima: Vec<OptimaSummary> = Vec::new();
    for path in &args.inputs {
        let text = read_text(path)?;
        match text.lines().next().map(str::trim) {
            Some(STATS_HEADER) => stats.extend(read_stats_csv::<Cost>(&text)?),
            Some(OPTIMA_HEADER) => optima.extend(read_optima_csv::<Cost>(&text)?),
            _ => {
                return Err(CliError::io(format!(
                    "{}: not a statistics or optima file",
                    path.display()
                )))
            }
        }
    }
    let table = match style {
        TableStyle::Table7 => optima_table(&optima),
        _ => stats_table(style, &stats)?,
    };
    let text = match args.format {
        Format::Csv => table.to_csv()?,
        _ => table.to_text(),
    };
    emit(args.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_ranges() {
        assert_eq!(parse_indices("1-3,7,2", 10).unwrap(), vec![1, 2, 3, 7]);
        assert!(parse_indices("0-3", 10).is_err());
        assert!(parse_indices("5-11", 10).is_err());
        assert!(parse_indices("x", 10).is_err());
    }

    #[test]
    fn n_from_set_name() {
        assert_eq!(infer_n("wt40"), Some(40));
        assert_eq!(infer_n("wt100_b"), Some(100));
        assert_eq!(infer_n("generated"), None);
    }
}
