//! `bbp`: exact probabilities, counts and thresholds for the bottleneck birthday problem.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 when a computation is refused
//! (oracle guard, memory budget or timeout), 3 when `xcheck` finds a divergence.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use bbp_core::exec::Exec;
use bbp_core::search::{find_nmax_with, SearchOptions};
use bbp_core::solvers::{count_t, count_with, solve_with, DEFAULT_BRUTE_LIMIT};
use bbp_core::stirling::{restricted_stirling2, stirling2};
use bbp_core::tabulator::{
    benchmark_with, cross_check_with, generate_table_with, BenchTarget, OutputFormat, TableSpec, XCheckBounds,
    XCheckOptions, STANDARD_DAYS,
};
use bbp_core::{
    cache::ProbCache, AlgorithmId, Deadline, Error, ExactProbability, FloatPrecision, Mode, ProblemInstance,
    SearchRequest,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bbp", version, about = "Bottleneck birthday problem: at most r birthdays on any of m days")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Probability that no day holds more than r of n people.
    Prob(ProbArgs),
    /// Number of valid assignments, or T(m, n, k) with --occupied.
    Count(CountArgs),
    /// Largest n whose probability is still at least gamma.
    Nmax(NmaxArgs),
    /// Grid of n_max over day counts and caps.
    Table(TableArgs),
    /// Stirling number of the second kind, optionally with a block-size cap.
    Stirling(StirlingArgs),
    /// Run every exact algorithm (and the brute-force oracle) over a box of instances.
    Xcheck(XcheckArgs),
    /// Time the algorithms on chosen instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Number of days m.
    #[arg(long)]
    days: usize,
    /// Number of people n.
    #[arg(long)]
    people: usize,
    /// Cap r on birthdays per day.
    #[arg(long)]
    max_per_day: usize,
}

impl InstanceArgs {
    fn instance(&self) -> Result<ProblemInstance, Error> {
        ProblemInstance::new(self.days, self.people, self.max_per_day)
    }
}

#[derive(Args)]
struct ModeArgs {
    /// day|counting|stirling|direct|brute
    #[arg(long, default_value = "direct", value_parser = parse_algo)]
    algo: AlgorithmId,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Float backend: `double`, or fractional bits of fixed point.
    #[arg(long, default_value = "128", value_parser = parse_precision)]
    precision: FloatPrecision,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float(self.precision),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbFormat {
    Frac,
    Dec,
    Json,
}

#[derive(Args)]
struct ProbArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[command(flatten)]
    mode: ModeArgs,
    /// Output format; defaults to frac in exact mode and dec in float mode.
    #[arg(long, value_enum)]
    format: Option<ProbFormat>,
    /// Fractional digits for --format dec.
    #[arg(long, default_value_t = 20)]
    digits: usize,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct Limits {
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Largest number of bounded compositions the brute-force oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_BRUTE_LIMIT)]
    brute_limit: u64,
}

impl Limits {
    fn deadline(&self) -> Result<Deadline, Error> {
        match self.timeout {
            None => Ok(Deadline::NONE),
            Some(s) => Duration::try_from_secs_f64(s)
                .map(Deadline::after)
                .map_err(|_| Error::Unsupported(format!("invalid timeout {s}"))),
        }
    }
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// counting|stirling|brute
    #[arg(long, default_value = "counting", value_parser = parse_algo)]
    algo: AlgorithmId,
    /// Count only assignments occupying exactly this many days.
    #[arg(long)]
    occupied: Option<usize>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Clone, Copy, ValueEnum)]
enum NmaxFormat {
    Plain,
    Json,
}

#[derive(Args)]
struct NmaxArgs {
    #[arg(long)]
    days: usize,
    #[arg(long)]
    max_per_day: usize,
    /// Threshold as an exact fraction, e.g. 1/2.
    #[arg(long, default_value = "1/2", value_parser = parse_gamma)]
    gamma: ExactProbability,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, value_enum, default_value_t = NmaxFormat::Plain)]
    format: NmaxFormat,
    /// Probability cache file, created if missing.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated day counts.
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_DAYS)]
    days: Vec<usize>,
    /// Caps as a range `a..b` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "1..10", value_parser = parse_caps)]
    max_per_day: Caps,
    #[arg(long, default_value = "1/2", value_parser = parse_gamma)]
    gamma: ExactProbability,
    #[command(flatten)]
    mode: ModeArgs,
    /// csv|markdown|json
    #[arg(long, default_value = "csv", value_parser = parse_table_format)]
    format: OutputFormat,
    /// Worker threads; cells run sequentially when omitted.
    #[arg(long)]
    jobs: Option<usize>,
    /// Probability cache file, created if missing.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone)]
struct Caps(Vec<usize>);

#[derive(Args)]
struct StirlingArgs {
    #[arg(long)]
    objects: usize,
    #[arg(long)]
    blocks: usize,
    /// Largest allowed block.
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Args)]
struct XcheckArgs {
    #[arg(long, default_value_t = 30)]
    max_days: usize,
    #[arg(long, default_value_t = 40)]
    max_people: usize,
    #[arg(long, default_value_t = 5)]
    max_per_day: usize,
    /// Run the oracle on instances with at most this many bounded compositions.
    #[arg(long, default_value_t = XCheckOptions::default().oracle_limit)]
    oracle_limit: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance as `m,n,r`; repeatable.
    #[arg(long = "instance", value_parser = parse_instance, default_value = "365,500,3")]
    instances: Vec<ProblemInstance>,
    /// Comma-separated targets: an algorithm name or `direct-float`. Defaults to all.
    #[arg(long, value_delimiter = ',', value_parser = parse_target)]
    algos: Option<Vec<BenchTarget>>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Per-cell timeout in seconds.
    #[arg(long, default_value_t = bbp_core::tabulator::DEFAULT_TIMEOUT.as_secs())]
    timeout: u64,
    #[arg(long, default_value_t = DEFAULT_BRUTE_LIMIT)]
    brute_limit: u64,
}

fn parse_algo(s: &str) -> Result<AlgorithmId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_gamma(s: &str) -> Result<ExactProbability, String> {
    let g: ExactProbability = s.parse().map_err(|e: Error| e.to_string())?;
    if g.is_zero() || !g.is_probability() {
        return Err(Error::GammaOutOfRange(s.to_string()).to_string());
    }
    Ok(g)
}

fn parse_precision(s: &str) -> Result<FloatPrecision, String> {
    if s == "double" {
        return Ok(FloatPrecision::Double);
    }
    match s.parse::<u32>() {
        Ok(bits) if (1..=4096).contains(&bits) => Ok(FloatPrecision::Extended { bits }),
        _ => Err(format!("expected `double` or a bit count in 1..=4096, got {s:?}")),
    }
}

fn parse_caps(s: &str) -> Result<Caps, String> {
    let bad = || format!("expected a range like 1..10 or a list like 1,2,3, got {s:?}");
    let values: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?);
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(Caps(values))
}

fn parse_table_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_instance(s: &str) -> Result<ProblemInstance, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected m,n,r, got {s:?}"))?;
    match parts[..] {
        [m, n, r] => ProblemInstance::new(m, n, r).map_err(|e| e.to_string()),
        _ => Err(format!("expected m,n,r, got {s:?}")),
    }
}

fn parse_target(s: &str) -> Result<BenchTarget, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn deadline_from(timeout: Option<f64>) -> Result<Deadline, Error> {
    Limits { timeout, brute_limit: 0 }.deadline()
}

fn open_cache(path: &Option<PathBuf>) -> Result<Option<ProbCache>, Error> {
    path.as_ref().map(ProbCache::open).transpose()
}

fn run(cli: Cli, out: &mut impl Write) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Prob(a) => {
            let inst = a.inst.instance()?;
            let res = solve_with(inst, a.mode.algo, a.mode.mode(), a.limits.brute_limit, &a.limits.deadline()?)?;
            let line = match (res.exact, res.approx) {
                (Some(p), _) => match a.format.unwrap_or(ProbFormat::Frac) {
                    ProbFormat::Frac => p.to_string(),
                    ProbFormat::Dec => p.to_decimal(a.digits),
                    ProbFormat::Json => serde_json::json!({
                        "m": inst.m,
                        "n": inst.n,
                        "r": inst.r,
                        "algorithm": res.algorithm.name(),
                        "numerator": p.numer().to_string(),
                        "denominator": p.denom().to_string(),
                    })
                    .to_string(),
                },
                (None, Some(x)) => match a.format.unwrap_or(ProbFormat::Dec) {
                    ProbFormat::Frac => {
                        return Err(Error::Unsupported("float results have no exact fraction; use --format dec or json".into()))
                    }
                    ProbFormat::Dec => format!("{x:.*}", a.digits),
                    ProbFormat::Json => serde_json::json!({
                        "m": inst.m,
                        "n": inst.n,
                        "r": inst.r,
                        "algorithm": res.algorithm.name(),
                        "mode": "float",
                        "value": x.to_string(),
                    })
                    .to_string(),
                },
                (None, None) => unreachable!("every solver returns a value"),
            };
            writeln!(out, "{line}")?;
        }
        Command::Count(a) => {
            let inst = a.inst.instance()?;
            let count = match a.occupied {
                Some(k) => {
                    if a.algo != AlgorithmId::Counting {
                        return Err(Error::Unsupported("--occupied is only available with --algo counting".into()));
                    }
                    count_t(inst.m as i64, inst.n as i64, k as i64, inst.r as i64)
                }
                None => count_with(inst, a.algo, a.limits.brute_limit, &a.limits.deadline()?)?,
            };
            writeln!(out, "{count}")?;
        }
        Command::Nmax(a) => {
            let req = SearchRequest::new(a.days, a.max_per_day, a.gamma.clone()).with_algorithm(a.mode.algo, a.mode.mode());
            let mut cache = open_cache(&a.cache)?;
            let opts = SearchOptions { cache: cache.as_ref(), deadline: deadline_from(a.timeout)? };
            let outcome = find_nmax_with(&req, &opts)?;
            if let Some(cache) = cache.as_mut() {
                cache.extend(outcome.fresh);
                cache.save()?;
            }
            let res = outcome.result;
            match a.format {
                NmaxFormat::Plain => writeln!(out, "{}", res.n_max)?,
                NmaxFormat::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({
                        "m": req.m,
                        "r": req.r,
                        "gamma": req.gamma.to_string(),
                        "algorithm": req.algorithm.name(),
                        "n_max": res.n_max,
                        "p_at_nmax": res.p_at_nmax.to_string(),
                        "p_at_nmax_plus_1": res.p_at_nmax_plus_1.to_string(),
                    })
                )?,
            }
        }
        Command::Table(a) => {
            let spec = TableSpec {
                m_values: a.days,
                r_values: a.max_per_day.0,
                gamma: a.gamma,
                algorithm: a.mode.algo,
                mode: a.mode.mode(),
                output_format: a.format,
            };
            let exec = a.jobs.map_or(Exec::Sequential, |k| Exec::with_jobs(Some(k)));
            let mut cache = open_cache(&a.cache)?;
            let table = generate_table_with(&spec, exec, cache.as_mut())?;
            if let Some(cache) = cache.as_mut() {
                cache.save()?;
            }
            out.write_all(table.render(spec.output_format).as_bytes())?;
        }
        Command::Stirling(a) => {
            let value = match a.max_size {
                Some(0) => return Err(Error::InvalidInstance("--max-size must be at least 1".into())),
                Some(r) => restricted_stirling2(a.objects, a.blocks as i64, r),
                None => stirling2(a.objects, a.blocks as i64),
            };
            writeln!(out, "{value}")?;
        }
        Command::Xcheck(a) => {
            if a.max_days == 0 || a.max_per_day == 0 {
                return Err(Error::InvalidInstance("--max-days and --max-per-day must be at least 1".into()));
            }
            let bounds = XCheckBounds { max_m: a.max_days, max_n: a.max_people, max_r: a.max_per_day };
            let exec = a.jobs.map_or(Exec::Sequential, |k| Exec::with_jobs(Some(k)));
            let report = cross_check_with(bounds, XCheckOptions { exec, oracle_limit: a.oracle_limit })?;
            out.write_all(report.render().as_bytes())?;
            if !report.passed() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Bench(a) => {
            let targets = a.algos.unwrap_or_else(BenchTarget::all);
            if a.reps == 0 {
                return Err(Error::Unsupported("--reps must be positive".into()));
            }
            let report = benchmark_with(&a.instances, &targets, a.reps, Duration::from_secs(a.timeout), a.brute_limit);
            out.write_all(report.render().as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("bbp: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bbp: {e}");
            ExitCode::from(if e.is_refusal() { 2 } else { 1 })
        }
    }
}
