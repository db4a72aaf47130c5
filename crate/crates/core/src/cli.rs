//! The `gll` command-line front end.
//!
//! Commands: `norm`, `verify`, `operator`, `report`. Settings come from an
//! optional config file, then the `GLL_SEED` environment variable, then
//! flags, each overriding the one before.
//!
//! # Config format
//!
//! A flat `key = value` file with `[section]` headers. `#` and `;` start
//! comment lines. Unknown sections or keys are errors.
//!
//! ```text
//! [grid]
//! M = 40
//! J = 16
//!
//! [uniform_grid]
//! n_cells = 4096
//!
//! [corpus]
//! seed = 42
//! random_steps = 24
//! indicators = 6
//! power_log = 8
//! spikes = 6
//!
//! [run]
//! suites = all            # or a comma-separated list of suite names
//! output_dir = out
//! formats = csv,json
//! stability = true
//! ```
//!
//! # Exit codes
//!
//! 0 success, 1 a suite failed, 2 usage or input error, 3 a requested norm
//! is divergent.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{self, SweepRow};
use crate::norms::{NormResult, SpaceSpec};
use crate::operators::{boundedness_ratio, KernelSpec, Operator, UniformGrid};
use crate::rearrange::{GeometricGrid, StepFunction};
use crate::report::InequalityReport;
use crate::verify::{
    generate_corpus, run_inequality, select_suites, suite_names, CorpusItem, CorpusSpec, Fixtures, RunOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGENT: i32 = 3;

/// Environment variable overriding the corpus seed.
pub const SEED_ENV: &str = "GLL_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

impl Formats {
    pub const ALL: Formats = Formats { csv: true, json: true };
}

impl FromStr for Formats {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut f = Formats::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                other => return Err(Error::InvalidParameter(format!("unknown output format `{other}`"))),
            }
        }
        if !(f.csv || f.json) {
            return Err(Error::InvalidParameter("no output format selected".into()));
        }
        Ok(f)
    }
}

impl std::fmt::Display for Formats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<&str> = [(self.csv, "csv"), (self.json, "json")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Everything a run needs besides the command's own arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GeometricGrid,
    pub uniform_grid: UniformGrid,
    pub corpus: CorpusSpec,
    /// Suite names, or `["all"]`.
    pub suites: Vec<String>,
    pub output_dir: PathBuf,
    pub formats: Formats,
    pub stability: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GeometricGrid::default(),
            uniform_grid: UniformGrid::default(),
            corpus: CorpusSpec::default(),
            suites: vec!["all".into()],
            output_dir: PathBuf::from("out"),
            formats: Formats::ALL,
            stability: true,
        }
    }
}

fn parse_value<T: FromStr>(v: &str, line: usize, key: &str) -> Result<T> {
    v.parse().map_err(|_| Error::parse(line, format!("invalid value `{v}` for `{key}`")))
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

impl RunConfig {
    /// Parses the config format on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let (mut m, mut j) = (cfg.grid.octaves(), cfg.grid.subdivisions());
        let mut n_cells = cfg.uniform_grid.n_cells();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if content.is_empty() || content.starts_with(';') {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(line, "unterminated section header"))?
                    .trim();
                if !["grid", "uniform_grid", "corpus", "run"].contains(&name) {
                    return Err(Error::parse(line, format!("unknown section `{name}`")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::parse(line, format!("expected key = value, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let counts = &mut cfg.corpus.counts;
            match (section.as_str(), key) {
                ("grid", "M") => m = parse_value(value, line, key)?,
                ("grid", "J") => j = parse_value(value, line, key)?,
                ("uniform_grid", "n_cells") => n_cells = parse_value(value, line, key)?,
                ("corpus", "seed") => cfg.corpus.seed = parse_value(value, line, key)?,
                ("corpus", "random_steps") => counts.random_steps = parse_value(value, line, key)?,
                ("corpus", "indicators") => counts.indicators = parse_value(value, line, key)?,
                ("corpus", "power_log") => counts.power_log = parse_value(value, line, key)?,
                ("corpus", "spikes") => counts.spikes = parse_value(value, line, key)?,
                ("run", "suites") => cfg.suites = split_list(value),
                ("run", "output_dir") => cfg.output_dir = PathBuf::from(value),
                ("run", "formats") => {
                    cfg.formats = value.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?
                }
                ("run", "stability") => cfg.stability = parse_value(value, line, key)?,
                ("", _) => return Err(Error::parse(line, format!("`{key}` appears before any section"))),
                (s, k) => return Err(Error::parse(line, format!("unknown key `{k}` in [{s}]"))),
            }
        }
        cfg.grid = GeometricGrid::new(m, j).map_err(|e| Error::parse(0, e.to_string()))?;
        cfg.uniform_grid = UniformGrid::new(n_cells).map_err(|e| Error::parse(0, e.to_string()))?;
        Ok(cfg)
    }

    /// Renders the config in the format [`RunConfig::parse`] reads.
    pub fn to_text(&self) -> String {
        let c = self.corpus.counts;
        let mut s = String::new();
        let _ = writeln!(s, "[grid]\nM = {}\nJ = {}\n", self.grid.octaves(), self.grid.subdivisions());
        let _ = writeln!(s, "[uniform_grid]\nn_cells = {}\n", self.uniform_grid.n_cells());
        let _ = writeln!(
            s,
            "[corpus]\nseed = {}\nrandom_steps = {}\nindicators = {}\npower_log = {}\nspikes = {}\n",
            self.corpus.seed, c.random_steps, c.indicators, c.power_log, c.spikes
        );
        let _ = writeln!(
            s,
            "[run]\nsuites = {}\noutput_dir = {}\nformats = {}\nstability = {}",
            self.suites.join(","),
            self.output_dir.display(),
            self.formats,
            self.stability
        );
        s
    }

    /// Checks suite names and that the output directory can be created.
    pub fn validate(&self) -> Result<()> {
        select_suites(&self.suites)?;
        std::fs::create_dir_all(&self.output_dir)?;
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "gll", version, about = "Grand Lorentz quasinorms and inequality suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate norms of one function.
    Norm(NormArgs),
    /// Run inequality suites on the seeded corpus.
    Verify(VerifyArgs),
    /// Resolution sweep of the power-logarithmic Riesz operator.
    Operator(OperatorArgs),
    /// Concatenate JSON suite reports into one summary CSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Octaves of the geometric grid.
    #[arg(long = "M", alias = "octaves")]
    m: Option<u32>,
    /// Cells per octave.
    #[arg(long = "J", alias = "subdivisions")]
    j: Option<u32>,
    /// Cells of the uniform grid used by operators.
    #[arg(long)]
    n_cells: Option<usize>,
    /// Corpus seed; overrides the config and GLL_SEED.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "out", alias = "output-dir")]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct NormArgs {
    /// `powerlog:p=..,beta=..`, `indicator:s=..`, `constant:c=..`, `zero`,
    /// or a `breakpoint,value` CSV path.
    #[arg(long = "fn")]
    function: String,
    /// A space such as `grand-lorentz:p=2,q=1,theta=1`; repeatable.
    #[arg(long = "space", required = true)]
    spaces: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated suite names, or `all`.
    #[arg(long)]
    suites: Option<String>,
    /// Skip the doubled-resolution stability pass.
    #[arg(long)]
    no_stability: bool,
    /// Regression fixtures file; defaults to the built-in pins.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// List the built-in suite names and exit.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct OperatorArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    /// Log exponent of the kernel; defaults to `theta1 - theta0`.
    #[arg(long)]
    theta: Option<f64>,
    /// Aggrandisation exponent of the source space.
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// Aggrandisation exponent of the target space; defaults to `theta0 + theta`.
    #[arg(long)]
    theta1: Option<f64>,
    /// Secondary index of both spaces; defaults to `p`.
    #[arg(long)]
    tau: Option<f64>,
    /// Smallest and largest `log2(n_cells)` of the sweep.
    #[arg(long, default_value_t = 10)]
    min_log2: u32,
    #[arg(long, default_value_t = 13)]
    max_log2: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Directory holding JSON suite reports.
    #[arg(long)]
    input: PathBuf,
    /// Summary CSV path; defaults to `<input>/summary.csv`.
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit(EXIT_USAGE, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Norm(a) => cmd_norm(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Operator(a) => cmd_operator(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            eprintln!("gll: {msg}");
            code
        }
    }
}

/// Config file, then `GLL_SEED`, then flags.
fn resolve(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("cannot read config `{}`: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Ok(seed) = std::env::var(SEED_ENV) {
        cfg.corpus.seed = seed
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV} = `{seed}` is not an unsigned integer")))?;
    }
    if let Some(seed) = common.seed {
        cfg.corpus.seed = seed;
    }
    if common.m.is_some() || common.j.is_some() {
        cfg.grid = GeometricGrid::new(
            common.m.unwrap_or(cfg.grid.octaves()),
            common.j.unwrap_or(cfg.grid.subdivisions()),
        )?;
    }
    if let Some(n) = common.n_cells {
        cfg.uniform_grid = UniformGrid::new(n)?;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(f) = &common.format {
        cfg.formats = f.parse()?;
    }
    Ok(cfg)
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<(), Exit> {
    let path = dir.join(name);
    formats::write_atomic(&path, contents.as_bytes())
        .map_err(|e| usage(format!("cannot write `{}`: {e}", path.display())))
}

/// One row of `norms.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub space: SpaceSpec,
    pub result: NormResult,
}

fn cmd_norm(a: NormArgs) -> Result<i32, Exit> {
    let cfg = resolve(&a.common)?;
    let source = formats::parse_function(&a.function)?;
    let specs: Vec<SpaceSpec> = a.spaces.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let f = CorpusItem { id: a.function.clone(), source }.rearrangement(cfg.grid)?;
    let mut rows = Vec::new();
    for spec in specs {
        let result = match spec.evaluate(&f) {
            Ok(r) => r,
            Err(Error::TailNotConverged { relative, .. }) => divergent(&cfg, relative),
            Err(Error::ObjectiveDiverged) => divergent(&cfg, f64::INFINITY),
            Err(e) => return Err(e.into()),
        };
        rows.push((spec, result));
    }
    std::fs::create_dir_all(&cfg.output_dir).map_err(Error::from)?;
    if cfg.formats.csv {
        write_output(&cfg.output_dir, "norms.csv", &formats::norms_to_csv(&rows)?)?;
    }
    if cfg.formats.json {
        let json_rows: Vec<NormRow> = rows.iter().map(|(space, result)| NormRow { space: *space, result: *result }).collect();
        write_output(&cfg.output_dir, "norms.json", &serde_json::to_string_pretty(&json_rows).map_err(Error::from)?)?;
    }
    let width = rows.iter().map(|(s, _)| s.to_string().len()).max().unwrap_or(0);
    for (spec, r) in &rows {
        let eps = r.eps_star.map_or_else(|| "-".to_string(), |e| format!("{e:.6}"));
        let flag = if r.is_finite() { "" } else { "  divergent" };
        println!("{:<width$}  {:>14.9}  eps*={eps}{flag}", spec.to_string(), r.value);
    }
    if rows.iter().any(|(_, r)| !r.is_finite()) {
        eprintln!("gll: divergent norm (+inf) in the results");
        return Ok(EXIT_DIVERGENT);
    }
    Ok(EXIT_OK)
}

fn divergent(cfg: &RunConfig, tail_rel: f64) -> NormResult {
    NormResult {
        value: f64::INFINITY,
        eps_star: None,
        at_boundary: false,
        tail_rel,
        grid: cfg.grid.descriptor(),
        restricted_value: None,
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<i32, Exit> {
    if a.list {
        for name in suite_names() {
            println!("{name}");
        }
        return Ok(EXIT_OK);
    }
    let mut cfg = resolve(&a.common)?;
    if let Some(s) = &a.suites {
        cfg.suites = split_list(s);
    }
    if a.no_stability {
        cfg.stability = false;
    }
    if cfg.suites.is_empty() {
        return Err(usage("no suites selected"));
    }
    cfg.validate()?;
    let suites = select_suites(&cfg.suites)?;
    let fixtures = match &a.fixtures {
        Some(p) => Fixtures::load(p)?,
        None => Fixtures::builtin(),
    };
    let corpus = generate_corpus(&cfg.corpus)?;
    let opts = RunOptions {
        grid: cfg.grid,
        uniform: cfg.uniform_grid,
        stability: cfg.stability,
        fixtures,
        corpus: Some(cfg.corpus.clone()),
    };

    // Suites run on a small worker pool; results keep the selection order.
    let results: Vec<Mutex<Option<Result<InequalityReport>>>> = suites.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(suites.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = suites.get(i) else { break };
                let r = run_inequality(spec, &corpus, &opts);
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });

    let mut failed = Vec::new();
    for (spec, slot) in suites.iter().zip(results) {
        let outcome = slot.into_inner().unwrap().expect("every suite ran");
        match outcome {
            Ok(report) => {
                if cfg.formats.json {
                    write_output(&cfg.output_dir, &format!("{}.json", report.name), &report.to_json().map_err(Error::from)?)?;
                }
                if cfg.formats.csv {
                    write_output(&cfg.output_dir, &format!("{}.csv", report.name), &report.to_csv().map_err(Error::from)?)?;
                }
                println!(
                    "{:<26} {:<4} max={:.6} min={:.6} samples={} skipped={}",
                    report.name,
                    report.verdict,
                    report.max_ratio,
                    report.min_ratio,
                    report.ratios.len(),
                    report.skipped
                );
                if !report.passed() {
                    for note in &report.notes {
                        eprintln!("gll: {}: {note}", report.name);
                    }
                    failed.push(report.name);
                }
            }
            Err(e) => {
                eprintln!("gll: {}: {e}", spec.name);
                failed.push(spec.name.clone());
            }
        }
    }
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!("gll: failing suites: {}", failed.join(","));
        Ok(EXIT_SUITE_FAILED)
    }
}

/// Tolerance on `α = 1/p - 1/q`.
const ALPHA_TOL: f64 = 1e-9;

fn cmd_operator(a: OperatorArgs) -> Result<i32, Exit> {
    let cfg = resolve(&a.common)?;
    if !(a.p > 1.0 && a.p.is_finite() && a.q > a.p) {
        return Err(usage(format!("need 1 < p < q, got p = {}, q = {}", a.p, a.q)));
    }
    if (a.alpha - (1.0 / a.p - 1.0 / a.q)).abs() > ALPHA_TOL {
        return Err(usage(format!(
            "alpha = {} but 1/p - 1/q = {} for p = {}, q = {}",
            a.alpha,
            1.0 / a.p - 1.0 / a.q,
            a.p,
            a.q
        )));
    }
    let theta1 = a.theta1.unwrap_or(a.theta0 + a.theta.unwrap_or(0.0));
    let theta = a.theta.unwrap_or(theta1 - a.theta0);
    if (theta - (theta1 - a.theta0)).abs() > ALPHA_TOL {
        return Err(usage(format!("theta = {theta} but theta1 - theta0 = {}", theta1 - a.theta0)));
    }
    if a.min_log2 < 1 || a.min_log2 > a.max_log2 || a.max_log2 > 20 {
        return Err(usage(format!("bad sweep range 2^{}..2^{}", a.min_log2, a.max_log2)));
    }
    let kernel = KernelSpec::new(a.alpha, theta)?;
    let tau = a.tau.unwrap_or(a.p);
    let space = |t: f64, p: f64| {
        if t == 0.0 {
            SpaceSpec::lorentz(p, tau)
        } else {
            SpaceSpec::grand_lorentz(p, tau, t)
        }
    };
    let (source, target) = (space(a.theta0, a.p), space(theta1, a.q));
    source.validate()?;
    target.validate()?;
    let corpus = generate_corpus(&cfg.corpus)?;

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for k in a.min_log2..=a.max_log2 {
        let uniform = UniformGrid::new(1 << k)?;
        let steps: Vec<(String, StepFunction)> = corpus
            .iter()
            .map(|item| Ok((item.id.clone(), item.step_function(cfg.grid, uniform.n_cells())?)))
            .collect::<Result<_>>()?;
        let report = boundedness_ratio(Operator::Riesz(kernel), &source, &target, &steps, cfg.grid, uniform)?;
        rows.push(SweepRow {
            n_cells: uniform.n_cells(),
            max_ratio: report.max_ratio,
            argmax: report.argmax.clone().unwrap_or_default(),
        });
        reports.push(report);
    }
    std::fs::create_dir_all(&cfg.output_dir).map_err(Error::from)?;
    let fixtures = Fixtures::builtin();
    let name = riesz_sweep_fixture(a.alpha, a.p, a.q, tau, a.theta0, theta1);
    for (row, report) in rows.iter().zip(&reports) {
        let uniform = UniformGrid::new(row.n_cells)?;
        if let Some(pin) = fixtures.0.get(&Fixtures::key(&name, cfg.grid, uniform, &cfg.corpus)) {
            eprintln!(
                "gll: n_cells = {}: max ratio {} vs pinned {pin} ({:+.2}%)",
                report.n_cells.unwrap_or(row.n_cells),
                row.max_ratio,
                100.0 * (row.max_ratio / pin - 1.0)
            );
        }
    }
    let csv = formats::sweep_to_csv(&rows)?;
    write_output(&cfg.output_dir, "operator_sweep.csv", &csv)?;
    if cfg.formats.json {
        write_output(
            &cfg.output_dir,
            "operator_sweep.json",
            &serde_json::to_string_pretty(&reports).map_err(Error::from)?,
        )?;
    }
    print!("{csv}");
    if rows.iter().any(|r| !r.max_ratio.is_finite()) {
        eprintln!("gll: non-finite boundedness ratio in the sweep");
        return Ok(EXIT_SUITE_FAILED);
    }
    Ok(EXIT_OK)
}

/// Fixture name under which a Riesz resolution sweep is pinned.
pub fn riesz_sweep_fixture(alpha: f64, p: f64, q: f64, tau: f64, theta0: f64, theta1: f64) -> String {
    format!("riesz_sweep:alpha={alpha},p={p},q={q},tau={tau},theta0={theta0},theta1={theta1}")
}

fn cmd_report(a: ReportArgs) -> Result<i32, Exit> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&a.input)
        .map_err(|e| usage(format!("cannot read `{}`: {e}", a.input.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut reports = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(Error::from)?;
        match InequalityReport::from_json(&text) {
            Ok(r) => reports.push(r),
            Err(_) => eprintln!("gll: skipping `{}`: not a suite report", p.display()),
        }
    }
    if reports.is_empty() {
        return Err(usage(format!("no suite reports in `{}`", a.input.display())));
    }
    let out = a.out.unwrap_or_else(|| a.input.join("summary.csv"));
    let csv = formats::summary_csv(&reports)?;
    formats::write_atomic(&out, csv.as_bytes()).map_err(|e| usage(format!("cannot write `{}`: {e}", out.display())))?;
    print!("{csv}");
    Ok(EXIT_OK)
}

/// The default config as text, for `default.cfg`-style files.
pub fn default_config_text() -> String {
    RunConfig::default().to_text()
}
