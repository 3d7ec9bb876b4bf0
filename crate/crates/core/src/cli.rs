//! Command-line surface: argument parsing, the five subcommands, and deterministic
//! CSV / JSON rendering.
//!
//! Exit codes: 0 success, 2 usage error, 3 invariant violation, 4 numerical accuracy failure.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::boolfunc::{BoolFunc, Descriptor, MAX_BITS};
use crate::certify::{
    certify_affine, counting_condition, gram_relation_residual, min_cross_distance, pgm_optimality_residual,
    AffineCertificate, Verdict,
};
use crate::ensemble::Overlap;
use crate::error::{Error, Result};
use crate::strategies::{
    affine_closed_form, analyze_with_tolerance, and_greedy_closed_form, maj_greedy_closed_form, sample_greedy,
    StrategyReport, THEOREM_TOLERANCE,
};
use crate::verify::{run_suite, VerifyConfig, VerifyReport, EXHAUSTIVE_MAX_BITS, VERIFY_MAX_BITS};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_ACCURACY: i32 = 4;

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvariantViolation(_) | Error::Inconsistency(_) => EXIT_INVARIANT,
        Error::Accuracy(_) | Error::NoConvergence(_) | Error::NotPsd { .. } | Error::NonFinite => EXIT_ACCURACY,
        _ => EXIT_USAGE,
    }
}

/// Format with 15 significant digits, like C's `%.15g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Overlap values: a single `s`, or `start:stop:steps` giving `steps` evenly spaced
/// points including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct SGrid(pub Vec<Overlap>);

impl SGrid {
    pub fn values(&self) -> &[Overlap] {
        &self.0
    }
}

impl FromStr for SGrid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("bad overlap grid '{text}'"));
        let number = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = text.split(':').collect();
        let values = match parts.as_slice() {
            [one] => vec![number(one)?],
            [start, stop, steps] => {
                let (start, stop) = (number(start)?, number(stop)?);
                let steps: usize = steps.trim().parse().map_err(|_| bad())?;
                if steps == 0 {
                    return Err(bad());
                }
                if steps == 1 {
                    vec![start]
                } else {
                    let h = (stop - start) / (steps - 1) as f64;
                    (0..steps).map(|k| if k + 1 == steps { stop } else { start + h * k as f64 }).collect()
                }
            }
            _ => return Err(bad()),
        };
        values.into_iter().map(Overlap::new).collect::<Result<_>>().map(SGrid)
    }
}

/// The 18-point default grid: 0.05 to 0.85 in steps of 0.05, then 0.9.
pub fn default_grid() -> SGrid {
    let values = (1..=17).map(|k| k as f64 / 20.0).chain([0.9]);
    SGrid(values.map(|s| Overlap::new(s).expect("grid inside (0,1)")).collect())
}

/// Inclusive arity range: `n`, `lo..hi` or `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn single(n: usize) -> Self {
        NRange { lo: n, hi: n }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }

    fn only(self) -> Result<usize> {
        if self.lo == self.hi {
            Ok(self.lo)
        } else {
            Err(Error::Precondition(format!("expected a single n, got {self}")))
        }
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl FromStr for NRange {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("bad n or n-range '{text}'"));
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let (lo, hi) = match text.split_once("..").or_else(|| text.split_once(':')) {
            Some((a, b)) => (int(a)?, int(b)?),
            None => (int(text)?, int(text)?),
        };
        if lo == 0 || lo > hi || hi > MAX_BITS {
            return Err(bad());
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Sweep,
    Enumerate,
    Verify,
    Sample,
}

/// Fully parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub descriptor: Option<Descriptor>,
    pub n: Option<NRange>,
    pub s: Option<SGrid>,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            descriptor: None,
            n: None,
            s: None,
            trials: 100_000,
            seed: 0,
            out: None,
            format: None,
            tol: THEOREM_TOLERANCE,
        }
    }

    fn descriptor(&self) -> Result<&Descriptor> {
        self.descriptor.as_ref().ok_or_else(|| Error::Precondition("--fn is required".into()))
    }

    fn single_function(&self) -> Result<BoolFunc> {
        let desc = self.descriptor()?;
        let n = self.n.map(NRange::only).transpose()?;
        BoolFunc::from_descriptor(desc, n)
    }

    fn grid_or(&self, fallback: impl FnOnce() -> SGrid) -> SGrid {
        self.s.clone().unwrap_or_else(fallback)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qbool",
    version,
    about = "Greedy, PGM and Helstrom success probabilities for Boolean functions of qubit-encoded data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Report, affine certificate and residuals for one function.
    Analyze(CommonArgs),
    /// One row per (n, s) for a function family.
    Sweep(CommonArgs),
    /// Classify every truth table at one n (n <= 4).
    Enumerate(CommonArgs),
    /// Run the named invariant checks up to an n cap.
    Verify(CommonArgs),
    /// Monte Carlo estimate of the greedy success probability.
    Sample(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// const0|const1|and|or|maj|parity[:<bitmask>]|raw:<n>:<hex>
    #[arg(long = "fn", value_name = "DESCRIPTOR")]
    pub function: Option<String>,
    /// Arity: n, lo..hi or lo:hi
    #[arg(long)]
    pub n: Option<String>,
    /// Overlap: s or start:stop:steps
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tolerance for theorem identities
    #[arg(long, default_value_t = THEOREM_TOLERANCE)]
    pub tol: f64,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (command, a) = match self.command {
            CliCommand::Analyze(a) => (Command::Analyze, a),
            CliCommand::Sweep(a) => (Command::Sweep, a),
            CliCommand::Enumerate(a) => (Command::Enumerate, a),
            CliCommand::Verify(a) => (Command::Verify, a),
            CliCommand::Sample(a) => (Command::Sample, a),
        };
        if !(a.tol.is_finite() && a.tol > 0.0) {
            return Err(Error::Precondition(format!("--tol must be positive, got {}", a.tol)));
        }
        Ok(RunConfig {
            command,
            descriptor: a.function.as_deref().map(str::parse).transpose()?,
            n: a.n.as_deref().map(str::parse).transpose()?,
            s: a.s.as_deref().map(str::parse).transpose()?,
            trials: a.trials,
            seed: a.seed,
            out: a.out,
            format: a.format,
            tol: a.tol,
        })
    }
}

/// Rendered command output plus its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub status: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, status: EXIT_OK }
    }
}

/// Parse `args` (including the program name), run, write output, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = cli.into_config().and_then(|cfg| run(&cfg).map(|outcome| (cfg, outcome)));
    match result {
        Ok((cfg, outcome)) => match emit(&cfg, &outcome.text) {
            Ok(()) => outcome.status,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Analyze => run_analyze(cfg).map(Outcome::ok),
        Command::Sweep => run_sweep(cfg).map(Outcome::ok),
        Command::Enumerate => run_enumerate(cfg),
        Command::Verify => run_verify(cfg),
        Command::Sample => run_sample(cfg).map(Outcome::ok),
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable document");
    text.push('\n');
    text
}

fn csv(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    rows.into_iter().map(|r| r.join(",") + "\n").collect()
}

fn optional_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
struct Residuals {
    gram_relation: Option<f64>,
    pgm_optimality: f64,
}

#[derive(Debug, Clone, Serialize)]
struct AnalyzePoint {
    s: Overlap,
    report: StrategyReport,
    residuals: Residuals,
}

fn analyze_point(f: &BoolFunc, s: Overlap, tol: f64) -> Result<AnalyzePoint> {
    let report = analyze_with_tolerance(f, s, tol)?;
    let gram_relation = if f.is_constant() { None } else { Some(gram_relation_residual(f, s)?) };
    let residuals = Residuals { gram_relation, pgm_optimality: pgm_optimality_residual(f, s)? };
    Ok(AnalyzePoint { s, report, residuals })
}

/// Strategy report, affine certificate and residuals for one function at each requested `s`.
/// JSON by default; CSV gives one row per `s`.
pub fn run_analyze(cfg: &RunConfig) -> Result<String> {
    let f = cfg.single_function()?;
    let grid = cfg.s.clone().ok_or_else(|| Error::Precondition("--s is required".into()))?;
    let certificate = certify_affine(&f)?;
    let points: Vec<AnalyzePoint> =
        grid.values().par_iter().map(|&s| analyze_point(&f, s, cfg.tol)).collect::<Result<_>>()?;
    let min_distance = if f.is_constant() { None } else { Some(min_cross_distance(&f)?) };

    if cfg.format == Some(Format::Csv) {
        let header = "n,s,p_greedy,p_global,p_pgm,gap,bk_slack,gram_relation,pgm_optimality,verdict";
        let verdict = verdict_name(&certificate);
        let rows = points.iter().map(|p| {
            let r = &p.report;
            vec![
                f.n().to_string(),
                format_float(p.s.value()),
                format_float(r.p_greedy),
                format_float(r.p_global),
                format_float(r.p_pgm),
                format_float(r.gap),
                format_float(r.bk_slack),
                optional_float(p.residuals.gram_relation),
                format_float(p.residuals.pgm_optimality),
                verdict.to_string(),
            ]
        });
        return Ok(csv(std::iter::once(vec![header.to_string()]).chain(rows)));
    }

    let document = json!({
        "schema": SCHEMA_VERSION,
        "function": {
            "descriptor": cfg.descriptor()?.to_string(),
            "n": f.n(),
            "truth_table": f.to_hex(),
        },
        "certificate": certificate,
        "min_cross_distance": min_distance,
        "points": points,
    });
    Ok(to_json(&document))
}

fn verdict_name(c: &AffineCertificate) -> &'static str {
    match c.verdict {
        Verdict::Affine => "AFFINE",
        Verdict::NotAffine => "NOT_AFFINE",
    }
}

/// Closed-form greedy value for the families that have one.
pub fn closed_form(desc: &Descriptor, f: &BoolFunc, s: Overlap) -> Option<f64> {
    match desc {
        Descriptor::And => Some(and_greedy_closed_form(f.n(), s)),
        Descriptor::Maj => Some(maj_greedy_closed_form((f.n() - 1) / 2, s)),
        Descriptor::Parity(_) => f.is_affine().map(|a| affine_closed_form(a.m, s)),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    n: usize,
    s: Overlap,
    #[serde(flatten)]
    report: StrategyReport,
    closed_form: Option<f64>,
}

pub const SWEEP_HEADER: &str = "n,s,p_greedy,p_global,p_pgm,gap,bk_slack,closed_form";

/// One row per `(n, s)`, ordered by `n` then `s`. Even `n` are skipped for `maj`.
pub fn run_sweep(cfg: &RunConfig) -> Result<String> {
    let desc = cfg.descriptor()?;
    let range = match (cfg.n, desc.arity()) {
        (Some(r), _) => r,
        (None, Some(a)) => NRange::single(a),
        (None, None) => return Err(Error::Precondition("--n is required".into())),
    };
    let grid = cfg.grid_or(default_grid);
    let mut functions = Vec::new();
    for n in range.iter() {
        if *desc == Descriptor::Maj && n % 2 == 0 && range.lo != range.hi {
            continue;
        }
        functions.push(BoolFunc::from_descriptor(desc, Some(n))?);
    }
    let cells: Vec<(&BoolFunc, Overlap)> =
        functions.iter().flat_map(|f| grid.values().iter().map(move |&s| (f, s))).collect();
    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(f, s)| {
            let report = analyze_with_tolerance(f, s, cfg.tol)?;
            Ok(SweepRow { n: f.n(), s, report, closed_form: closed_form(desc, f, s) })
        })
        .collect::<Result<_>>()?;

    if cfg.format == Some(Format::Json) {
        return Ok(to_json(&json!({ "schema": SCHEMA_VERSION, "descriptor": desc.to_string(), "rows": rows })));
    }
    let body = rows.iter().map(|r| {
        vec![
            r.n.to_string(),
            format_float(r.s.value()),
            format_float(r.report.p_greedy),
            format_float(r.report.p_global),
            format_float(r.report.p_pgm),
            format_float(r.report.gap),
            format_float(r.report.bk_slack),
            optional_float(r.closed_form),
        ]
    });
    Ok(csv(std::iter::once(vec![SWEEP_HEADER.to_string()]).chain(body)))
}

/// The three overlaps used when `enumerate` gets no `--s`.
pub fn enumerate_grid() -> SGrid {
    SGrid([0.3, 0.5, 0.7].into_iter().map(|s| Overlap::new(s).expect("grid inside (0,1)")).collect())
}

#[derive(Debug, Clone, Serialize)]
struct EnumerateRow {
    truth_table: String,
    class: crate::certify::Balance,
    affine: Verdict,
    counting: bool,
    gaps: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct EnumerateSummary {
    functions: usize,
    affine: usize,
    expected_affine: usize,
    counting_holds: usize,
    /// Smallest gap over non-affine functions and grid points.
    min_nonaffine_gap: Option<f64>,
    /// Largest absolute gap over affine functions and grid points.
    max_affine_gap: f64,
}

/// Classify every truth table at one `n ≤ 4`. The status is an invariant violation if the
/// affine count differs from `2^{n+1}`.
pub fn run_enumerate(cfg: &RunConfig) -> Result<Outcome> {
    let n = cfg.n.ok_or_else(|| Error::Precondition("--n is required".into()))?.only()?;
    if n > EXHAUSTIVE_MAX_BITS {
        return Err(Error::Precondition(format!("enumerate supports n <= {EXHAUSTIVE_MAX_BITS}, got {n}")));
    }
    let grid = cfg.grid_or(enumerate_grid);
    let rows: Vec<EnumerateRow> = (0..1u64 << (1 << n))
        .into_par_iter()
        .map(|bits| {
            let f = BoolFunc::from_table_bits(n, bits)?;
            let certificate = certify_affine(&f)?;
            let gaps = grid
                .values()
                .iter()
                .map(|&s| analyze_with_tolerance(&f, s, cfg.tol).map(|r| r.gap))
                .collect::<Result<_>>()?;
            Ok(EnumerateRow {
                truth_table: f.to_hex(),
                class: crate::certify::balanced_or_constant(&f),
                affine: certificate.verdict,
                counting: counting_condition(&f).is_none(),
                gaps,
            })
        })
        .collect::<Result<_>>()?;

    let affine = rows.iter().filter(|r| r.affine == Verdict::Affine).count();
    let gaps_of = |want: Verdict| rows.iter().filter(move |r| r.affine == want).flat_map(|r| r.gaps.iter().copied());
    let summary = EnumerateSummary {
        functions: rows.len(),
        affine,
        expected_affine: 1 << (n + 1),
        counting_holds: rows.iter().filter(|r| r.counting).count(),
        min_nonaffine_gap: gaps_of(Verdict::NotAffine).reduce(f64::min),
        max_affine_gap: gaps_of(Verdict::Affine).map(f64::abs).fold(0.0, f64::max),
    };
    let status = if summary.affine == summary.expected_affine { EXIT_OK } else { EXIT_INVARIANT };

    let text = if cfg.format == Some(Format::Json) {
        to_json(&json!({
            "schema": SCHEMA_VERSION,
            "n": n,
            "s": grid.values(),
            "rows": rows,
            "summary": summary,
        }))
    } else {
        let mut header = vec!["truth_table".to_string(), "class".into(), "affine".into(), "counting".into()];
        header.extend(grid.values().iter().map(|s| format!("gap_s{}", format_float(s.value()))));
        let body = rows.iter().map(|r| {
            let mut row = vec![
                r.truth_table.clone(),
                format!("{:?}", r.class).to_uppercase(),
                if r.affine == Verdict::Affine { "AFFINE" } else { "NOT_AFFINE" }.to_string(),
                if r.counting { "HOLDS" } else { "FAILS" }.to_string(),
            ];
            row.extend(r.gaps.iter().map(|&g| format_float(g)));
            row
        });
        let mut text = csv(std::iter::once(header).chain(body));
        text.push_str(&format!(
            "# functions={} affine={} expected_affine={} counting_holds={} min_nonaffine_gap={} max_affine_gap={}\n",
            summary.functions,
            summary.affine,
            summary.expected_affine,
            summary.counting_holds,
            optional_float(summary.min_nonaffine_gap),
            format_float(summary.max_affine_gap),
        ));
        text
    };
    Ok(Outcome { text, status })
}

/// Run the named invariant checks for every `n` up to the cap (default 4).
pub fn run_verify(cfg: &RunConfig) -> Result<Outcome> {
    let max_n = match cfg.n {
        Some(r) => r.hi,
        None => EXHAUSTIVE_MAX_BITS,
    };
    if max_n > VERIFY_MAX_BITS {
        return Err(Error::Precondition(format!("verify supports n <= {VERIFY_MAX_BITS}, got {max_n}")));
    }
    let mut suite = VerifyConfig { max_n, tol: cfg.tol, seed: cfg.seed, ..VerifyConfig::default() };
    if let Some(grid) = &cfg.s {
        suite.grid = grid.values().to_vec();
    }
    let report = run_suite(&suite)?;
    let status = if report.passed() { EXIT_OK } else { EXIT_INVARIANT };
    Ok(Outcome { text: render_verify(&report, cfg.format), status })
}

fn render_verify(report: &VerifyReport, format: Option<Format>) -> String {
    match format {
        Some(Format::Json) => {
            to_json(&json!({ "schema": SCHEMA_VERSION, "report": report, "passed": report.passed() }))
        }
        Some(Format::Csv) => {
            let header = ["check", "passed", "worst", "comparison", "bound", "samples"].map(String::from).to_vec();
            let body = report.checks.iter().map(|c| {
                vec![
                    c.name.to_string(),
                    c.passed.to_string(),
                    optional_float(c.worst),
                    c.comparison.to_string(),
                    format_float(c.bound),
                    c.samples.to_string(),
                ]
            });
            csv(std::iter::once(header).chain(body))
        }
        None => {
            let mut text: String = report
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "{} {:<34} worst={} {} {} samples={}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.worst.map(format_float).unwrap_or_else(|| "-".into()),
                        c.comparison,
                        format_float(c.bound),
                        c.samples
                    )
                })
                .collect();
            let failed = report.failures().count();
            text.push_str(&format!("{} checks, {failed} failed, n <= {}\n", report.checks.len(), report.max_n));
            text
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SampleRecord {
    n: usize,
    s: Overlap,
    trials: u64,
    seed: u64,
    successes: u64,
    frequency: f64,
    p_greedy: f64,
    /// `(frequency − p_greedy) / σ` with `σ = √(p(1−p)/trials)`; zero when `σ = 0`.
    z_score: f64,
}

/// Monte Carlo greedy estimate for one function at each requested `s`.
pub fn run_sample(cfg: &RunConfig) -> Result<String> {
    let f = cfg.single_function()?;
    let grid = cfg.s.clone().ok_or_else(|| Error::Precondition("--s is required".into()))?;
    let records: Vec<SampleRecord> = grid
        .values()
        .iter()
        .map(|&s| {
            let outcome = sample_greedy(&f, s, cfg.trials, cfg.seed)?;
            let p = crate::strategies::greedy_prob_fast(&f, s);
            let sigma = (p * (1.0 - p) / cfg.trials as f64).sqrt();
            let z_score = if sigma > 0.0 { (outcome.frequency - p) / sigma } else { 0.0 };
            Ok(SampleRecord {
                n: f.n(),
                s,
                trials: outcome.trials,
                seed: cfg.seed,
                successes: outcome.successes,
                frequency: outcome.frequency,
                p_greedy: p,
                z_score,
            })
        })
        .collect::<Result<_>>()?;
    if cfg.format == Some(Format::Json) {
        return Ok(to_json(
            &json!({ "schema": SCHEMA_VERSION, "descriptor": cfg.descriptor()?.to_string(), "samples": records }),
        ));
    }
    let header = "n,s,trials,seed,successes,frequency,p_greedy,z_score".split(',').map(String::from).collect();
    let body = records.iter().map(|r| {
        vec![
            r.n.to_string(),
            format_float(r.s.value()),
            r.trials.to_string(),
            r.seed.to_string(),
            r.successes.to_string(),
            format_float(r.frequency),
            format_float(r.p_greedy),
            format_float(r.z_score),
        ]
    });
    Ok(csv(std::iter::once(header).chain(body)))
}
