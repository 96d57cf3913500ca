//! The `fraccalc` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 invariant violation (an operator
//! rejected its input or a computation failed), 4 a check or probe failed.

use crate::campaign::{
    run_campaign, sweep_panel, write_outputs, CampaignConfig, CheckName, S_TO_0_DEFAULT, S_TO_1_DEFAULT,
};
use crate::corpus::{sample, AnalyticFunction};
use crate::derivative::{frac_deriv, DerivKind};
use crate::error::FracError;
use crate::grid::{Grid, GridFunction, Interval, Side};
use crate::integral::{frac_int, frac_int_measure};
use crate::ladder::Ladder;
use crate::measure::{sweep_s_to_1, BVFunction, RadonMeasure};
use crate::norms::{
    gagliardo_ladder, hardy_quotient, holder_seminorm, lp_norm, rl_sobolev_ladder, weak_lp_quasinorm, NormKind,
    NormReport,
};
use crate::order::FracOrder;
use crate::probes::{run_probe, ProbeCase, ProbeConfig};
use crate::report::{is_decreasing, Verdict, VerificationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fraccalc", version, about = "Riemann-Liouville fractional calculus on an interval")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional integral of a corpus function or a measure, as CSV.
    FracInt(FracIntArgs),
    /// Fractional derivative of a corpus function, as CSV.
    FracDeriv(FracDerivArgs),
    /// Run verification checks and print their reports as JSON.
    Verify(VerifyArgs),
    /// Limits in the order: s -> 0 or s -> 1.
    Sweep(SweepArgs),
    /// Divergence probes behind the sharpness of the embeddings.
    Probe(ProbeArgs),
    /// Norms and seminorms of a corpus function, as JSON.
    Norm(NormArgs),
    /// List the corpus, or sample one member as CSV.
    Corpus(CorpusArgs),
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
}

impl IntervalArgs {
    fn interval(&self) -> Result<Interval, Failure> {
        Interval::new(self.a, self.b).map_err(Failure::usage)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::LeftAPlus,
            SideArg::Right => Side::RightBMinus,
        }
    }
}

#[derive(Debug, Args)]
pub struct FracIntArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    /// Corpus tag, e.g. `constant:1` or `critical-power:0.5`.
    #[arg(long = "fn", conflicts_with = "measure", required_unless_present = "measure")]
    pub func: Option<String>,
    /// Measure as inline JSON (`{atoms:[{t:0.5,w:1}]}`) or a path to a JSON file.
    #[arg(long)]
    pub measure: Option<String>,
    /// Output CSV (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FracDerivArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    /// `rl`, `caputo` or `marchaud`.
    #[arg(long, default_value = "rl")]
    pub kind: String,
    #[arg(long = "fn")]
    pub func: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check names (repeat or separate with commas).
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<String>,
    /// Campaign configuration file (JSON or JSON5).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Datum for every selected check (replaces the configured corpus).
    #[arg(long = "fn")]
    pub func: Option<String>,
    /// Orders (replace the configured ones).
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// Exponents (replace the configured ones).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Grid ladder (replaces the configured one).
    #[arg(long, value_delimiter = ',')]
    pub ladder: Vec<usize>,
    /// Assert the explicit constants, not only boundedness.
    #[arg(long)]
    pub strict_constants: bool,
    /// Write `campaign.json` and ladder CSVs here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// List the available checks and probes, then exit.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Direction {
    To0,
    To1,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, value_enum)]
    pub direction: Direction,
    /// Corpus tag for `to0`, BV datum (`jump:0.5`, `constant:1`, ...) for `to1`.
    #[arg(long = "fn")]
    pub func: String,
    #[arg(long, value_delimiter = ',')]
    pub s_list: Vec<f64>,
    /// Grid size for `to0`; smallest grid for `to1`.
    #[arg(long)]
    pub n: Option<usize>,
    /// CSV output (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path (standard output when `--out` is given, else omitted).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long)]
    pub case: String,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub ladder: Vec<usize>,
    /// Log-kernel exponent for `emb-p1-sharp`.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Ladder CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormArg {
    Lp,
    WeakLp,
    Gagliardo,
    Holder,
    RlSobolev,
    Hardy,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, value_enum)]
    pub kind: NormArg,
    #[arg(long = "fn")]
    pub func: String,
    #[arg(long, default_value = "1")]
    pub p: String,
    #[arg(long)]
    pub s: Option<f64>,
    /// Holder exponent.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Evaluate on a ladder and flag divergence.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    /// Member to sample; lists the corpus when omitted.
    #[arg(long = "fn")]
    pub func: Option<String>,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

impl From<FracError> for Failure {
    fn from(e: FracError) -> Self {
        let code = match e {
            FracError::Parse(_) => EXIT_USAGE,
            _ => EXIT_INVARIANT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INVARIANT, message: e.to_string() }
    }
}

type CliResult = Result<i32, Failure>;

fn order(s: f64) -> Result<FracOrder, Failure> {
    FracOrder::new(s).map_err(Failure::usage)
}

fn grid(iv: Interval, n: usize) -> Result<Grid, Failure> {
    Grid::new(iv, n).map_err(Failure::usage)
}

fn analytic(tag: &str, iv: Interval) -> Result<AnalyticFunction, Failure> {
    AnalyticFunction::parse(tag, iv).map_err(Failure::usage)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

fn print(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Parse `args` and run the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::FracInt(a) => cmd_frac_int(a),
        Command::FracDeriv(a) => cmd_frac_deriv(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Probe(a) => cmd_probe(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Corpus(a) => cmd_corpus(a),
    }
}

fn cmd_frac_int(a: FracIntArgs) -> CliResult {
    let iv = a.interval.interval()?;
    let g = grid(iv, a.n)?;
    let s = order(a.s)?;
    let side: Side = a.side.into();
    let v = match (&a.func, &a.measure) {
        (Some(tag), None) => frac_int(&sample(&analytic(tag, iv)?, &g)?, s, side)?,
        (None, Some(m)) => {
            if side != Side::LeftAPlus {
                return Err(Failure::usage("measures are integrated from the left only"));
            }
            let path = Path::new(m);
            let mu = if path.is_file() {
                RadonMeasure::from_json(&std::fs::read_to_string(path)?, g, path.parent())?
            } else {
                RadonMeasure::from_json(m, g, None)?
            };
            frac_int_measure(&mu, s)?
        }
        _ => return Err(Failure::usage("give exactly one of --fn and --measure")),
    };
    v.write_csv(sink(a.out.as_deref())?)?;
    Ok(EXIT_OK)
}

fn cmd_frac_deriv(a: FracDerivArgs) -> CliResult {
    let iv = a.interval.interval()?;
    let g = grid(iv, a.n)?;
    let kind: DerivKind = a.kind.parse()?;
    let u = sample(&analytic(&a.func, iv)?, &g)?;
    frac_deriv(&u, order(a.s)?, kind, a.side.into())?.write_csv(sink(a.out.as_deref())?)?;
    Ok(EXIT_OK)
}

/// The `--list` text: checks, then probe cases.
pub fn list_text() -> String {
    let mut s = String::from("checks (verify --check):\n");
    for c in CheckName::ALL {
        s.push_str(&format!("  {:<18} {}\n", c.name(), c.description()));
    }
    s.push_str("probes (probe --case):\n");
    for p in ProbeCase::ALL {
        s.push_str(&format!("  {}\n", p.name()));
    }
    s
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    if a.list {
        print(&list_text())?;
        return Ok(EXIT_OK);
    }
    let mut cfg = match &a.config {
        Some(p) => CampaignConfig::load(p).map_err(|e| match e {
            FracError::Io(io) => Failure::usage(format!("{}: {io}", p.display())),
            e => Failure::from(e),
        })?,
        None => CampaignConfig::default(),
    };
    if !a.check.is_empty() {
        cfg.checks = a.check.iter().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect();
    }
    if let Some(f) = &a.func {
        cfg.corpus = vec![f.clone()];
    }
    if !a.s.is_empty() {
        cfg.s_values = a.s.clone();
    }
    if !a.p.is_empty() {
        cfg.p_values = a.p.clone();
    }
    if !a.ladder.is_empty() {
        cfg.ladder = a.ladder.clone();
    }
    if a.strict_constants {
        cfg.strict_constants = true;
    }
    if let Some(d) = &a.out_dir {
        cfg.output_dir = Some(d.clone());
    }
    if let Err(e) = cfg.validate() {
        let mut f = Failure::from(e);
        if cfg.checks.is_empty() {
            f.message.push_str(&format!("\n{}", list_text()));
        }
        return Err(f);
    }
    let outcome = run_campaign(&cfg)?;
    if let Some(dir) = &cfg.output_dir {
        write_outputs(dir, &outcome)?;
    }
    print(&outcome.to_json())?;
    for o in &outcome.outcomes {
        if let Some(e) = &o.error {
            eprintln!("error: {} ({}): {e}", o.instance.check, o.instance.datum.as_deref().unwrap_or("-"));
        }
    }
    if outcome.has_errors() {
        return Ok(EXIT_INVARIANT);
    }
    Ok(verdict_code(outcome.all_passed()))
}

fn orders(list: &[f64]) -> Result<Vec<FracOrder>, Failure> {
    list.iter().map(|&s| order(s)).collect()
}

fn cmd_sweep(a: SweepArgs) -> CliResult {
    let iv = a.interval.interval()?;
    let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink(a.out.as_deref())?);
    let e = |x: f64| format!("{x:.16e}");
    let csv_err = |e: csv::Error| Failure::from(FracError::from(e));
    let report = match a.direction {
        Direction::To0 => {
            let list = if a.s_list.is_empty() { S_TO_0_DEFAULT.to_vec() } else { a.s_list.clone() };
            let g = grid(iv, a.n.unwrap_or(4096))?;
            let u = sample(&analytic(&a.func, iv)?, &g)?;
            let target = lp_norm(&u, 1.0)?;
            csv.write_record(["s", "value", "target", "gap"]).map_err(csv_err)?;
            let ss = orders(&list)?;
            if ss.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Failure::usage("for to0 the s list must decrease"));
            }
            let mut gaps = Vec::new();
            for &s in &ss {
                let v = frac_int(&u, s, Side::LeftAPlus)?;
                let gap = lp_norm(&v.sub(&u)?, 1.0)?;
                gaps.push(gap);
                csv.write_record([e(s.value()), e(lp_norm(&v, 1.0)?), e(target), e(gap)]).map_err(csv_err)?;
            }
            let ok = is_decreasing(&gaps, 1e-12 * target.max(1.0)) && gaps.last().is_some_and(|&g| g <= 5e-2 * target);
            let mut r = VerificationReport::new("s-to-0")
                .param("fn", &a.func)
                .param("s_list", &list)
                .param("n", g.n())
                .verdict(if ok { Verdict::Pass } else { Verdict::Fail });
            r.errors = gaps;
            r
        }
        Direction::To1 => {
            let list = if a.s_list.is_empty() { S_TO_1_DEFAULT.to_vec() } else { a.s_list.clone() };
            let n_min = a.n.unwrap_or(256);
            let u = BVFunction::parse(&a.func, grid(iv, n_min)?).map_err(Failure::usage)?;
            let ss = orders(&list)?;
            if ss.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Failure::usage("for to1 the s list must increase"));
            }
            let (r, rows) = sweep_s_to_1(&u, &sweep_panel(iv)?, &ss, n_min)?;
            csv.write_record(["s", "phi_index", "pairing", "target", "gap"]).map_err(csv_err)?;
            for row in rows {
                csv.write_record([e(row.s), row.phi_index.to_string(), e(row.pairing), e(row.target), e(row.gap)])
                    .map_err(csv_err)?;
            }
            r
        }
    };
    csv.flush()?;
    drop(csv);
    let json = report.to_json();
    match (&a.report, &a.out) {
        (Some(p), _) => std::fs::write(p, json + "\n")?,
        (None, Some(_)) => print(&json)?,
        (None, None) => {}
    }
    Ok(verdict_code(report.passed()))
}

fn cmd_probe(a: ProbeArgs) -> CliResult {
    let case: ProbeCase = a.case.parse().map_err(|e: FracError| {
        let names: Vec<&str> = ProbeCase::ALL.iter().map(|c| c.name()).collect();
        Failure::usage(format!("{e}; valid cases: {}", names.join(", ")))
    })?;
    let mut cfg = ProbeConfig::new(case);
    cfg.interval = a.interval.interval()?;
    if let Some(s) = a.s {
        cfg.s = order(s)?;
    }
    if !a.ladder.is_empty() {
        cfg.ladder = a.ladder.clone();
    }
    if let Some(b) = a.beta {
        cfg.beta = b;
    }
    let r = run_probe(case, &cfg)?;
    if let Some(p) = &a.out {
        r.write_ladder_csv(std::io::BufWriter::new(std::fs::File::create(p)?))?;
    }
    print(&r.to_json())?;
    Ok(verdict_code(r.passed()))
}

fn parse_p(p: &str) -> Result<f64, Failure> {
    match p {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => p.parse::<f64>().map_err(|e| Failure::usage(format!("--p '{p}': {e}"))),
    }
}

fn cmd_norm(a: NormArgs) -> CliResult {
    let iv = a.interval.interval()?;
    let f = analytic(&a.func, iv)?;
    let p = parse_p(&a.p)?;
    if !(p >= 1.0) {
        return Err(Failure::usage(format!("p must be at least 1, got {p}")));
    }
    let need_s = || a.s.ok_or_else(|| Failure::usage("--s is required for this norm")).and_then(order);
    let ns: Vec<usize> = if a.ladder.is_empty() { vec![a.n] } else { a.ladder.clone() };
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::usage("ladder must increase"));
    }
    let ladder = Ladder::sample(&f, &ns)?;
    let per_level = |kind: NormKind, g: &dyn Fn(&GridFunction) -> crate::Result<f64>| -> Result<NormReport, Failure> {
        let points = ladder
            .levels()
            .iter()
            .map(|u| Ok(crate::norms::LadderPoint { n: u.grid().n(), value: g(u)? }))
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(NormReport::from_ladder(kind, points))
    };
    let report = match a.kind {
        NormArg::Lp => per_level(NormKind::Lp { p }, &|u| lp_norm(u, p))?,
        NormArg::WeakLp => per_level(NormKind::WeakLp { p }, &|u| weak_lp_quasinorm(u, p))?,
        NormArg::Gagliardo => gagliardo_ladder(ladder.levels(), need_s()?, p)?,
        NormArg::Holder => {
            let beta = a.beta.ok_or_else(|| Failure::usage("--beta is required for the Holder seminorm"))?;
            if !(beta > 0.0 && beta <= 1.0) {
                return Err(Failure::usage(format!("beta must lie in (0, 1], got {beta}")));
            }
            per_level(NormKind::Holder { beta }, &|u| holder_seminorm(u, beta))?
        }
        NormArg::RlSobolev => rl_sobolev_ladder(ladder.levels(), need_s()?, p)?,
        NormArg::Hardy => {
            let s = need_s()?;
            if s.value() * p >= 1.0 {
                return Err(Failure::usage("the Hardy quotient needs sp < 1"));
            }
            per_level(NormKind::Hardy { s: s.value(), p }, &|u| hardy_quotient(u, s, p))?
        }
    };
    print(&serde_json::to_string_pretty(&report).map_err(FracError::from)?)?;
    Ok(EXIT_OK)
}

/// Tags accepted by `--fn`, with parameters.
pub const CORPUS_TAGS: [&str; 13] = [
    "zero",
    "constant:c",
    "power-law:mu",
    "critical-power:s",
    "shifted-critical-power:c:d:s",
    "indicator:c:d",
    "cosine",
    "sine",
    "linear",
    "log-kernel-left:beta",
    "log-kernel-right:s",
    "cantor:m",
    "hat:c:w",
];

fn cmd_corpus(a: CorpusArgs) -> CliResult {
    let iv = a.interval.interval()?;
    match &a.func {
        None => {
            let mut s = String::from("functions (--fn):\n");
            for t in CORPUS_TAGS {
                s.push_str(&format!("  {t}\n"));
            }
            s.push_str("BV data (bv-embedding, bv-sup, sweep --direction to1):\n");
            s.push_str("  zero\n  constant:c\n  jump:t[:size]\n  linear[:slope]\n  cantor:m[:coef]\n");
            for (k, label) in crate::campaign::bv_corpus_labels(iv)?.iter().enumerate() {
                s.push_str(&format!("  bv:{k}  ({label})\n"));
            }
            print(&s)?;
        }
        Some(tag) => sample(&analytic(tag, iv)?, &grid(iv, a.n)?)?.write_csv(sink(a.out.as_deref())?)?,
    }
    Ok(EXIT_OK)
}
