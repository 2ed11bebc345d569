//! The `copoly` command line: subcommand definitions, dispatch and report emission.

pub mod expr;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use copoly::config::{ExperimentConfig, OutputFormat};
use copoly::measure::{lagrange_density, sample_density, spline_density, SampleFlag};
use copoly::quadrature::{
    build_rule, estimate, order_flip_experiment, reproduce_table, Integrand, Normalization, QuadratureRule, TableId, WeightMethod,
    DEFAULT_TOL_IMAG, E_FIXTURE,
};
use copoly::quadrature::tables::{format_sig, report_csv, table_flip_pairs, twenty_two_sevenths_factor};
use copoly::recurrence::{gen_first_kind, gen_second_kind};
use copoly::scalar::{format_q, parse_q, Q};
use copoly::suites::{run_suite, Suite, SuiteReport};
use copoly::{CoefficientScheme, Perturbation, Poly};

/// Version of the JSON envelope written by `--out json`.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] copoly::Error),
    #[error(transparent)]
    Parse(#[from] expr::ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use copoly::Error as E;
        match self {
            CliError::Domain(e) => match e {
                E::SchemeIndex { .. } => "scheme_index",
                E::NonPositiveLambda { .. } => "non_positive_lambda",
                E::NonRealNodes { .. } => "non_real_nodes",
                E::Input(_) => "input",
                E::Config(_) => "config",
                E::Pole { .. } => "pole",
                E::ComplexZeros { .. } => "complex_zeros",
                E::DegreeDrop { .. } => "degree_drop",
                E::Degenerate { .. } => "degenerate",
                E::SingularReduction { .. } => "singular_reduction",
                E::NonFinite { .. } => "non_finite",
                E::Fixture(_) => "fixture",
            },
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "copoly", version, about = "Perturbed R_II recurrences, quadrature and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print P_n (or Q_n) of the scheme under a perturbation.
    Poly(PolyArgs),
    /// Quadrature nodes and weights.
    Zeros(ZerosArgs),
    /// Quadrature estimate of an integrand.
    Quad(QuadArgs),
    /// Recompute a published table and report deviations.
    Table(TableArgs),
    /// Sample a density interpolated through nodes and weights.
    Measure(MeasureArgs),
    /// Run randomized exact identity suites.
    Check(CheckArgs),
    /// Compare co-modifications with their level-flipped counterparts.
    Flip(FlipArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PertArgs {
    /// Co-recursion level.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Co-recursion shift of c_k (decimal or p/q).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Co-dilation level (at least 1).
    #[arg(long)]
    pub kp: Option<usize>,
    /// Co-dilation factor of lambda_kp (decimal or p/q).
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
}

impl PertArgs {
    fn given(&self) -> bool {
        self.mu.is_some() || self.nu.is_some() || self.kp.is_some()
    }

    fn build(&self) -> CliResult<Perturbation> {
        let mut p = Perturbation::none();
        if let Some(mu) = &self.mu {
            p = Perturbation::corec(self.k, parse_q(mu)?);
        }
        match (&self.nu, self.kp) {
            (Some(nu), Some(kp)) => p.codil = Perturbation::codil(kp, parse_q(nu)?).codil,
            (None, None) => {}
            _ => return Err(CliError::Usage("--nu and --kp must be given together".into())),
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Out {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Digits(usize),
    Full,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    if s == "full" {
        return Ok(Precision::Full);
    }
    match s.parse::<usize>() {
        Ok(d) if (1..=17).contains(&d) => Ok(Precision::Digits(d)),
        _ => Err("expected a digit count in 1..=17 or 'full'".into()),
    }
}

impl Precision {
    fn fmt(self, x: f64) -> String {
        match self {
            Precision::Digits(d) => format_sig(x, d),
            Precision::Full => format!("{x:e}"),
        }
    }

    fn digits(self) -> usize {
        match self {
            Precision::Digits(d) => d,
            Precision::Full => 17,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub out: Option<Out>,
    /// Significant digits, or 'full'.
    #[arg(long, default_value = "10", value_parser = parse_precision)]
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weights {
    /// Closed moment formula with M_0.
    Moment,
    /// M_0 * Q_n / P_n'.
    SecondKind,
    /// Q_n / P_n'.
    Raw,
    /// Q_n / P_n' rescaled to total mass one.
    UnitMass,
}

#[derive(Debug, Clone, Args)]
pub struct RuleArgs {
    #[arg(long, value_enum, default_value = "moment")]
    pub weights: Weights,
    /// Zeroth moment (decimal or p/q).
    #[arg(long, default_value = "1/2")]
    pub m0: String,
    /// Largest imaginary part accepted as a real zero.
    #[arg(long, default_value_t = DEFAULT_TOL_IMAG)]
    pub tol_imag: f64,
}

impl RuleArgs {
    fn method(&self) -> CliResult<(WeightMethod, Q)> {
        let m0 = parse_q(&self.m0)?;
        let method = match self.weights {
            Weights::Moment => WeightMethod::MomentFormula,
            Weights::SecondKind => WeightMethod::SecondKindRatio(Normalization::Scaled(m0.clone())),
            Weights::Raw => WeightMethod::SecondKindRatio(Normalization::Raw),
            Weights::UnitMass => WeightMethod::SecondKindRatio(Normalization::UnitMass),
        };
        Ok((method, m0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    First,
    Second,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "first")]
    pub kind: PolyKind,
    /// Print every degree from 0 to n.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub pert: PertArgs,
    /// Experiment config supplying the scheme, perturbations and n.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub pert: PertArgs,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub pert: PertArgs,
    /// Built-in id or an expression in x.
    #[arg(long)]
    pub integrand: Option<String>,
    /// Evaluate pi as 22/7, as in the published tables.
    #[arg(long)]
    pub published_pi: bool,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// t1 .. t6
    #[arg(long)]
    pub id: TableId,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Lagrange,
    Spline,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[command(flatten)]
    pub pert: PertArgs,
    #[arg(long, value_enum, default_value = "lagrange")]
    pub method: Method,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Defaults to the smallest node.
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    /// Defaults to the largest node.
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// structural, transfer, spectral, oprl or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Instances per suite; defaults per suite.
    #[arg(long)]
    pub count: Option<usize>,
    /// Experiment config supplying the seed.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FlipArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value = "1/100", allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, default_value = "251/250")]
    pub nu: String,
    /// Level pairs k:kp separated by commas.
    #[arg(long, default_value = "2:6,3:5,4:4")]
    pub pairs: String,
    #[arg(long, value_enum, default_value = "second-kind")]
    pub weights: Weights,
    #[arg(long, default_value = "1/2")]
    pub m0: String,
    /// Scale estimates by 22/(7 pi) to compare with published cells.
    #[arg(long)]
    pub published_pi: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    let mut buf = Vec::new();
    match dispatch(cli.command, &mut buf) {
        Ok(code) => {
            if out.write_all(&buf).and_then(|_| out.flush()).is_err() {
                return 1;
            }
            code
        }
        Err(e) => {
            let _ = out.write_all(&buf);
            let _ = writeln!(err, "error[{}]: {e}", e.kind());
            if e.exit_code() == 2 {
                let _ = writeln!(err, "run with --help for usage");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, w: &mut Vec<u8>) -> CliResult<i32> {
    match cmd {
        Command::Poly(a) => cmd_poly(a, w),
        Command::Zeros(a) => cmd_zeros(a, w),
        Command::Quad(a) => cmd_quad(a, w),
        Command::Table(a) => cmd_table(a, w),
        Command::Measure(a) => cmd_measure(a, w),
        Command::Check(a) => cmd_check(a, w),
        Command::Flip(a) => cmd_flip(a, w),
    }
}

fn load_config(path: &PathBuf) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(ExperimentConfig::from_json(&text)?)
}

/// Scheme, perturbations, degrees, integrand and config output format, flags overriding the config.
struct Plan {
    scheme: CoefficientScheme,
    perts: Vec<Perturbation>,
    ns: Vec<usize>,
    integrand: Option<String>,
    output: Option<Out>,
}

fn plan(config: &Option<PathBuf>, n: Option<usize>, pert: &PertArgs) -> CliResult<Plan> {
    let mut p = match config {
        Some(path) => {
            let cfg = load_config(path)?;
            Plan {
                scheme: cfg.scheme.build()?,
                perts: if cfg.perturbations.is_empty() { vec![Perturbation::none()] } else { cfg.perturbations },
                ns: cfg.n,
                integrand: Some(cfg.integrand),
                output: Some(match cfg.output {
                    OutputFormat::Csv => Out::Csv,
                    OutputFormat::Json => Out::Json,
                }),
            }
        }
        None => Plan {
            scheme: CoefficientScheme::example(),
            perts: vec![Perturbation::none()],
            ns: Vec::new(),
            integrand: None,
            output: None,
        },
    };
    if let Some(n) = n {
        p.ns = vec![n];
    }
    if config.is_none() || pert.given() {
        p.perts = vec![pert.build()?];
    }
    if p.ns.is_empty() {
        return Err(CliError::Usage("--n is required".into()));
    }
    if p.ns.contains(&0) {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    Ok(p)
}

fn format_for(flag: Option<Out>, config: Option<Out>, default: Out) -> Out {
    flag.or(config).unwrap_or(default)
}

fn json_out(w: &mut Vec<u8>, command: &str, data: impl Serialize) -> CliResult<()> {
    let v = json!({ "schema_version": SCHEMA_VERSION, "command": command, "data": data });
    serde_json::to_writer_pretty(&mut *w, &v).map_err(|e| CliError::Io(e.into()))?;
    w.push(b'\n');
    Ok(())
}

fn csv_out(w: &mut Vec<u8>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let mut c = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *w);
    let io = |e: csv::Error| CliError::Io(e.into());
    c.write_record(header).map_err(io)?;
    for r in rows {
        c.write_record(&r).map_err(io)?;
    }
    c.flush()?;
    Ok(())
}

fn pert_cols(p: &Perturbation) -> [String; 4] {
    [
        p.corec.as_ref().map_or_else(String::new, |c| format_q(&c.mu)),
        p.corec.as_ref().map_or_else(String::new, |c| c.k.to_string()),
        p.codil.as_ref().map_or_else(String::new, |d| format_q(&d.nu)),
        p.codil.as_ref().map_or_else(String::new, |d| d.kp.to_string()),
    ]
}

fn cmd_poly(a: PolyArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    let p = plan(&a.config, a.n, &a.pert)?;
    let name = match a.kind {
        PolyKind::First => "P",
        PolyKind::Second => "Q",
    };
    let mut rows: Vec<(usize, Perturbation, Poly<Q>)> = Vec::new();
    for pert in &p.perts {
        for &n in &p.ns {
            let seq = match a.kind {
                PolyKind::First => gen_first_kind::<Q>(&p.scheme, pert, n)?,
                PolyKind::Second => gen_second_kind::<Q>(&p.scheme, pert, n)?,
            };
            let from = if a.all { 0 } else { n };
            rows.extend(seq.into_iter().enumerate().skip(from).map(|(j, poly)| (j, pert.clone(), poly)));
        }
    }
    match format_for(a.out.out, p.output, Out::Text) {
        Out::Text => {
            for (j, _, poly) in &rows {
                writeln!(w, "{name}_{j}(x) = {poly}")?;
            }
        }
        Out::Csv => csv_out(
            w,
            &["n", "mu", "k", "nu", "kp", "kind", "coefficients"],
            rows.iter().map(|(j, pert, poly)| {
                let coeffs = poly.coeffs().iter().map(format_q).collect::<Vec<_>>().join(" ");
                let mut r = vec![j.to_string()];
                r.extend(pert_cols(pert));
                r.extend([name.to_string(), coeffs]);
                r
            }),
        )?,
        Out::Json => json_out(
            w,
            "poly",
            rows.iter()
                .map(|(j, pert, poly)| {
                    json!({
                        "n": j,
                        "kind": name,
                        "perturbation": pert,
                        "coefficients": poly.coeffs().iter().map(format_q).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>(),
        )?,
    }
    Ok(0)
}

fn rule_json(r: &QuadratureRule) -> serde_json::Value {
    json!({
        "n": r.n,
        "perturbation": r.perturbation,
        "m0": format_q(&r.m0),
        "nodes": r.nodes,
        "weights": r.weights,
    })
}

fn cmd_zeros(a: ZerosArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    let p = plan(&a.config, a.n, &a.pert)?;
    let (method, m0) = a.rule.method()?;
    let mut rules = Vec::new();
    for pert in &p.perts {
        for &n in &p.ns {
            rules.push(build_rule(&p.scheme, pert, n, method.clone(), &m0, a.rule.tol_imag)?);
        }
    }
    let prec = a.out.precision;
    match format_for(a.out.out, p.output, Out::Csv) {
        Out::Json => json_out(w, "zeros", rules.iter().map(rule_json).collect::<Vec<_>>())?,
        _ => csv_out(
            w,
            &["n", "mu", "k", "nu", "kp", "j", "node", "weight"],
            rules.iter().flat_map(|r| {
                r.nodes.iter().zip(&r.weights).enumerate().map(move |(j, (x, wt))| {
                    let mut row = vec![r.n.to_string()];
                    row.extend(pert_cols(&r.perturbation));
                    row.extend([(j + 1).to_string(), prec.fmt(*x), prec.fmt(*wt)]);
                    row
                })
            }),
        )?,
    }
    Ok(0)
}

/// A built-in id, or an expression in `x`.
pub fn parse_integrand(text: &str, published_pi: bool) -> CliResult<Integrand> {
    let pi = if published_pi { 22.0 / 7.0 } else { std::f64::consts::PI };
    let source = match Integrand::builtin(text) {
        Some(b) if !published_pi => return Ok(b),
        Some(b) => b.description,
        None => text.to_string(),
    };
    let e = expr::parse_with_pi(&source, pi)?;
    Ok(Integrand::new(text, source, move |x| e.eval(x)))
}

fn cmd_quad(a: QuadArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    let p = plan(&a.config, a.n, &a.pert)?;
    let text = a.integrand.or(p.integrand).unwrap_or_else(|| "example3".into());
    let f = parse_integrand(&text, a.published_pi)?;
    let (method, m0) = a.rule.method()?;
    let mut rows = Vec::new();
    for pert in &p.perts {
        for &n in &p.ns {
            let rule = build_rule(&p.scheme, pert, n, method.clone(), &m0, a.rule.tol_imag)?;
            rows.push((n, pert.clone(), estimate(&rule, &f)?));
        }
    }
    let prec = a.out.precision;
    match format_for(a.out.out, p.output, Out::Text) {
        Out::Text => {
            for (_, _, v) in &rows {
                writeln!(w, "{}", prec.fmt(*v))?;
            }
        }
        Out::Csv => csv_out(
            w,
            &["n", "mu", "k", "nu", "kp", "I_star"],
            rows.iter().map(|(n, pert, v)| {
                let mut r = vec![n.to_string()];
                r.extend(pert_cols(pert));
                r.push(prec.fmt(*v));
                r
            }),
        )?,
        Out::Json => json_out(
            w,
            "quad",
            json!({
                "integrand": f.description,
                "published_pi": a.published_pi,
                "estimates": rows.iter().map(|(n, pert, v)| json!({"n": n, "perturbation": pert, "I_star": v})).collect::<Vec<_>>(),
            }),
        )?,
    }
    Ok(0)
}

fn cmd_table(a: TableArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    let report = reproduce_table(a.id)?;
    if let Some(o) = &report.offset {
        log::info!("{}: {} (ratio {})", a.id, o.description, o.ratio);
    }
    match a.out.out.unwrap_or(Out::Csv) {
        Out::Json => json_out(w, "table", &report)?,
        _ => w.extend_from_slice(report_csv(&report, a.out.precision.digits())?.as_bytes()),
    }
    Ok(0)
}

fn cmd_measure(a: MeasureArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let pert = a.pert.build()?;
    let (method, m0) = a.rule.method()?;
    let rule = build_rule(&CoefficientScheme::example(), &pert, a.n, method, &m0, a.rule.tol_imag)?;
    let approx = match a.method {
        Method::Lagrange => lagrange_density(&rule.nodes, &rule.weights)?,
        Method::Spline => spline_density(&rule.nodes, &rule.weights)?,
    };
    let lo = a.x_min.unwrap_or(rule.nodes[0]);
    let hi = a.x_max.unwrap_or(rule.nodes[rule.nodes.len() - 1]);
    let samples = sample_density(&approx, lo, hi, a.samples)?;
    let prec = a.out.precision;
    let flag = |f: SampleFlag| match f {
        SampleFlag::Inside => "inside",
        SampleFlag::Extrapolated => "extrapolated",
        SampleFlag::Clamped => "clamped",
    };
    match a.out.out.unwrap_or(Out::Csv) {
        Out::Json => json_out(
            w,
            "measure",
            json!({
                "kind": approx.kind,
                "rule": rule_json(&rule),
                "knot_error": approx.knot_error(),
                "samples": samples,
            }),
        )?,
        _ => csv_out(
            w,
            &["x", "density", "flag"],
            samples.iter().map(|s| vec![prec.fmt(s.x), prec.fmt(s.density), flag(s.flag).to_string()]),
        )?,
    }
    Ok(0)
}

fn cmd_check(a: CheckArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    let suites = if a.suite == "all" { Suite::ALL.to_vec() } else { vec![Suite::parse(&a.suite).map_err(|e| CliError::Usage(e.to_string()))?] };
    let cfg_seed = match &a.config {
        Some(path) => Some(load_config(path)?.seed),
        None => None,
    };
    let seed = a.seed.or(cfg_seed).unwrap_or(0);
    let reports: Vec<SuiteReport> = suites
        .into_iter()
        .map(|s| {
            let r = run_suite(s, seed, a.count.unwrap_or(s.default_count()));
            log::info!("{} suite finished in {} ms", s.name(), r.elapsed_ms);
            r
        })
        .collect();
    let total: usize = reports.iter().map(|r| r.failures.len()).sum();
    match a.out.out.unwrap_or(Out::Text) {
        Out::Text => {
            for r in &reports {
                writeln!(
                    w,
                    "{}: seed {}, {} instances, {} exact checks, {} failures",
                    r.suite.name(),
                    r.seed,
                    r.instances,
                    r.checks,
                    r.failures.len()
                )?;
                for f in &r.failures {
                    writeln!(w, "  {f}")?;
                }
            }
            writeln!(w, "{total} failures")?;
        }
        Out::Csv => csv_out(
            w,
            &["suite", "seed", "instance", "checks", "nonzero_residuals", "errors"],
            reports.iter().flat_map(|r| {
                r.rows.iter().map(move |row| {
                    vec![
                        r.suite.name().to_string(),
                        r.seed.to_string(),
                        row.instance.to_string(),
                        row.checks.to_string(),
                        row.nonzero.to_string(),
                        row.errors.to_string(),
                    ]
                })
            }),
        )?,
        Out::Json => json_out(w, "check", &reports)?,
    }
    Ok(if total == 0 { 0 } else { 1 })
}

fn parse_pairs(text: &str) -> CliResult<Vec<(usize, usize)>> {
    text.split(',')
        .map(|item| {
            let bad = || CliError::Usage(format!("bad level pair {item:?}; expected k:kp"));
            let (k, kp) = item.trim().split_once(':').ok_or_else(bad)?;
            Ok((k.trim().parse().map_err(|_| bad())?, kp.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn cmd_flip(a: FlipArgs, w: &mut Vec<u8>) -> CliResult<i32> {
    let (mu, nu) = (parse_q(&a.mu)?, parse_q(&a.nu)?);
    let pairs: Vec<_> = parse_pairs(&a.pairs)?.into_iter().map(|(k, kp)| (k, mu.clone(), kp, nu.clone())).collect();
    let pairs = if pairs.is_empty() { table_flip_pairs(mu, nu) } else { pairs };
    let rule = RuleArgs {
        weights: a.weights,
        m0: a.m0.clone(),
        tol_imag: DEFAULT_TOL_IMAG,
    };
    let (method, _) = rule.method()?;
    let scale = if a.published_pi { twenty_two_sevenths_factor() } else { 1.0 };
    let report = order_flip_experiment(&CoefficientScheme::example(), &pairs, a.n, method, scale)?;
    let prec = a.out.precision;
    match a.out.out.unwrap_or(Out::Csv) {
        Out::Json => json_out(w, "flip", json!({ "e_reference": E_FIXTURE, "report": report }))?,
        _ => {
            let mut rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    let mut row = vec!["estimate".to_string()];
                    row.extend(pert_cols(&r.perturbation));
                    row.extend([prec.fmt(r.i_star), prec.fmt(r.abs_err)]);
                    row
                })
                .collect();
            let summary = |name: &str, v: Option<f64>| {
                let mut row = vec![name.to_string()];
                row.extend(std::iter::repeat_n(String::new(), 4));
                row.extend([v.map_or_else(String::new, |x| prec.fmt(x)), String::new()]);
                row
            };
            rows.push(summary("average_off_median", Some(report.average_off_median)));
            rows.push(summary("median", report.median_estimate));
            rows.push(summary("average_deviation", report.average_deviation));
            csv_out(w, &["row", "mu", "k", "nu", "kp", "I_star", "abs_err"], rows)?;
        }
    }
    Ok(0)
}
