use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use betajack::ensembles::{joint_moment, moment, negative_moment, secular_mean, EnsembleKind, EnsembleSpec, MomentResult};
use betajack::jack::{engine, Basis, TransferMatrix};
use betajack::sampler::{empirical_statistic, sample_spectrum, Method, SamplerConfig, Target};
use betajack::verify::{run_suite, Suite};
use betajack::{Error, Partition, Rational};

mod render;

use render::{Format, Record, Table};

#[derive(Parser)]
#[command(name = "betajack", version, about = "Exact moments and secular coefficients of beta-ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact spectral moments (positive, negative or joint).
    Moments(MomentsArgs),
    /// Exact mean secular coefficients E{e_k}.
    Secular(SecularArgs),
    /// Jack polynomial expansions and transfer matrices.
    Jack(JackArgs),
    /// Draw eigenvalue samples and report empirical statistics.
    Sample(SampleArgs),
    /// Compare sampler estimates with exact values.
    Compare(CompareArgs),
    /// Run an invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct AlphaArgs {
    /// Jack parameter α (p/q or integer).
    #[arg(long, conflicts_with = "beta", required_unless_present = "beta", allow_hyphen_values = true)]
    alpha: Option<Rational>,
    /// Dyson index β = 2/α.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<Rational>,
}

impl AlphaArgs {
    fn alpha(&self) -> Result<Rational, Error> {
        match (&self.alpha, &self.beta) {
            (Some(a), _) => Ok(a.clone()),
            (None, Some(b)) if b.is_positive() => Ok(Rational::from(2) / b),
            (None, Some(b)) => Err(Error::Domain(format!("beta must be positive (got {b})"))),
            (None, None) => Err(Error::Domain("one of --alpha or --beta is required".into())),
        }
    }
}

#[derive(Args, Clone)]
struct EnsembleArgs {
    #[arg(long)]
    ensemble: EnsembleKind,
    /// Number of eigenvalues.
    #[arg(long = "n")]
    n: usize,
    #[command(flatten)]
    alpha: AlphaArgs,
    #[arg(long, conflicts_with_all = ["gamma1", "gamma2"], allow_hyphen_values = true)]
    gamma: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    gamma2: Option<Rational>,
}

impl EnsembleArgs {
    fn spec(&self) -> Result<EnsembleSpec, Error> {
        let a = self.alpha.alpha()?;
        let need = |v: &Option<Rational>, name: &str| {
            v.clone().ok_or_else(|| Error::Domain(format!("{} ensemble needs --{name}", self.ensemble)))
        };
        match self.ensemble {
            EnsembleKind::Gaussian => {
                if self.gamma.is_some() || self.gamma1.is_some() || self.gamma2.is_some() {
                    return Err(Error::Domain("gaussian ensemble takes no gamma parameters".into()));
                }
                EnsembleSpec::gaussian(self.n, a)
            }
            EnsembleKind::Laguerre => EnsembleSpec::laguerre(self.n, a, need(&self.gamma, "gamma")?),
            EnsembleKind::Jacobi => {
                EnsembleSpec::jacobi(self.n, a, need(&self.gamma1, "gamma1")?, need(&self.gamma2, "gamma2")?)
            }
        }
    }
}

/// Inclusive `a..b`.
#[derive(Clone, Copy, Debug)]
struct KRange(usize, usize);

impl std::str::FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got '{s}'"))?;
        let a: usize = a.trim().parse().map_err(|_| format!("bad range start in '{s}'"))?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| format!("bad range end in '{s}'"))?;
        if a > b {
            return Err(format!("empty range '{s}'"));
        }
        Ok(KRange(a, b))
    }
}

#[derive(Args, Clone)]
struct KArgs {
    /// Order k.
    #[arg(long, conflicts_with = "k_range")]
    k: Option<usize>,
    /// Inclusive range of orders, e.g. 1..4.
    #[arg(long)]
    k_range: Option<KRange>,
}

impl KArgs {
    fn orders(&self) -> Option<Vec<usize>> {
        match (self.k, self.k_range) {
            (Some(k), _) => Some(vec![k]),
            (None, Some(KRange(a, b))) => Some((a..=b).collect()),
            (None, None) => None,
        }
    }
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    k: KArgs,
    /// Compute E Σ x_i^{-k} instead.
    #[arg(long)]
    negative: bool,
    /// Reflection parameter t ≥ k for negative moments.
    #[arg(long, requires = "negative")]
    t: Option<usize>,
    /// Joint moment E ∏_j p_{μ_j}, e.g. 2,1,1.
    #[arg(long, conflicts_with_all = ["k", "k_range", "negative"])]
    mu: Option<Partition>,
    /// Print the per-partition decomposition.
    #[arg(long)]
    show_terms: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SecularArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    k: KArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    #[value(name = "C")]
    C,
    #[value(name = "J")]
    J,
    #[value(name = "P")]
    P,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutBasis {
    Monomial,
    Powersum,
    Elementary,
}

#[derive(Args)]
struct JackArgs {
    #[command(flatten)]
    alpha: AlphaArgs,
    /// Partition, e.g. 3,1.
    #[arg(long, conflicts_with_all = ["theta_table", "kappa_table"], required_unless_present_any = ["theta_table", "kappa_table"])]
    lambda: Option<Partition>,
    #[arg(long, value_enum, default_value_t = Normalization::J, ignore_case = true)]
    normalization: Normalization,
    #[arg(long, value_enum, default_value_t = OutBasis::Monomial)]
    basis: OutBasis,
    /// Print θ at degree k (coefficients of p_μ in J_λ).
    #[arg(long, conflicts_with = "kappa_table")]
    theta_table: Option<usize>,
    /// Print κ at degree k (coefficients of J_λ in p_μ, rescaled).
    #[arg(long)]
    kappa_table: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Clone)]
struct SamplerArgs {
    #[arg(long, default_value_t = 2)]
    chains: usize,
    /// Retained samples per chain.
    #[arg(long, default_value_t = 100_000)]
    steps: usize,
    #[arg(long, default_value_t = 5_000)]
    burn_in: usize,
    #[arg(long, default_value_t = 1)]
    thinning: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    proposal_scale: f64,
    #[arg(long, default_value = "metropolis")]
    method: Method,
}

impl SamplerArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            chains: self.chains,
            steps_per_chain: self.steps,
            burn_in: self.burn_in,
            thinning: self.thinning,
            master_seed: self.seed,
            proposal_scale: self.proposal_scale,
            method: self.method,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Statistics to report, e.g. m1,m2,sc2,tr2.
    #[arg(long, default_value = "m1,m2")]
    targets: String,
    /// Write the retained samples as CSV to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// With csv and no --output, the samples themselves go to stdout.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[arg(long)]
    targets: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all".
    #[arg(long)]
    suite: String,
    #[arg(long)]
    k_max: Option<usize>,
    /// Comma-separated α values.
    #[arg(long)]
    alpha_set: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// A failed run: message plus exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Parse(_) | Error::DegreeMismatch(..) => 2,
            Error::Resource { .. } => 3,
            Error::Internal(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: format!("i/o error: {e}") }
    }
}

/// Exit status of a run that completed: 0, or 1 for a statistical or
/// verification failure.
type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let result = match cli.command {
        Command::Moments(a) => cmd_moments(a, &mut out),
        Command::Secular(a) => cmd_secular(a, &mut out),
        Command::Jack(a) => cmd_jack(a, &mut out),
        Command::Sample(a) => cmd_sample(a, &mut out),
        Command::Compare(a) => cmd_compare(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Err(f), _) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[derive(Serialize)]
struct MomentRow {
    k: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<Partition>,
    value: Rational,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    terms: Vec<betajack::ensembles::TermValue>,
}

fn moment_row(r: MomentResult, show_terms: bool) -> MomentRow {
    MomentRow { k: r.k, mu: r.mu, value: r.value, terms: if show_terms { r.terms } else { Vec::new() } }
}

fn cmd_moments(a: MomentsArgs, out: &mut impl Write) -> Outcome {
    let spec = a.ensemble.spec()?;
    let rows: Vec<MomentRow> = if let Some(mu) = &a.mu {
        vec![moment_row(joint_moment(mu, &spec)?, a.show_terms)]
    } else {
        let ks = a.k.orders().ok_or_else(|| Error::Domain("one of --k, --k-range or --mu is required".into()))?;
        let mut rows = Vec::new();
        for k in ks {
            let r = if a.negative { negative_moment(k, &spec, a.t)? } else { moment(k, &spec)? };
            rows.push(moment_row(r, a.show_terms));
        }
        rows
    };
    match a.format {
        Format::Json => Record::new("moments", Some(&spec), &rows).write(out)?,
        Format::Csv | Format::Table => {
            let mut t = Table::new(if a.show_terms { vec!["k", "mu", "partition", "value"] } else { vec!["k", "mu", "value"] });
            for r in &rows {
                let mu = r.mu.as_ref().map(|m| m.to_string()).unwrap_or_default();
                if a.show_terms {
                    for term in &r.terms {
                        t.row(vec![r.k.to_string(), mu.clone(), term.partition.to_string(), term.value.to_string()]);
                    }
                    t.row(vec![r.k.to_string(), mu, "total".into(), r.value.to_string()]);
                } else {
                    t.row(vec![r.k.to_string(), mu, r.value.to_string()]);
                }
            }
            t.write(out, a.format, Some(&spec.to_string()))?;
        }
    }
    Ok(true)
}

fn cmd_secular(a: SecularArgs, out: &mut impl Write) -> Outcome {
    let spec = a.ensemble.spec()?;
    let ks = a.k.orders().ok_or_else(|| Error::Domain("one of --k or --k-range is required".into()))?;
    let rows = ks.into_iter().map(|k| secular_mean(k, &spec)).collect::<Result<Vec<_>, _>>()?;
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                k: usize,
                value: Rational,
                vanishes: bool,
            }
            let rows: Vec<Row> =
                rows.into_iter().map(|r| Row { k: r.k, value: r.value, vanishes: r.vanishes }).collect();
            Record::new("secular", Some(&spec), &rows).write(out)?;
        }
        _ => {
            let mut t = Table::new(vec!["k", "value"]);
            for r in &rows {
                t.row(vec![r.k.to_string(), r.value.to_string()]);
            }
            t.write(out, a.format, Some(&spec.to_string()))?;
        }
    }
    Ok(true)
}

fn cmd_jack(a: JackArgs, out: &mut impl Write) -> Outcome {
    let alpha = a.alpha.alpha()?;
    let e = engine(&alpha)?;
    if let Some(k) = a.theta_table.or(a.kappa_table) {
        let m = if a.theta_table.is_some() { e.theta_table(k)? } else { e.kappa_table(k)? };
        write_transfer(&m, a.format, out)?;
        return Ok(true);
    }
    let lambda = a.lambda.expect("clap requires --lambda here");
    let norm = match a.normalization {
        Normalization::C => Basis::JackC,
        Normalization::J => Basis::JackJ,
        Normalization::P => Basis::JackP,
    };
    let basis = match a.basis {
        OutBasis::Monomial => Basis::Monomial,
        OutBasis::Powersum => Basis::PowerSum,
        OutBasis::Elementary => Basis::Elementary,
    };
    let f = e.convert(&e.jack_element(&lambda, norm), basis)?;
    match a.format {
        Format::Json => Record::new("jack", None, &f.to_json()).write(out)?,
        _ => {
            let mut t = Table::new(vec!["partition", "coeff"]);
            for (mu, c) in f.terms() {
                t.row(vec![format!("{}{mu}", basis.symbol()), c.to_string()]);
            }
            let title = format!("{}_{lambda} alpha={alpha} in the {} basis", norm.symbol(), basis.name());
            t.write(out, a.format, Some(&title))?;
        }
    }
    Ok(true)
}

fn write_transfer(m: &TransferMatrix, format: Format, out: &mut impl Write) -> Result<(), Failure> {
    if let Format::Json = format {
        return Record::new("jack", None, &m.to_json()).write(out);
    }
    let ps = m.partitions();
    let labels: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    let mut header = vec!["lambda \\ mu".to_string()];
    header.extend(labels.iter().cloned());
    let mut t = Table::new_owned(header);
    for (i, lam) in labels.iter().enumerate() {
        let mut row = vec![lam.clone()];
        row.extend(m.entries().row(i).iter().map(|v| v.to_string()));
        t.row(row);
    }
    let title = format!("{:?} degree {} alpha={}", m.kind(), m.degree(), m.alpha()).to_lowercase();
    t.write(out, format, Some(&title))
}

#[derive(Serialize)]
struct StatRow {
    target: String,
    estimate: f64,
    std_error: f64,
    effective_samples: f64,
    rhat: f64,
}

#[derive(Serialize)]
struct SampleResults {
    acceptance: Vec<Option<f64>>,
    acceptance_flagged: bool,
    statistics: Vec<StatRow>,
}

fn cmd_sample(a: SampleArgs, out: &mut impl Write) -> Outcome {
    let spec = a.ensemble.spec()?;
    let targets = Target::parse_list(&a.targets)?;
    for t in &targets {
        t.check(&spec)?;
    }
    let cfg = a.sampler.config();
    let start = Instant::now();
    let stream = sample_spectrum(&spec, &cfg)?;
    if let Some(path) = &a.output {
        stream.write_csv(BufWriter::new(File::create(path)?))?;
    } else if let Format::Csv = a.format {
        stream.write_csv(&mut *out)?;
        return Ok(true);
    }
    let mut stats = Vec::new();
    if cfg.chains >= 2 {
        for t in &targets {
            let s = empirical_statistic(&stream, t)?;
            stats.push(StatRow {
                target: s.target,
                estimate: s.estimate,
                std_error: s.std_error,
                effective_samples: s.effective_samples,
                rhat: s.rhat,
            });
        }
    }
    let results = SampleResults {
        acceptance: stream.chains.iter().map(|c| c.acceptance).collect(),
        acceptance_flagged: stream.acceptance_flagged(),
        statistics: stats,
    };
    let runtime = start.elapsed();
    match a.format {
        Format::Json => Record::new("sample", Some(&spec), &results).sampled(cfg.master_seed, runtime).write(out)?,
        _ => {
            let mut t = Table::new(vec!["target", "estimate", "std_error", "ess", "rhat"]);
            for s in &results.statistics {
                t.row(vec![
                    s.target.clone(),
                    format!("{:.6}", s.estimate),
                    format!("{:.3e}", s.std_error),
                    format!("{:.0}", s.effective_samples),
                    format!("{:.4}", s.rhat),
                ]);
            }
            let title = format!("{spec} seed={} acceptance={}", cfg.master_seed, acceptance_text(&results.acceptance));
            t.write(out, a.format, Some(&title))?;
            if cfg.chains < 2 {
                writeln!(out, "(standard errors need at least 2 chains)")?;
            }
        }
    }
    if results.acceptance_flagged {
        eprintln!("warning: post-burn-in acceptance rate outside [0.1, 0.6]");
    }
    Ok(true)
}

fn acceptance_text(acc: &[Option<f64>]) -> String {
    let v: Vec<String> = acc.iter().map(|a| a.map_or("-".into(), |a| format!("{a:.3}"))).collect();
    v.join("/")
}

fn cmd_compare(a: CompareArgs, out: &mut impl Write) -> Outcome {
    let spec = a.ensemble.spec()?;
    let targets = Target::parse_list(&a.targets)?;
    if targets.is_empty() {
        return Err(Error::Domain("--targets is empty".into()).into());
    }
    let cfg = a.sampler.config();
    let start = Instant::now();
    let report = betajack::sampler::compare(&spec, &targets, &cfg)?;
    let runtime = start.elapsed();
    match a.format {
        Format::Json => Record::new("compare", Some(&spec), &report).sampled(cfg.master_seed, runtime).write(out)?,
        _ => {
            let mut t = Table::new(vec!["target", "exact", "estimate", "std_error", "z", "status"]);
            for r in &report.rows {
                t.row(vec![
                    r.target.clone(),
                    r.exact.to_string(),
                    format!("{:.6}", r.estimate),
                    format!("{:.3e}", r.std_error),
                    format!("{:.2}", r.z),
                    if r.flagged { "FLAG".into() } else { "ok".into() },
                ]);
            }
            let title = format!("{spec} seed={} acceptance={}", cfg.master_seed, acceptance_text(&report.acceptance));
            t.write(out, a.format, Some(&title))?;
        }
    }
    if report.acceptance_flagged {
        eprintln!("warning: post-burn-in acceptance rate outside [0.1, 0.6]");
    }
    Ok(report.passed())
}

fn cmd_verify(a: VerifyArgs, out: &mut impl Write) -> Outcome {
    let suites: Vec<Suite> =
        if a.suite == "all" { Suite::ALL.to_vec() } else { vec![a.suite.parse::<Suite>()?] };
    let alphas = a
        .alpha_set
        .as_deref()
        .map(|s| s.split(',').map(|x| x.trim().parse::<Rational>()).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let mut reports = Vec::new();
    for s in suites {
        reports.push(run_suite(s, a.k_max, alphas.as_deref())?);
    }
    let passed = reports.iter().all(|r| r.passed());
    match a.format {
        Format::Json => Record::new("verify", None, &reports).write(out)?,
        _ => {
            let mut t = Table::new(vec!["suite", "case", "status", "detail"]);
            for r in &reports {
                for c in &r.cases {
                    t.row(vec![
                        r.suite.to_string(),
                        c.name.clone(),
                        if c.passed { "pass".into() } else { "FAIL".into() },
                        c.detail.clone().unwrap_or_default(),
                    ]);
                }
            }
            t.write(out, a.format, None)?;
            if a.format == Format::Table {
                writeln!(out, "{}", if passed { "pass" } else { "FAIL" })?;
            }
        }
    }
    Ok(passed)
}
