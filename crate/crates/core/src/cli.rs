//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::coeffs::predict_low_coeffs;
use crate::counting::CountPolynomial;
use crate::engine::{run, EngineOptions, RunArtifact, RunResult};
use crate::oracle::{self, OracleLimits};
use crate::root_system::{CartanType, RootSystem};

#[derive(Debug, Parser)]
#[command(
    name = "kuq",
    version,
    about = "Count conjugacy classes of Sylow p-subgroups of Chevalley groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute k(U(q)) as a polynomial in v = q - 1.
    Count(CountArgs),
    /// Check stored run artifacts.
    Validate(ValidateArgs),
    /// Count orbits by brute force over a small field.
    Oracle(OracleArgs),
    /// Print the predicted coefficients of degree 0, 1, 2.
    PredictCoeffs(PredictArgs),
    /// Check that family points are orbit representatives over F_q.
    PartitionCheck(PartitionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    V,
    Q,
    Both,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Root system type, e.g. A3, B4, G2.
    #[arg(long = "type", short = 't')]
    pub cartan_type: CartanType,
    /// Term l of the lower central series (1 is the whole group).
    #[arg(long = "series", default_value_t = 1)]
    pub series: u32,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 64)]
    pub factor_budget: usize,
    #[arg(long, default_value_t = 20_000_000)]
    pub max_states: usize,
    /// Root indices (1-based) never normalized to 1.
    #[arg(long = "override", value_delimiter = ',')]
    pub overrides: Vec<usize>,
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long, default_value_t = 0)]
    pub trace: u8,
}

impl EngineArgs {
    pub fn options(&self) -> EngineOptions {
        EngineOptions {
            series_term: self.series,
            normalize: !self.no_normalize,
            normalization_overrides: self.overrides.iter().filter(|&&i| i > 0).map(|i| i - 1).collect(),
            factor_budget: self.factor_budget,
            max_states: self.max_states,
            trace: self.trace,
            workers: self.workers,
        }
    }
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = oracle::DEFAULT_STATE_LIMIT)]
    pub max_vectors: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_GROUP_LIMIT)]
    pub max_group: u64,
}

impl LimitArgs {
    fn limits(&self) -> OracleLimits {
        OracleLimits {
            states: self.max_vectors,
            group: self.max_group,
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = Basis::V)]
    pub basis: Basis,
    /// Field sizes at which to compare with the brute-force counts.
    #[arg(long, value_delimiter = ',')]
    pub oracle: Vec<u64>,
    /// Write the JSON artifact here.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Write the JSON artifact into this directory under a name derived from
    /// type, series term and version.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Include every family in the artifact.
    #[arg(long)]
    pub families: bool,
    /// Print the JSON artifact instead of text.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Artifacts written by `count`.
    #[arg(required = true)]
    pub artifacts: Vec<PathBuf>,
    /// Also compare with brute-force counts at these field sizes.
    #[arg(long, value_delimiter = ',')]
    pub oracle: Vec<u64>,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Unionfind,
    Burnside,
    Both,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "type", short = 't')]
    pub cartan_type: CartanType,
    #[arg(long, short = 'q')]
    pub q: u64,
    #[arg(long = "series", default_value_t = 1)]
    pub series: u32,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long = "type", short = 't')]
    pub cartan_type: CartanType,
    /// Skip running the engine; print the predictions only.
    #[arg(long)]
    pub no_compute: bool,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, short = 'q')]
    pub q: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print_json<T: Serialize>(v: &T) {
    emit(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn validate_q(rs: &RootSystem, q: u64) -> Result<(), String> {
    let f = oracle::Fq::new(q).map_err(|e| e.to_string())?;
    if rs.bad_primes.contains(&f.p) {
        return Err(format!(
            "q = {q} has characteristic {}, a bad prime for {}",
            f.p, rs.cartan_type
        ));
    }
    Ok(())
}

/// Union-find and Burnside counts at `q` compared with `expected`.
fn oracle_checks(rs: &RootSystem, q: u64, l: u32, expected: &BigInt, limits: OracleLimits) -> Vec<Check> {
    let mut out = Vec::new();
    match oracle::count_orbits_unionfind(rs, q, l, limits) {
        Ok(c) => out.push(Check::new(
            format!("oracle union-find q={q}"),
            BigInt::from(c.count) == *expected,
            format!("oracle {} engine {}", c.count, expected),
        )),
        Err(e) => out.push(Check::new(format!("oracle union-find q={q}"), false, e.to_string())),
    }
    match oracle::count_orbits_burnside(rs, q, l, limits) {
        Ok(c) => out.push(Check::new(
            format!("oracle burnside q={q}"),
            BigInt::from(c) == *expected,
            format!("oracle {c} engine {expected}"),
        )),
        Err(e) => out.push(Check::new(format!("oracle burnside q={q}"), false, e.to_string())),
    }
    out
}

pub fn artifact_name(ct: &CartanType, l: u32) -> String {
    format!("{}_l{}_v{}.json", ct, l, env!("CARGO_PKG_VERSION"))
}

fn write_artifact(path: &Path, artifact: &RunArtifact) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let text = serde_json::to_string_pretty(artifact).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

fn render(p: &CountPolynomial, basis: Basis) -> String {
    match basis {
        Basis::V => p.render_v(),
        Basis::Q => p.render_q(),
        Basis::Both => format!("{}  [q: {}]", p.render_v(), p.render_q()),
    }
}

fn cmd_count(args: &CountArgs) -> Result<bool, String> {
    let rs = RootSystem::from_type(args.engine.cartan_type);
    for &q in &args.oracle {
        validate_q(&rs, q)?;
    }
    let opts = args.engine.options();
    let result: RunResult = run(&rs, &opts);
    let artifact = result.artifact(args.families);
    let mut ok = result.is_complete();
    let mut checks = Vec::new();
    for &q in &args.oracle {
        let expected = result.polynomial.eval_q(q);
        for c in oracle_checks(&rs, q, opts.series_term, &expected, args.limits.limits()) {
            ok &= c.passed;
            checks.push(c);
        }
    }
    if args.json {
        print_json(&json!({ "run": artifact, "checks": checks }));
    } else {
        let label = if result.is_complete() {
            ""
        } else {
            "  (partial: bad families present)"
        };
        emit(&format!("{}{}", render(&result.polynomial, args.basis), label));
        let census: Vec<String> = result.census.iter().map(|(m, c)| format!("{m}:{c}")).collect();
        eprintln!(
            "{}: {} families, census {}, bad {}, primes {:?}",
            rs.cartan_type,
            result.families.len(),
            census.join(" "),
            result.bad.len(),
            result.primes.primes().collect::<Vec<_>>()
        );
        for c in &checks {
            emit(&format!(
                "{} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
    }
    let mut paths = Vec::new();
    if let Some(p) = &args.output {
        paths.push(p.clone());
    }
    if let Some(d) = &args.out_dir {
        paths.push(d.join(artifact_name(&rs.cartan_type, opts.series_term)));
    }
    for p in paths {
        write_artifact(&p, &artifact)?;
    }
    Ok(ok)
}

fn load_artifact(path: &Path) -> Result<RunArtifact, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn artifact_polynomial(a: &RunArtifact) -> Result<CountPolynomial, String> {
    let coeffs = a
        .coeffs_v
        .iter()
        .map(|c| c.parse::<BigInt>().map_err(|e| format!("coefficient {c}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CountPolynomial::from_v(coeffs))
}

pub fn validate_artifacts(
    artifacts: &[(String, RunArtifact)],
    oracle_qs: &[u64],
    limits: OracleLimits,
) -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    let mut polys = Vec::new();
    for (name, a) in artifacts {
        let ct: CartanType = a.cartan_type.parse().map_err(|e| format!("{name}: {e}"))?;
        let rs = RootSystem::from_type(ct);
        let p = artifact_polynomial(a)?;
        checks.push(Check::new(
            format!("{ct} l={}: complete", a.series_term),
            !a.partial && a.bad.is_empty(),
            format!("{} bad families, partial {}", a.bad.len(), a.partial),
        ));
        checks.push(Check::new(
            format!("{ct} l={}: non-negative coefficients", a.series_term),
            p.nonnegative_v(),
            p.render_v(),
        ));
        checks.push(Check::new(
            format!("{ct} l={}: text matches coefficients", a.series_term),
            CountPolynomial::parse(&a.polynomial_v).as_ref() == Some(&p),
            a.polynomial_v.clone(),
        ));
        if a.series_term == 1 {
            let pred = predict_low_coeffs(&rs);
            checks.push(Check::new(
                format!("{ct}: low coefficients"),
                pred.matches(&p),
                format!(
                    "predicted {:?} computed [{}, {}, {}]",
                    pred.as_array(),
                    p.coeff_v(0),
                    p.coeff_v(1),
                    p.coeff_v(2)
                ),
            ));
        }
        for &q in oracle_qs {
            if validate_q(&rs, q).is_err() {
                continue;
            }
            checks.extend(
                oracle_checks(&rs, q, a.series_term, &p.eval_q(q), limits)
                    .into_iter()
                    .map(|mut c| {
                        c.name = format!("{ct} l={}: {}", a.series_term, c.name);
                        c
                    }),
            );
        }
        polys.push((ct, a.series_term, p));
    }
    for (ct, l, p) in &polys {
        if ct.series != crate::root_system::Series::B {
            continue;
        }
        for (ct2, l2, p2) in &polys {
            if ct2.series == crate::root_system::Series::C && ct2.rank == ct.rank && l2 == l {
                checks.push(Check::new(
                    format!("{ct} = {ct2} l={l}"),
                    p == p2,
                    format!("{p} vs {p2}"),
                ));
            }
        }
    }
    Ok(checks)
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool, String> {
    let artifacts = args
        .artifacts
        .iter()
        .map(|p| load_artifact(p).map(|a| (p.display().to_string(), a)))
        .collect::<Result<Vec<_>, _>>()?;
    let checks = validate_artifacts(&artifacts, &args.oracle, args.limits.limits())?;
    let ok = checks.iter().all(|c| c.passed);
    print_json(&json!({ "passed": ok, "checks": checks }));
    Ok(ok)
}

fn cmd_oracle(args: &OracleArgs) -> Result<bool, String> {
    let rs = RootSystem::from_type(args.cartan_type);
    validate_q(&rs, args.q)?;
    let limits = args.limits.limits();
    let mut reports = Vec::new();
    if matches!(args.method, Method::Unionfind | Method::Both) {
        reports.push(
            oracle::timed("unionfind", args.q, || {
                oracle::count_orbits_unionfind(&rs, args.q, args.series, limits).map(|c| c.count)
            })
            .map_err(|e| e.to_string())?,
        );
    }
    if matches!(args.method, Method::Burnside | Method::Both) {
        reports.push(
            oracle::timed("burnside", args.q, || {
                oracle::count_orbits_burnside(&rs, args.q, args.series, limits)
            })
            .map_err(|e| e.to_string())?,
        );
    }
    let agree = reports.windows(2).all(|w| w[0].count == w[1].count);
    if reports.len() == 1 {
        print_json(&reports[0]);
    } else {
        print_json(&reports);
    }
    Ok(agree)
}

fn cmd_predict(args: &PredictArgs) -> Result<bool, String> {
    let rs = RootSystem::from_type(args.cartan_type);
    let pred = predict_low_coeffs(&rs);
    if args.no_compute {
        print_json(&json!({ "type": rs.cartan_type.to_string(), "predicted": pred }));
        return Ok(true);
    }
    let result = run(&rs, &EngineOptions::default());
    let computed: Vec<String> = (0..3).map(|k| result.polynomial.coeff_v(k).to_string()).collect();
    let ok = pred.matches(&result.polynomial) && result.is_complete();
    print_json(&json!({
        "type": rs.cartan_type.to_string(),
        "predicted": pred,
        "computed": computed,
        "polynomial": result.polynomial.render_v(),
        "match": ok,
    }));
    Ok(ok)
}

fn cmd_partition(args: &PartitionArgs) -> Result<bool, String> {
    let rs = RootSystem::from_type(args.engine.cartan_type);
    validate_q(&rs, args.q)?;
    let mut opts = args.engine.options();
    opts.normalize = false;
    let result = run(&rs, &opts);
    let report = oracle::verify_partition(&rs, args.q, &result, args.limits.limits()).map_err(|e| e.to_string())?;
    print_json(&report);
    Ok(report.passed)
}

/// Run the CLI; exit status 0 when every requested check passes, 1 when a
/// check fails or bad families remain, 2 on invalid input.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::PredictCoeffs(a) => cmd_predict(a),
        Command::PartitionCheck(a) => cmd_partition(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
