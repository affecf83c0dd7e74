//! Batch command-line front end. Every command prints one JSON document
//! (or a plain-text rendering of it) and returns a process exit code.

mod parse;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::laurent::{LaurentL, RationalK};
use crate::motives::{index_set, psi_tilde_check_with, unit_point, IdElement, PeriodSystem, PsiTildeReport, ResidualReport};
use crate::relations::{
    find_linear_relations, independence_report, known_relation_suite, rational_reconstruct_stable, Expr,
    IndependenceConfig, IndependenceReport, RelationBasis, RelationQuery, StableReconstruction, SuiteConfig, SuiteReport,
    DEFAULT_SLACK,
};
use crate::scalars::FieldDesc;
use crate::specials::{
    cmpl_eval, lseries_build, lseries_recursion_check_with, lseries_value_at_theta, mzv_bruteforce, mzv_fast, mzv_fast_with,
    Index, PowerSumMethod, RecursionReport, TPoint,
};
use crate::specials::power_sum::default_budget;
use crate::tate::{carlitz_pi, omega_at_theta, omega_functional_check, omega_uniform, pi_reciprocal_check, KtPoly, OmegaReport, SeriesPrecision, TSeries};

pub use parse::{parse_ktpoly, parse_rational, split_top_level};

/// Version of every JSON document printed by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

const DEFAULT_PRECISION: i64 = 30;
const DEFAULT_T_DEG: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "ffmzv", version, about = "Multizeta values, Carlitz polylogarithms and their period matrices over F_q(theta)")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Field order q = p^m (alternative to --p/--m).
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Monic modulus of F_q over F_p as comma-separated coefficient codes, lowest first.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Theta-precision.
    #[arg(long = "N", global = true)]
    pub precision: Option<i64>,
    /// Truncation degree in t.
    #[arg(long = "T", global = true)]
    pub t_deg: Option<usize>,
    /// Degree bound for relation coefficients.
    #[arg(long = "B", global = true)]
    pub degree_bound: Option<usize>,
    #[arg(long = "slack-min", global = true)]
    pub slack_min: Option<i64>,
    /// Enumeration budget (overrides FFMZV_ENUM_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Multizeta value zeta(index).
    Zeta {
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, default_value_t = ZetaMethod::Fast)]
        method: ZetaMethod,
    },
    /// Carlitz multiple polylogarithm at a point of K^d.
    Cmpl {
        #[arg(long)]
        index: String,
        /// Coordinates, e.g. "1,1/(theta+1)". Defaults to all ones.
        #[arg(long)]
        z: Option<String>,
    },
    /// Deformation series L_(u, index)(t) and its value at t = theta.
    Lseries {
        #[arg(long)]
        index: String,
        /// Coordinates in K[t], e.g. "1,t+theta". Defaults to all ones.
        #[arg(long)]
        u: Option<String>,
    },
    /// Carlitz period pi~.
    Pi,
    /// Anderson-Thakur function Omega and Omega(theta).
    Omega,
    /// Residual checks of functional and difference equations.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[arg(long)]
        index: Option<String>,
        #[arg(long)]
        u: Option<String>,
        /// Corrupt one coefficient before checking.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Relation scans and reconstructions.
    Relations {
        #[arg(value_enum)]
        action: RelationsAction,
        /// Value expression; repeat for several values in a scan.
        #[arg(long)]
        expr: Vec<String>,
        #[arg(long)]
        index: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long = "n-max")]
        n_max: Option<u32>,
        /// Second precision for stability checks.
        #[arg(long = "N-high")]
        precision_high: Option<i64>,
        /// Largest monomial degree in an independence scan.
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    /// Power sums from the Carlitz expansion.
    Fast,
    /// Power sums by enumeration.
    Enumerate,
    /// Direct enumeration of monic tuples.
    Brute,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyTarget {
    Omega,
    Lseries,
    System,
    Psitilde,
    /// Seeded cross-checks between independent code paths.
    Compat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationsAction {
    Scan,
    Rational,
    Suite,
    Independence,
}

/// Resolved run configuration, echoed in every output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    #[serde(rename = "N")]
    pub precision: i64,
    #[serde(rename = "T")]
    pub t_deg: usize,
    pub budget: u64,
    #[serde(rename = "B")]
    pub degree_bound: Option<usize>,
    pub slack_min: i64,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    fn resolve(args: &RunArgs) -> Result<(Self, FieldDesc)> {
        let modulus = args.modulus.as_deref().map(parse::parse_codes).transpose()?;
        let field = match (args.q, args.p, args.m) {
            (Some(q), None, None) if modulus.is_none() => FieldDesc::with_order(q)?,
            (Some(q), _, _) => {
                let (p, m) = crate::scalars::prime_power(q).ok_or(Error::NotPrime(q))?;
                if args.p.is_some_and(|x| x != p) || args.m.is_some_and(|x| x != m) {
                    return Err(Error::InvalidArgument(format!("--q {q} disagrees with --p/--m")));
                }
                FieldDesc::new(p, m, modulus.as_deref())?
            }
            (None, p, m) => FieldDesc::new(p.unwrap_or(2), m.unwrap_or(1), modulus.as_deref())?,
        };
        let cfg = RunConfig {
            p: field.p(),
            m: field.m(),
            modulus: field.modulus().to_vec(),
            precision: args.precision.unwrap_or(DEFAULT_PRECISION),
            t_deg: args.t_deg.unwrap_or(DEFAULT_T_DEG),
            budget: args.budget.unwrap_or_else(default_budget),
            degree_bound: args.degree_bound,
            slack_min: args.slack_min.unwrap_or(DEFAULT_SLACK),
            format: args.format,
            seed: args.seed,
        };
        if cfg.precision < 1 || cfg.t_deg < 1 || cfg.degree_bound == Some(0) || cfg.slack_min < 0 {
            return Err(Error::InvalidArgument("--N, --T and --B must be positive and --slack-min non-negative".into()));
        }
        if cfg.budget < field.q() as u64 {
            return Err(Error::InvalidArgument(format!("budget {} is below q = {}", cfg.budget, field.q())));
        }
        Ok((cfg, field))
    }

    fn bound_or(&self, default: usize) -> usize {
        self.degree_bound.unwrap_or(default)
    }
}

/// A printed document: version, command kind, configuration and payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Output<T> {
    pub schema_version: u32,
    pub kind: String,
    pub config: RunConfig,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueBody {
    pub q: u32,
    #[serde(rename = "N")]
    pub precision: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<Index>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<ZetaMethod>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<LaurentL>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub series: Option<TSeries>,
    /// For pi: whether Omega(theta) pi~ = 1 to the same precision.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reciprocal_check: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmatrixResult {
    pub element: IdElement,
    pub all_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatCase {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyReport {
    Omega(OmegaReport),
    Lseries(RecursionReport),
    System { residual: ResidualReport, submatrices: Vec<SubmatrixResult> },
    Psitilde(PsiTildeReport),
    Compat { cases: Vec<CompatCase> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyBody {
    pub target: VerifyTarget,
    pub passed: bool,
    pub fault_injected: bool,
    pub report: VerifyReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconstructionStatus {
    Success,
    FailureAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationsReport {
    Scan { labels: Vec<String>, basis: RelationBasis },
    Rational { expr: String, status: ReconstructionStatus, result: StableReconstruction },
    Suite(SuiteReport),
    Independence(Box<IndependenceReport>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsBody {
    pub action: RelationsAction,
    pub report: RelationsReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorOutput {
    pub schema_version: u32,
    pub error: ErrorBody,
}

fn parse_index(s: &str) -> Result<Index> {
    s.parse()
}

fn parse_point(f: &FieldDesc, s: Option<&str>, d: usize) -> Result<(TPoint, Vec<String>)> {
    let Some(s) = s else {
        return Ok((unit_point(f, d), vec!["1".into(); d]));
    };
    let parts = split_top_level(s);
    if parts.len() != d {
        return Err(Error::InvalidArgument(format!("{} coordinates for an index of depth {d}", parts.len())));
    }
    let point = parts.iter().map(|p| parse_ktpoly(f, p)).collect::<Result<Vec<KtPoly>>>()?;
    Ok((point, parts))
}

fn parse_scalars(f: &FieldDesc, s: Option<&str>, d: usize) -> Result<(Vec<RationalK>, Vec<String>)> {
    let Some(s) = s else {
        return Ok((vec![RationalK::one(f); d], vec!["1".into(); d]));
    };
    let parts = split_top_level(s);
    if parts.len() != d {
        return Err(Error::InvalidArgument(format!("{} coordinates for an index of depth {d}", parts.len())));
    }
    let z = parts.iter().map(|p| parse_rational(f, p)).collect::<Result<Vec<_>>>()?;
    Ok((z, parts))
}

fn value_body(f: &FieldDesc, cfg: &RunConfig) -> ValueBody {
    ValueBody {
        q: f.q(),
        precision: cfg.precision,
        index: None,
        point: None,
        method: None,
        value: None,
        series: None,
        reciprocal_check: None,
    }
}

fn finish<T: Serialize>(kind: &str, cfg: &RunConfig, body: T, code: i32) -> Result<(i32, String)> {
    let out = Output { schema_version: SCHEMA_VERSION, kind: kind.to_string(), config: cfg.clone(), body };
    let json = serde_json::to_value(&out).map_err(|e| Error::Unsupported(format!("serialization: {e}")))?;
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&json).expect("a JSON value always prints"),
        Format::Text => render_text(&json),
    };
    Ok((code, text))
}

fn render_text(v: &Value) -> String {
    fn walk(v: &Value, key: &str, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(map) => {
                if !key.is_empty() {
                    out.push_str(&format!("{pad}{key}:\n"));
                }
                let inner = if key.is_empty() { indent } else { indent + 1 };
                for (k, x) in map {
                    walk(x, k, inner, out);
                }
            }
            Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (i, x) in items.iter().enumerate() {
                    walk(x, &format!("[{i}]"), indent + 1, out);
                }
            }
            _ => out.push_str(&format!("{pad}{key}: {v}\n")),
        }
    }
    let mut out = String::new();
    walk(v, "", 0, &mut out);
    out.trim_end().to_string()
}

fn cmd_zeta(f: &FieldDesc, cfg: &RunConfig, index: &str, method: ZetaMethod) -> Result<(i32, String)> {
    let nu = parse_index(index)?;
    nu.require_nonempty()?;
    let n = cfg.precision;
    let value = match method {
        ZetaMethod::Fast => mzv_fast(f, &nu, n)?,
        ZetaMethod::Enumerate => mzv_fast_with(f, &nu, n, PowerSumMethod::Enumeration { budget: cfg.budget })?,
        ZetaMethod::Brute => mzv_bruteforce(f, &nu, n, cfg.budget)?,
    };
    let body = ValueBody { index: Some(nu), method: Some(method), value: Some(value), ..value_body(f, cfg) };
    finish("zeta", cfg, body, 0)
}

fn cmd_cmpl(f: &FieldDesc, cfg: &RunConfig, index: &str, z: Option<&str>) -> Result<(i32, String)> {
    let nu = parse_index(index)?;
    nu.require_nonempty()?;
    let (point, labels) = parse_scalars(f, z, nu.depth())?;
    let value = cmpl_eval(f, &nu, &point, cfg.precision)?;
    let body = ValueBody { index: Some(nu), point: Some(labels), value: Some(value), ..value_body(f, cfg) };
    finish("cmpl", cfg, body, 0)
}

fn cmd_lseries(f: &FieldDesc, cfg: &RunConfig, index: &str, u: Option<&str>) -> Result<(i32, String)> {
    let nu = parse_index(index)?;
    nu.require_nonempty()?;
    let (point, labels) = parse_point(f, u, nu.depth())?;
    let series = lseries_build(f, &nu, &point, &SeriesPrecision::uniform(f, cfg.t_deg, cfg.precision))?;
    let value = lseries_value_at_theta(f, &nu, &point, cfg.precision)?;
    let body = ValueBody {
        index: Some(nu),
        point: Some(labels),
        value: Some(value),
        series: Some(series),
        ..value_body(f, cfg)
    };
    finish("lseries", cfg, body, 0)
}

fn cmd_pi(f: &FieldDesc, cfg: &RunConfig) -> Result<(i32, String)> {
    let body = ValueBody {
        value: Some(carlitz_pi(f, cfg.precision)?),
        reciprocal_check: Some(pi_reciprocal_check(f, cfg.precision)?),
        ..value_body(f, cfg)
    };
    finish("pi", cfg, body, 0)
}

fn cmd_omega(f: &FieldDesc, cfg: &RunConfig) -> Result<(i32, String)> {
    let body = ValueBody {
        value: Some(omega_at_theta(f, cfg.precision)?),
        series: Some(omega_uniform(f, cfg.t_deg, cfg.precision)?),
        ..value_body(f, cfg)
    };
    finish("omega", cfg, body, 0)
}

fn required_index(index: Option<&str>, what: &str) -> Result<Index> {
    let nu = parse_index(index.ok_or_else(|| Error::InvalidArgument(format!("{what} needs --index")))?)?;
    nu.require_nonempty()?;
    Ok(nu)
}

fn verify_system(f: &FieldDesc, cfg: &RunConfig, nu: &Index, u: &[KtPoly], fault: bool) -> Result<VerifyReport> {
    let mut system = PeriodSystem::build(f, nu, u, cfg.t_deg, cfg.precision)?;
    if fault {
        system.inject_default_fault()?;
    }
    let residual = system.verify_difference_equation()?;
    let submatrices = index_set(nu.depth())?
        .into_iter()
        .map(|el| {
            let all_zero = system.submatrix(el)?.verify_difference_equation()?.all_zero;
            Ok(SubmatrixResult { element: el, all_zero })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::System { residual, submatrices })
}

/// Seeded cross-checks: fast against enumerated multizeta values, and the
/// polylogarithm against the deformation series at theta.
fn verify_compat(f: &FieldDesc, cfg: &RunConfig, fault: bool) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pool = Index::all_up_to(2, 4);
    pool.shuffle(&mut rng);
    let n = cfg.precision.min(12);
    let mut cases = Vec::new();
    for nu in pool.into_iter().take(4) {
        let fast = mzv_fast(f, &nu, n)?;
        let mut brute = match mzv_bruteforce(f, &nu, n, cfg.budget) {
            Ok(v) => v,
            Err(Error::BudgetExceeded { .. }) => {
                cases.push(CompatCase { name: format!("zeta{nu}"), passed: true, detail: "skipped: over budget".into() });
                continue;
            }
            Err(e) => return Err(e),
        };
        if fault && cases.is_empty() {
            brute.perturb(brute.floor().unwrap_or(0), f.one());
        }
        let diff = fast.first_difference(&brute);
        cases.push(CompatCase {
            name: format!("zeta{nu}"),
            passed: diff.is_none(),
            detail: diff.map_or_else(|| format!("fast = enumeration to N = {n}"), |e| format!("differ at s^{e}")),
        });
        let ones = vec![RationalK::one(f); nu.depth()];
        let li = cmpl_eval(f, &nu, &ones, n)?;
        let at = lseries_value_at_theta(f, &nu, &unit_point(f, nu.depth()), n)?;
        let diff = li.first_difference(&at);
        cases.push(CompatCase {
            name: format!("cmpl{nu} vs L(theta)"),
            passed: diff.is_none(),
            detail: diff.map_or_else(|| format!("equal to N = {n}"), |e| format!("differ at s^{e}")),
        });
    }
    Ok(VerifyReport::Compat { cases })
}

fn cmd_verify(
    f: &FieldDesc,
    cfg: &RunConfig,
    target: VerifyTarget,
    index: Option<&str>,
    u: Option<&str>,
    fault: bool,
) -> Result<(i32, String)> {
    let (report, passed) = match target {
        VerifyTarget::Omega => {
            let r = omega_functional_check(f, cfg.t_deg, cfg.precision, fault)?;
            let ok = r.holds;
            (VerifyReport::Omega(r), ok)
        }
        VerifyTarget::Lseries => {
            let nu = required_index(index, "verify lseries")?;
            let (point, _) = parse_point(f, u, nu.depth())?;
            let prec = SeriesPrecision::uniform(f, cfg.t_deg, cfg.precision);
            let r = lseries_recursion_check_with(f, &nu, &point, &prec, fault)?;
            let ok = r.holds;
            (VerifyReport::Lseries(r), ok)
        }
        VerifyTarget::System => {
            let nu = required_index(index, "verify system")?;
            let (point, _) = parse_point(f, u, nu.depth())?;
            let r = verify_system(f, cfg, &nu, &point, fault)?;
            let ok = matches!(&r, VerifyReport::System { residual, submatrices } if residual.all_zero && submatrices.iter().all(|s| s.all_zero));
            (r, ok)
        }
        VerifyTarget::Psitilde => {
            let nu = required_index(index, "verify psitilde")?;
            let point = match u {
                Some(_) => Some(parse_point(f, u, nu.depth())?.0),
                None => None,
            };
            let r = psi_tilde_check_with(f, &nu, point, cfg.t_deg, cfg.precision, fault)?;
            let ok = r.all_equal;
            (VerifyReport::Psitilde(r), ok)
        }
        VerifyTarget::Compat => {
            let r = verify_compat(f, cfg, fault)?;
            let ok = matches!(&r, VerifyReport::Compat { cases } if cases.iter().all(|c| c.passed));
            (r, ok)
        }
    };
    let body = VerifyBody { target, passed, fault_injected: fault, report };
    finish("verify", cfg, body, if passed { 0 } else { 1 })
}

fn eval_exprs(f: &FieldDesc, exprs: &[String], n: i64) -> Result<Vec<LaurentL>> {
    exprs.iter().map(|s| s.parse::<Expr>()?.eval(f, n)).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_relations(
    f: &FieldDesc,
    cfg: &RunConfig,
    action: RelationsAction,
    exprs: &[String],
    index: Option<&str>,
    u: Option<&str>,
    n_max: Option<u32>,
    precision_high: Option<i64>,
    max_degree: Option<u32>,
) -> Result<(i32, String)> {
    let n = cfg.precision;
    let high = precision_high.unwrap_or(n + 20);
    let (report, code) = match action {
        RelationsAction::Scan => {
            if exprs.is_empty() {
                return Err(Error::InvalidArgument("scan needs at least one --expr".into()));
            }
            let values = eval_exprs(f, exprs, n)?;
            let basis = find_linear_relations(&RelationQuery::new(values, cfg.bound_or(3)).with_slack(cfg.slack_min))?;
            (RelationsReport::Scan { labels: exprs.to_vec(), basis }, 0)
        }
        RelationsAction::Rational => {
            let [expr] = exprs else {
                return Err(Error::InvalidArgument("rational needs exactly one --expr".into()));
            };
            let parsed: Expr = expr.parse()?;
            let lo = parsed.eval(f, n)?;
            let hi = parsed.eval(f, high)?;
            let result = rational_reconstruct_stable(&lo, &hi, (n, high), cfg.bound_or(8), cfg.slack_min)?;
            let status = if result.stable { ReconstructionStatus::Success } else { ReconstructionStatus::FailureAtBound };
            (RelationsReport::Rational { expr: expr.clone(), status, result }, 0)
        }
        RelationsAction::Suite => {
            let defaults = SuiteConfig::default();
            let config = SuiteConfig {
                n_max: n_max.unwrap_or(defaults.n_max),
                prec: n,
                prec_high: high,
                degree_bound: cfg.bound_or(defaults.degree_bound),
                slack_min: cfg.slack_min,
                ..defaults
            };
            let r = known_relation_suite(f, &config)?;
            let code = if r.all_passed { 0 } else { 1 };
            (RelationsReport::Suite(r), code)
        }
        RelationsAction::Independence => {
            let nu = required_index(index, "relations independence")?;
            let (point, _) = parse_point(f, u, nu.depth())?;
            let defaults = IndependenceConfig::default();
            let config = IndependenceConfig {
                degree_bound: cfg.bound_or(defaults.degree_bound),
                prec: n,
                prec_check: precision_high.unwrap_or(2 * n),
                slack_min: cfg.slack_min,
                max_degree: max_degree.unwrap_or(defaults.max_degree),
                ..defaults
            };
            (RelationsReport::Independence(Box::new(independence_report(f, &nu, &point, &config)?)), 0)
        }
    };
    finish("relations", cfg, RelationsBody { action, report }, code)
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let (cfg, f) = RunConfig::resolve(&cli.run)?;
    match &cli.command {
        Command::Zeta { index, method } => cmd_zeta(&f, &cfg, index, *method),
        Command::Cmpl { index, z } => cmd_cmpl(&f, &cfg, index, z.as_deref()),
        Command::Lseries { index, u } => cmd_lseries(&f, &cfg, index, u.as_deref()),
        Command::Pi => cmd_pi(&f, &cfg),
        Command::Omega => cmd_omega(&f, &cfg),
        Command::Verify { target, index, u, inject_fault } => {
            cmd_verify(&f, &cfg, *target, index.as_deref(), u.as_deref(), *inject_fault)
        }
        Command::Relations { action, expr, index, u, n_max, precision_high, max_degree } => cmd_relations(
            &f,
            &cfg,
            *action,
            expr,
            index.as_deref(),
            u.as_deref(),
            *n_max,
            *precision_high,
            *max_degree,
        ),
    }
}

fn error_output(kind: &str, message: String) -> String {
    let out = ErrorOutput { schema_version: SCHEMA_VERSION, error: ErrorBody { kind: kind.into(), message } };
    serde_json::to_string_pretty(&out).expect("error output always serializes")
}

/// Runs one command line (including the program name) and returns the exit
/// code with the text to print. Failures are structured JSON with code 2.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (2, error_output("usage", e.to_string().trim_end().to_string())),
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => (2, error_output(e.kind(), e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(line: &str) -> Value {
        let (code, out) = run(line.split_whitespace());
        assert_eq!(code, 0, "{out}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn zeta_value_document() {
        let v = run_ok("ffmzv zeta --q 3 --index 1,2 --N 10");
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["kind"], "zeta");
        assert_eq!(v["q"], 3);
        assert_eq!(v["N"], 10);
        assert_eq!(v["index"], serde_json::json!([1, 2]));
    }

    #[test]
    fn zero_part_is_rejected() {
        let (code, out) = run("ffmzv zeta --q 3 --index 0,1".split_whitespace());
        assert_eq!(code, 2);
        let e: ErrorOutput = serde_json::from_str(&out).unwrap();
        assert!(e.error.message.contains("index parts must be ≥ 1"), "{out}");
        assert_eq!(e.error.kind, "invalid_index");
    }

    #[test]
    fn omega_verify_and_fault() {
        assert_eq!(run("ffmzv verify omega --q 2 --T 4 --N 20".split_whitespace()).0, 0);
        assert_eq!(run("ffmzv verify omega --q 2 --T 4 --N 20 --inject-fault".split_whitespace()).0, 1);
    }

    #[test]
    fn budget_must_cover_q() {
        let (code, out) = run("ffmzv pi --q 4 --budget 3".split_whitespace());
        assert_eq!(code, 2, "{out}");
    }
}
