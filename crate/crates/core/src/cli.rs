//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and writes CSV or JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::comparative::{proposition1_report, sample_queries, Agent};
use crate::error::Error;
use crate::evaluation::{
    dt_premium_approx, eu_premium, premium_surface, rdu_premium_approx, PremiumResult,
};
use crate::grid::Grid;
use crate::oracle;
use crate::portfolio::{
    contraction_reduction_approx, contraction_reduction_exact, optimal_share,
    zero_participation_probability, PortfolioProblem,
};
use crate::preference::{UtilityFunction, WeightingFunction};
use crate::risk::{moments, AtomList, Lottery, MomentSet, Risk, SpreadRisk};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DUALRISK_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "dualrisk",
    version,
    about = "Primal and dual moments, risk premia and comparative risk aversion"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean, variance, maxiance and miniance of a lottery or spread risk.
    Moments(MomentsArgs),
    /// Exact and approximate risk premium.
    Premium(PremiumArgs),
    /// Value, derivatives and local index of a preference function on a grid.
    Index(IndexArgs),
    /// Approximate RDU premium over a wealth x probability grid.
    Surface(SurfaceArgs),
    /// Is agent 2 more risk averse than agent 1?
    Compare(CompareArgs),
    /// Optimal risky share and the contraction reduction.
    Portfolio(PortfolioArgs),
    /// Gini coefficient of a lottery.
    Gini(GiniArgs),
    /// Brute-force cross-checks.
    Oracle(OracleArgs),
}

/// `x:p,x:p,...` or `@file.json` holding `{"atoms": [[x, p], ...]}`.
#[derive(Debug, Clone)]
enum RiskInput {
    Pairs(Vec<(f64, f64)>),
    File(PathBuf),
}

impl FromStr for RiskInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if let Some(path) = s.strip_prefix('@') {
            return Ok(RiskInput::File(path.into()));
        }
        let bad = |reason: &str| Error::BadSpec {
            kind: "risk",
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        s.split(',')
            .map(|pair| {
                let (x, p) = pair
                    .split_once(':')
                    .ok_or_else(|| bad("expected x:p pairs"))?;
                let x = x
                    .trim()
                    .parse()
                    .map_err(|_| bad("outcome is not a number"))?;
                let p = p
                    .trim()
                    .parse()
                    .map_err(|_| bad("probability is not a number"))?;
                Ok((x, p))
            })
            .collect::<Result<_, _>>()
            .map(RiskInput::Pairs)
    }
}

impl RiskInput {
    fn pairs(&self) -> Result<Vec<(f64, f64)>, CliError> {
        match self {
            RiskInput::Pairs(p) => Ok(p.clone()),
            RiskInput::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let list: AtomList = serde_json::from_str(&text)?;
                Ok(list.atoms.into_iter().map(Into::into).collect())
            }
        }
    }
}

/// Comma-separated numbers.
#[derive(Debug, Clone)]
struct Numbers(Vec<f64>);

impl FromStr for Numbers {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.split(',')
            .map(|v| {
                v.trim().parse().map_err(|_| Error::BadSpec {
                    kind: "number list",
                    spec: s.to_string(),
                    reason: format!("'{v}' is not a number"),
                })
            })
            .collect::<Result<_, _>>()
            .map(Numbers)
    }
}

#[derive(Debug, Args)]
struct MomentsArgs {
    /// Lottery: `x:p,...` or `@file.json`.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "spread",
        required_unless_present = "spread"
    )]
    lottery: Option<RiskInput>,
    /// Zero-mean spread risk with unconditional probabilities.
    #[arg(long, allow_hyphen_values = true)]
    spread: Option<RiskInput>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Eu,
    Dt,
    Rdu,
}

#[derive(Debug, Args)]
struct PremiumArgs {
    #[arg(long, value_enum, default_value_t = Model::Rdu)]
    model: Model,
    #[arg(long, default_value = "linear")]
    utility: UtilityFunction,
    #[arg(long, default_value = "identity")]
    weighting: WeightingFunction,
    #[arg(long, default_value_t = 0.0)]
    w0: f64,
    #[arg(long)]
    p0: Option<f64>,
    /// Half the probability mass of the spread.
    #[arg(long)]
    eps1: Option<f64>,
    /// Payoff of the binary spread.
    #[arg(long, default_value_t = 1.0)]
    eps2: f64,
    /// Outcomes of an equiprobable spread, replacing `--eps2`.
    #[arg(long, allow_hyphen_values = true)]
    outcomes: Option<Numbers>,
    /// Zero-mean lottery for the EU premium.
    #[arg(long, allow_hyphen_values = true)]
    lottery: Option<RiskInput>,
}

#[derive(Debug, Args)]
struct IndexArgs {
    #[arg(long, conflicts_with = "utility", required_unless_present = "utility")]
    weighting: Option<WeightingFunction>,
    #[arg(long)]
    utility: Option<UtilityFunction>,
    /// `start:stop:count`; defaults to 0.01:0.99:99 for weighting functions.
    #[arg(long)]
    grid: Option<Grid>,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[arg(long)]
    utility: UtilityFunction,
    #[arg(long)]
    weighting: WeightingFunction,
    #[arg(long)]
    w0: Grid,
    #[arg(long)]
    p0: Grid,
    #[arg(long = "m2-over-2pr", default_value_t = 1.0)]
    m2_over_2pr: f64,
    #[arg(long = "mbar2-over-2pr", default_value_t = 1.0)]
    mbar2_over_2pr: f64,
    /// Sets m2/(2Pr) to this multiple of m2bar/(2Pr).
    #[arg(long, conflicts_with = "m2_over_2pr")]
    ratio: Option<f64>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, default_value = "linear")]
    utility1: UtilityFunction,
    #[arg(long, default_value = "identity")]
    weighting1: WeightingFunction,
    #[arg(long, default_value = "linear")]
    utility2: UtilityFunction,
    #[arg(long, default_value = "identity")]
    weighting2: WeightingFunction,
    #[arg(long, default_value = "1:20:101")]
    wealth_grid: Grid,
    #[arg(long, default_value = "0.01:0.99:99")]
    prob_grid: Grid,
    /// Number of sampled premium queries.
    #[arg(long, default_value_t = 500)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct PortfolioArgs {
    #[arg(long)]
    utility: UtilityFunction,
    #[arg(long, default_value = "identity")]
    weighting: WeightingFunction,
    #[arg(long)]
    w0: f64,
    /// Loss probability; defaults to the zero-participation probability.
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    r0: f64,
    #[arg(long)]
    r1: f64,
    /// Contraction size; reports the exact and approximate reduction.
    #[arg(long)]
    eps1: Option<f64>,
}

#[derive(Debug, Args)]
struct GiniArgs {
    #[arg(long, allow_hyphen_values = true)]
    lottery: RiskInput,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(subcommand)]
    check: OracleCheck,
}

#[derive(Debug, Subcommand)]
enum OracleCheck {
    /// Maxiance by pair enumeration next to the analytic value.
    Pairs(MomentsArgs),
    /// Monte Carlo maxiance of a lottery.
    Mc {
        #[arg(long, allow_hyphen_values = true)]
        lottery: RiskInput,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Finite-difference derivative next to the analytic one.
    Fd {
        #[arg(long, conflicts_with = "utility", required_unless_present = "utility")]
        weighting: Option<WeightingFunction>,
        #[arg(long)]
        utility: Option<UtilityFunction>,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 1)]
        order: u8,
    },
    /// Solves `lhs_weight * U(w0 - lambda) = rhs_value` by bisection.
    Bisect {
        #[arg(long)]
        utility: UtilityFunction,
        #[arg(long)]
        w0: f64,
        #[arg(long)]
        lhs_weight: f64,
        #[arg(long)]
        rhs_value: f64,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.name(),
            CliError::Io(_) => "Io",
            CliError::Json(_) => "Json",
        }
    }
}

/// A rendered result: CSV rows and a JSON document.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    json: serde_json::Value,
}

enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    fn single<T: Serialize>(
        header: Vec<&'static str>,
        row: Vec<Cell>,
        value: &T,
    ) -> Result<Self, CliError> {
        Ok(Table {
            header,
            rows: vec![row],
            json: serde_json::to_value(value)?,
        })
    }

    fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    for (i, cell) in row.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        match cell {
                            Cell::Num(v) => write!(out, "{v:.16e}").unwrap(),
                            Cell::Int(v) => write!(out, "{v}").unwrap(),
                            Cell::Text(s) => out.push_str(s),
                        }
                    }
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code: 0 on success, 2 on a usage error, 1 on a numerical
/// or I/O error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match thread_pool() {
        Some(pool) => pool.install(|| execute(&cli)),
        None => execute(&cli),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            1
        }
    }
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var(THREADS_ENV).ok()?.trim().parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let table = match &cli.command {
        Command::Moments(a) => moments_cmd(a)?,
        Command::Premium(a) => premium_cmd(a)?,
        Command::Index(a) => index_cmd(a)?,
        Command::Surface(a) => surface_cmd(a)?,
        Command::Compare(a) => compare_cmd(a)?,
        Command::Portfolio(a) => portfolio_cmd(a)?,
        Command::Gini(a) => gini_cmd(a)?,
        Command::Oracle(a) => oracle_cmd(&a.check)?,
    };
    let text = table.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

const MOMENT_HEADER: [&str; 5] = ["mean", "variance", "maxiance", "miniance", "total_mass"];

fn moment_cells(m: &MomentSet) -> Vec<Cell> {
    [m.mean, m.variance, m.maxiance, m.miniance, m.total_mass]
        .into_iter()
        .map(Cell::from)
        .collect()
}

enum AnyRisk {
    Lottery(Lottery),
    Spread(SpreadRisk),
}

fn load_risk(a: &MomentsArgs) -> Result<AnyRisk, CliError> {
    match (&a.lottery, &a.spread) {
        (Some(l), _) => Ok(AnyRisk::Lottery(Lottery::new(l.pairs()?)?)),
        (None, Some(s)) => Ok(AnyRisk::Spread(SpreadRisk::new(s.pairs()?)?)),
        (None, None) => unreachable!("clap requires one of --lottery or --spread"),
    }
}

fn moments_cmd(a: &MomentsArgs) -> Result<Table, CliError> {
    let (kind, m, atoms) = match load_risk(a)? {
        AnyRisk::Lottery(l) => ("lottery", moments(&l), l.to_atom_list()),
        AnyRisk::Spread(s) => ("spread", moments(&s), s.to_atom_list()),
    };
    Ok(Table {
        header: MOMENT_HEADER.to_vec(),
        rows: vec![moment_cells(&m)],
        json: json!({ "kind": kind, "atoms": atoms.atoms, "moments": m }),
    })
}

fn required(value: Option<f64>, flag: &'static str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Lib(Error::param(flag, f64::NAN, "required for this model")))
}

fn premium_cmd(a: &PremiumArgs) -> Result<Table, CliError> {
    let spread = || -> Result<SpreadRisk, CliError> {
        let eps1 = required(a.eps1, "eps1")?;
        Ok(match &a.outcomes {
            Some(xs) => SpreadRisk::n_state(eps1, &xs.0)?,
            None => SpreadRisk::binary(eps1, a.eps2)?,
        })
    };
    let result: PremiumResult = match a.model {
        Model::Eu => {
            let lottery = match &a.lottery {
                Some(l) => Lottery::new(l.pairs()?)?,
                None => {
                    let s = spread()?;
                    Lottery::new(
                        s.atoms()
                            .iter()
                            .map(|x| (x.outcome, x.probability / s.total_mass())),
                    )?
                }
            };
            eu_premium(&a.utility, a.w0, &lottery)?
        }
        Model::Dt => dt_premium_approx(&a.weighting, required(a.p0, "p0")?, &spread()?)?,
        Model::Rdu => rdu_premium_approx(
            &a.utility,
            &a.weighting,
            a.w0,
            required(a.p0, "p0")?,
            &spread()?,
        )?,
    };
    let mut row: Vec<Cell> = vec![
        result.exact.into(),
        result.approx.into(),
        result.variance_term.into(),
        result.maxiance_term.into(),
    ];
    row.extend(moment_cells(&result.moments));
    row.push(result.solver_iterations.into());
    let mut header = vec!["exact", "approx", "variance_term", "maxiance_term"];
    header.extend(MOMENT_HEADER);
    header.push("solver_iterations");
    Table::single(header, row, &result)
}

fn index_cmd(a: &IndexArgs) -> Result<Table, CliError> {
    let (var, points, evals) = match (&a.weighting, &a.utility) {
        (Some(h), _) => {
            let pts = a.grid.unwrap_or_else(Grid::probabilities).points();
            let evals = pts
                .iter()
                .map(|&p| h.eval(p))
                .collect::<Result<Vec<_>, _>>()?;
            ("p", pts, evals)
        }
        (None, Some(u)) => {
            let grid = a.grid.ok_or_else(|| {
                Error::param("grid", f64::NAN, "a wealth grid is required for utilities")
            })?;
            let pts = grid.points();
            let evals = pts
                .iter()
                .map(|&w| u.eval(w))
                .collect::<Result<Vec<_>, _>>()?;
            ("w", pts, evals)
        }
        (None, None) => unreachable!("clap requires one of --weighting or --utility"),
    };
    let rows = points
        .iter()
        .zip(&evals)
        .map(|(&x, e)| {
            vec![
                x.into(),
                e.value.into(),
                e.d1.into(),
                e.d2.into(),
                e.local_index.into(),
            ]
        })
        .collect();
    let json = points
        .iter()
        .zip(&evals)
        .map(|(&x, e)| json!({ var: x, "value": e.value, "d1": e.d1, "d2": e.d2, "local_index": e.local_index }))
        .collect();
    Ok(Table {
        header: vec![var, "value", "d1", "d2", "local_index"],
        rows,
        json: serde_json::Value::Array(json),
    })
}

fn surface_cmd(a: &SurfaceArgs) -> Result<Table, CliError> {
    let m2 = a.ratio.map_or(a.m2_over_2pr, |r| r * a.mbar2_over_2pr);
    let points = premium_surface(
        &a.utility,
        &a.weighting,
        &a.w0.points(),
        &a.p0.points(),
        m2,
        a.mbar2_over_2pr,
    )?;
    let rows = points
        .iter()
        .map(|s| {
            vec![
                s.w0.into(),
                s.p0.into(),
                s.variance_term.into(),
                s.maxiance_term.into(),
                s.lambda_approx.into(),
            ]
        })
        .collect();
    Ok(Table {
        header: vec![
            "w0",
            "p0",
            "variance_term",
            "maxiance_term",
            "lambda_approx",
        ],
        rows,
        json: serde_json::to_value(&points)?,
    })
}

fn compare_cmd(a: &CompareArgs) -> Result<Table, CliError> {
    let a1 = Agent::new(a.utility1, a.weighting1);
    let a2 = Agent::new(a.utility2, a.weighting2);
    let queries = sample_queries(
        (a.wealth_grid.start, a.wealth_grid.stop),
        (a.prob_grid.start, a.prob_grid.stop),
        a.queries,
        a.seed,
    );
    let r = proposition1_report(&a1, &a2, a.wealth_grid, a.prob_grid, &queries)?;
    let ii = &r.condition_ii;
    let rows = vec![
        vec![
            "i".into(),
            r.condition_i.holds.into(),
            r.condition_i.worst_violation.into(),
        ],
        vec![
            "ii".into(),
            ii.holds.into(),
            (-ii.worst_gap.min(ii.boundary_worst_gap.unwrap_or(0.0)))
                .max(0.0)
                .into(),
        ],
        vec![
            "iv".into(),
            r.condition_iv.holds.into(),
            r.condition_iv.worst_violation.into(),
        ],
        vec![
            "v".into(),
            r.condition_v.holds.into(),
            r.condition_v.worst_violation.into(),
        ],
    ];
    Ok(Table {
        header: vec!["condition", "holds", "worst_violation"],
        rows,
        json: serde_json::to_value(&r)?,
    })
}

fn portfolio_cmd(a: &PortfolioArgs) -> Result<Table, CliError> {
    let p0 = match a.p0 {
        Some(p) => p,
        None => zero_participation_probability(&a.weighting, a.r0, a.r1)?,
    };
    let prob = PortfolioProblem::new(a.utility, a.weighting, a.w0, p0, a.r0, a.r1)?;
    if !prob.has_positive_expected_return() {
        eprintln!("warning: R1/(R0+R1) <= p0, the risky asset has a non-positive expected return");
    }
    let s = optimal_share(&prob)?;
    let kind = serde_json::to_value(s.kind)?;
    let kind = kind.as_str().unwrap_or_default();
    let mut header = vec!["p0", "share", "kind", "foc_residual", "max_share"];
    let mut row: Vec<Cell> = vec![
        p0.into(),
        s.share.into(),
        kind.into(),
        s.foc_residual.into(),
        s.max_share.into(),
    ];
    let mut doc = json!({ "p0": p0, "solution": s });
    if let Some(eps1) = a.eps1 {
        let exact = contraction_reduction_exact(&prob, eps1)?;
        let approx = contraction_reduction_approx(&prob, eps1)?;
        header.extend(["eps1", "reduction_exact", "reduction_approx"]);
        row.extend([eps1.into(), exact.into(), approx.into()]);
        doc["contraction"] = json!({ "eps1": eps1, "exact": exact, "approx": approx });
    }
    Ok(Table {
        header,
        rows: vec![row],
        json: doc,
    })
}

fn gini_cmd(a: &GiniArgs) -> Result<Table, CliError> {
    let l = Lottery::new(a.lottery.pairs()?)?;
    let g = l.gini()?;
    let mean = l.mean();
    Table::single(
        vec!["gini", "mean"],
        vec![g.into(), mean.into()],
        &json!({ "gini": g, "mean": mean }),
    )
}

fn oracle_cmd(check: &OracleCheck) -> Result<Table, CliError> {
    match check {
        OracleCheck::Pairs(a) => {
            let (pairs, analytic) = match load_risk(a)? {
                AnyRisk::Lottery(l) => (oracle::maxiance_pairs(&l), moments(&l).maxiance),
                AnyRisk::Spread(s) => (oracle::maxiance_pairs(&s), moments(&s).maxiance),
            };
            Table::single(
                vec!["pairs", "analytic"],
                vec![pairs.into(), analytic.into()],
                &json!({ "pairs": pairs, "analytic": analytic }),
            )
        }
        OracleCheck::Mc {
            lottery,
            samples,
            seed,
        } => {
            let l = Lottery::new(lottery.pairs()?)?;
            let est = oracle::maxiance_mc(&l, *samples, *seed)?;
            let analytic = moments(&l).maxiance;
            Table::single(
                vec!["estimate", "stderr", "n_samples", "seed", "analytic"],
                vec![
                    est.estimate.into(),
                    est.stderr.into(),
                    est.n_samples.into(),
                    Cell::Int(est.seed),
                    analytic.into(),
                ],
                &json!({ "estimate": est, "analytic": analytic }),
            )
        }
        OracleCheck::Fd {
            weighting,
            utility,
            x,
            order,
        } => {
            let (fd, analytic) = match (weighting, utility) {
                (Some(h), _) => {
                    h.eval(*x)?;
                    let fd = oracle::fd_derivative(|p| Ok(h.value(p)), *x, *order)?;
                    let analytic = match order {
                        1 => Some(h.d1(*x)),
                        2 => Some(h.d2(*x)),
                        _ => None,
                    };
                    (fd, analytic)
                }
                (None, Some(u)) => {
                    let f = |w: f64| {
                        u.check_domain(w)?;
                        Ok(u.value(w))
                    };
                    let fd = oracle::fd_derivative(f, *x, *order)?;
                    let analytic = match order {
                        1 => Some(u.d1(*x)),
                        2 => Some(u.d2(*x)),
                        _ => None,
                    };
                    (fd, analytic)
                }
                (None, None) => unreachable!("clap requires one of --weighting or --utility"),
            };
            let a = analytic.unwrap_or(f64::NAN);
            Table::single(
                vec!["x", "order", "fd", "analytic"],
                vec![(*x).into(), Cell::Int((*order).into()), fd.into(), a.into()],
                &json!({ "x": x, "order": order, "fd": fd, "analytic": analytic }),
            )
        }
        OracleCheck::Bisect {
            utility,
            w0,
            lhs_weight,
            rhs_value,
            lo,
            hi,
        } => {
            let s = oracle::indifference_bisect(*lhs_weight, *rhs_value, utility, *w0, (*lo, *hi))?;
            Table::single(
                vec!["lambda", "iterations"],
                vec![s.premium.into(), s.iterations.into()],
                &json!({ "lambda": s.premium, "iterations": s.iterations }),
            )
        }
    }
}
