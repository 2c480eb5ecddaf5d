//! Command-line front end.
//!
//! Exit status: 0 success, 1 usage or input error, 2 a verification failure.

mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use table::{format_float, Cell, Format, Table, COLUMNS_VERSION};

use crate::error::{Error, Result};
use crate::scalar::{BoundOrder, PositivePair};
use crate::search::{convergence, min_m_table, BoundsRow, Grid, MinM};
use crate::verify::{
    run_suite, CheckConfig, CheckId, InstanceSpec, Report, Tolerances, Variant, XKind, MAX_DIM,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Failure records written to the report output.
const MAX_LISTED_FAILURES: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "logmean",
    version,
    about = "Logarithmic-mean bounds: evaluation, tables and randomized verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every mean and bound at one (a, b) or t.
    Eval(EvalArgs),
    /// Bounds and signed gaps to L(t, 1) over a grid of t and orders m.
    Table(TableArgs),
    /// Seeded randomized check of the inequality chains.
    Verify(VerifyArgs),
    /// Errors of the refined sums against L(t, 1) and the fitted order.
    Converge(ConvergeArgs),
    /// Least m with beta_m(t) <= ((t^(1/3) + 1)/2)^3, per t.
    MinM(MinMArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub t: Option<f64>,
    #[arg(long, requires = "b")]
    pub a: Option<f64>,
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
    /// Orders of the Riemann-type sums, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub m: Vec<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// `lo:hi:count:log|lin`; defaults to 61 log-spaced points in [1e-3, 1e3].
    #[arg(long, conflicts_with = "t")]
    pub t_grid: Option<Grid>,
    /// A single t instead of a grid.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,5,10,32")]
    pub m: Vec<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Fixed matrix dimension; when absent each trial draws it from 1..=8.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated check ids; all checks when absent.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Orders for the chains (upper chains use those >= 2).
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Eigenvalue range `lo:hi` for the random matrices and scalar pairs.
    #[arg(long, default_value = "1e-3:1e3")]
    pub eig_range: String,
    #[arg(long, default_value = "gaussian_complex")]
    pub x_kind: XKind,
    /// Allow exact zero eigenvalues in A and B.
    #[arg(long)]
    pub allow_singular: bool,
    #[arg(long)]
    pub tol_scalar: Option<f64>,
    #[arg(long)]
    pub tol_matrix: Option<f64>,
    #[arg(long)]
    pub tol_lemma: Option<f64>,
    /// Check the alternative right-hand sides (AX+BX in upper_chain, coefficient 1/2 in props_41).
    #[arg(long)]
    pub as_printed: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub m: Vec<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MinMArgs {
    #[arg(long, conflicts_with = "t")]
    pub t_grid: Option<Grid>,
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub m_max: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn orders(ms: &[usize]) -> Result<Vec<BoundOrder>> {
    if ms.is_empty() {
        return Err(Error::InvalidArgument(
            "--m needs at least one order".into(),
        ));
    }
    ms.iter().map(|&m| BoundOrder::new(m)).collect()
}

fn bounds_columns() -> Vec<&'static str> {
    BoundsRow::VALUE_COLUMNS
        .iter()
        .chain(&BoundsRow::GAP_COLUMNS)
        .copied()
        .collect()
}

fn bounds_cells(r: &BoundsRow) -> Vec<Cell> {
    let mut cells: Vec<Cell> = vec![r.a.into(), r.b.into(), r.m.into(), r.log_mean.into()];
    cells.extend(r.bounds().map(Cell::from));
    cells.extend(r.gaps().map(Cell::from));
    cells
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Table> {
    let pair = match (args.t, args.a, args.b) {
        (Some(t), None, None) => PositivePair::ratio(t)?,
        (None, Some(a), Some(b)) => PositivePair::new(a, b)?,
        (None, None, None) => {
            return Err(Error::InvalidArgument(
                "eval needs --t or --a and --b".into(),
            ))
        }
        _ => return Err(Error::InvalidArgument("use either --t or --a/--b".into())),
    };
    let mut table = Table::new("eval", &bounds_columns());
    for m in orders(&args.m)? {
        table.push(bounds_cells(&BoundsRow::new(pair, m)));
    }
    Ok(table)
}

fn grid_points(grid: Option<Grid>, single: &[f64]) -> Result<(Vec<f64>, String)> {
    if !single.is_empty() {
        for &t in single {
            PositivePair::ratio(t)?;
        }
        let desc = single
            .iter()
            .map(|&t| format_float(t))
            .collect::<Vec<_>>()
            .join(",");
        return Ok((single.to_vec(), desc));
    }
    let g = grid.unwrap_or_default();
    Ok((
        g.points(),
        format!(
            "{}:{}:{}:{}",
            format_float(g.lo),
            format_float(g.hi),
            g.count,
            if g.log { "log" } else { "lin" }
        ),
    ))
}

pub fn cmd_table(args: &TableArgs) -> Result<Table> {
    let single: Vec<f64> = args.t.into_iter().collect();
    let (ts, desc) = grid_points(args.t_grid, &single)?;
    let ms = orders(&args.m)?;
    let mut table = Table::new("table", &bounds_columns());
    table.meta("t_grid", desc);
    table.meta("m", &args.m);
    for &t in &ts {
        let pair = PositivePair::ratio(t)?;
        for &m in &ms {
            table.push(bounds_cells(&BoundsRow::new(pair, m)));
        }
    }
    Ok(table)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidArgument(format!("eig range `{s}` is not lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn verify_inputs(args: &VerifyArgs) -> Result<(InstanceSpec, Vec<CheckId>, CheckConfig)> {
    let spec = InstanceSpec {
        seed: args.seed,
        dim: args.dim.unwrap_or(8),
        vary_dim: args.dim.is_none(),
        eig_range: parse_range(&args.eig_range)?,
        require_pd: !args.allow_singular,
        x_kind: args.x_kind,
    };
    if let Some(d) = args.dim {
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "--dim must be in [1, {MAX_DIM}]"
            )));
        }
    }
    spec.validate()?;
    let ids = if args.checks.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        args.checks
            .iter()
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<CheckId>>>()?
    };
    let defaults = Tolerances::default();
    let tol = |v: Option<f64>, d: f64, name: &str| match v {
        Some(x) if !(x >= 0.0 && x.is_finite()) => {
            Err(Error::InvalidArgument(format!("--{name} must be >= 0")))
        }
        Some(x) => Ok(x),
        None => Ok(d),
    };
    let mut cfg = CheckConfig {
        tolerances: Tolerances {
            scalar: tol(args.tol_scalar, defaults.scalar, "tol-scalar")?,
            matrix: tol(args.tol_matrix, defaults.matrix, "tol-matrix")?,
            lemma: tol(args.tol_lemma, defaults.lemma, "tol-lemma")?,
        },
        variant: if args.as_printed {
            Variant::AsPrinted
        } else {
            Variant::Corrected
        },
        ..CheckConfig::default()
    };
    if !args.m.is_empty() {
        orders(&args.m)?;
        cfg.lower_orders = args.m.clone();
        cfg.upper_orders = args.m.iter().copied().filter(|&m| m >= 2).collect();
        if cfg.upper_orders.is_empty() {
            return Err(Error::InvalidArgument(
                "--m needs at least one order >= 2".into(),
            ));
        }
    }
    cfg.validate()?;
    Ok((spec, ids, cfg))
}

pub const VERIFY_COLUMNS: [&str; 11] = [
    "check",
    "link",
    "trials",
    "passed",
    "failed",
    "skipped",
    "evaluated",
    "link_failures",
    "worst_relative",
    "worst_margin",
    "worst_trial",
];

pub fn report_table(report: &Report) -> Table {
    let mut table = Table::new("verify", &VERIFY_COLUMNS);
    table.meta("seed", report.meta.seed);
    table.meta("trials", report.meta.trials);
    table.meta("spec", &report.meta.spec);
    table.meta("config", &report.meta.config);
    table.meta("checks", &report.meta.checks);
    table.meta("total_failures", report.total_failures());
    table.meta(
        "failures_listed",
        report.failures.len().min(MAX_LISTED_FAILURES),
    );
    table.meta(
        "failures",
        &report.failures[..report.failures.len().min(MAX_LISTED_FAILURES)],
    );
    for c in &report.checks {
        let id = c.check_id.as_str();
        let head: Vec<Cell> = vec![
            id.into(),
            "*".into(),
            c.trials.into(),
            c.passed.into(),
            c.failed.into(),
            c.skipped.into(),
        ];
        let evaluated: u64 = c.links.iter().map(|l| l.evaluated).sum();
        let link_failures: u64 = c.links.iter().map(|l| l.failures).sum();
        let mut row = head;
        row.extend([
            evaluated.into(),
            link_failures.into(),
            c.worst_relative().into(),
            Cell::Empty,
            Cell::Empty,
        ]);
        table.push(row);
        for l in &c.links {
            table.push(vec![
                id.into(),
                l.label.as_str().into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                l.evaluated.into(),
                l.failures.into(),
                l.worst_relative.into(),
                l.worst_margin.into(),
                l.worst_trial.into(),
            ]);
        }
    }
    table
}

/// One line per check plus a total, for stderr.
pub fn report_summary(report: &Report) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let worst = c
            .worst_relative()
            .map_or_else(|| "-".to_string(), format_float);
        s.push_str(&format!(
            "{:<14} passed={} failed={} skipped={} worst_relative_margin={}\n",
            c.check_id.as_str(),
            c.passed,
            c.failed,
            c.skipped,
            worst
        ));
    }
    let status = if report.passed() { "PASS" } else { "FAIL" };
    s.push_str(&format!(
        "verify {status}: seed={} trials={} checks={} failing_trials={}\n",
        report.meta.seed,
        report.meta.trials,
        report.checks.len(),
        report.total_failures()
    ));
    s
}

pub fn cmd_converge(args: &ConvergeArgs) -> Result<Table> {
    let mut table = Table::new(
        "converge",
        &[
            "t",
            "m",
            "alpha_error",
            "beta_error",
            "alpha_local_order",
            "beta_local_order",
            "alpha_order",
            "beta_order",
        ],
    );
    table.meta("m", &args.m);
    for &t in &args.t {
        let c = convergence(t, &args.m)?;
        for r in &c.rows {
            table.push(vec![
                t.into(),
                r.m.into(),
                r.alpha_error.into(),
                r.beta_error.into(),
                r.alpha_local_order.into(),
                r.beta_local_order.into(),
                c.alpha_order.into(),
                c.beta_order.into(),
            ]);
        }
    }
    Ok(table)
}

pub fn cmd_min_m(args: &MinMArgs) -> Result<Table> {
    let (ts, desc) = grid_points(args.t_grid, &args.t)?;
    let result = min_m_table(&ts, args.m_max)?;
    let mut table = Table::new("min-m", &["t", "status", "m", "beta_m", "lin"]);
    table.meta("t_grid", desc);
    table.meta("m_max", args.m_max);
    table.meta("grid_max", result.grid_max);
    for r in &result.rows {
        let (status, m) = match r.result {
            MinM::Found(m) => ("found", m),
            MinM::NotFound(m) => ("not_found", m),
        };
        table.push(vec![
            r.t.into(),
            status.into(),
            m.into(),
            r.beta.into(),
            r.lin.into(),
        ]);
    }
    Ok(table)
}

fn emit(out: &OutputArgs, table: &Table, stdout: &mut dyn Write) -> Result<()> {
    let text = table.render(out.format)?;
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => stdout.write_all(text.as_bytes()).map_err(io),
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Eval(a) => emit(&a.out, &cmd_eval(a)?, stdout).map(|_| EXIT_OK),
        Command::Table(a) => emit(&a.out, &cmd_table(a)?, stdout).map(|_| EXIT_OK),
        Command::Converge(a) => emit(&a.out, &cmd_converge(a)?, stdout).map(|_| EXIT_OK),
        Command::MinM(a) => emit(&a.out, &cmd_min_m(a)?, stdout).map(|_| EXIT_OK),
        Command::Verify(a) => {
            let (spec, ids, cfg) = verify_inputs(a)?;
            let report = run_suite(&spec, a.trials, &ids, &cfg)?;
            emit(&a.out, &report_table(&report), stdout)?;
            let _ = stderr.write_all(report_summary(&report).as_bytes());
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("logmean").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_at_four() {
        let (code, out, _) = run_str(&["eval", "--t", "4", "--m", "2"]);
        assert_eq!(code, 0);
        let line = out.lines().find(|l| l.starts_with("4,1,2,")).unwrap();
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let want = [
            4.0,
            1.0,
            2.0,
            2.164042561333445,
            2.0,
            2.5,
            2.1652161819092295,
            13.0 / 6.0,
            2.159464628692928,
            2.121320343559643,
            2.25,
            3.0,
            1.5,
        ];
        for (g, w) in cells.iter().zip(want) {
            assert!((g - w).abs() < 1e-14, "{g} vs {w}");
        }
    }

    #[test]
    fn eval_at_one_is_all_ones() {
        let (code, out, _) = run_str(&["eval", "--t", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let row = &v["rows"][0];
        for k in [
            "L", "geo", "arith", "lin", "polya", "rational", "alpha", "beta", "gamma", "delta",
        ] {
            assert_eq!(row[k].as_f64().unwrap(), 1.0, "{k}");
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["eval"]).0, 1);
        assert_eq!(run_str(&["eval", "--t", "-1"]).0, 1);
        assert_eq!(run_str(&["eval", "--t", "2", "--a", "1", "--b", "2"]).0, 1);
        assert_eq!(run_str(&["bogus"]).0, 1);
        let (code, _, err) = run_str(&["verify", "--checks", "nope", "--trials", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("nope"));
        assert_eq!(run_str(&["verify", "--trials", "0"]).0, 1);
        assert_eq!(run_str(&["converge", "--t", "1"]).0, 1);
        assert_eq!(run_str(&["min-m", "--t", "4", "--m-max", "1"]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn printed_variant_fails_and_exits_two() {
        let (code, out, err) = run_str(&[
            "verify",
            "--checks",
            "upper_chain",
            "--trials",
            "20",
            "--as-printed",
            "--dim",
            "4",
        ]);
        assert_eq!(code, 2, "{err}");
        assert!(err.contains("verify FAIL"));
        assert!(out.contains("# total_failures="));
        let (code, _, err) = run_str(&[
            "verify",
            "--checks",
            "upper_chain",
            "--trials",
            "20",
            "--dim",
            "4",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(err.contains("verify PASS"));
    }

    #[test]
    fn min_m_and_table_commands() {
        let (code, out, _) = run_str(&["min-m", "--t", "4,1", "--m-max", "1000"]);
        assert_eq!(code, 0);
        assert!(out.contains("\n4,found,18,"));
        assert!(out.contains("\n1,found,1,1,1\n"));
        let (code, out, _) = run_str(&["table", "--t", "1", "--m", "3"]);
        assert_eq!(code, 0);
        let row = out.lines().last().unwrap();
        assert!(
            row.split(',')
                .skip(13)
                .all(|g| g.parse::<f64>().unwrap() == 0.0),
            "{row}"
        );
    }
}
