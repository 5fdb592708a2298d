//! Command-line front end: solve equations, reproduce the reference run,
//! print order tables and compare methods at equal cost.

pub mod render;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use secantx::analysis::{
    efficiency_index, empirical_order, equal_cost_table, order_bounds, order_of_convergence,
    sigma_sequence,
};
use secantx::funcspec::{builtin_corpus, lookup, CorpusEntry, Expression, ParseError};
use secantx::{
    newton_solve, solve, Method, Precision, ProblemSpec, Real, SolveReport, SolverConfig, StopRule,
    Termination,
};

use render::{Format, Grid};

const GRAMMAR: &str = "\
FUNCTIONS:
  Either @NAME for a built-in function (see `secantx corpus`) or an
  expression in x:
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | 'x' | '(' expr ')' | exp(..) | ln(..) | sin(..) | cos(..)
  '^' is right-associative; its exponent must be an integer unless the
  base is a positive number or an exp(..) call.";

#[derive(Debug, Parser)]
#[command(name = "secantx", version, about = "Generalized secant root finding in extended precision", after_help = GRAMMAR)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve f(x) = 0 with the generalized secant method of order k.
    Solve(SolveArgs),
    /// Rerun the x^3 - 8 reference experiment (k = 2, starts 5 and 4, 113 bits).
    ReproTable2(ReproArgs),
    /// Tabulate the convergence order s_k, its bounds and efficiency index.
    OrderTable(OrderArgs),
    /// Compare methods after equal numbers of function evaluations.
    Compare(CompareArgs),
    /// List the built-in functions.
    Corpus(FormatArgs),
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Expression in x, or @NAME for a built-in function.
    #[arg(long, allow_hyphen_values = true)]
    pub function: String,
    /// Interpolation order (number of past iterates used is k + 1).
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated starting points, oldest first (2 to k + 1 values).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Known root, used for the error columns.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Working precision in bits.
    #[arg(long, env = "SECANTX_PRECISION_BITS", default_value_t = 256)]
    pub precision: u32,
    /// Step tolerance, relative to 1 + |x_n|.
    #[arg(long)]
    pub tol_step: Option<String>,
    /// Residual tolerance on |f(x_n)|.
    #[arg(long)]
    pub tol_residual: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Significant digits printed for x_n and f(x_n).
    #[arg(long, default_value_t = 17)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(long, default_value_t = 113)]
    pub precision: u32,
    #[arg(long, default_value_t = 36)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Largest k tabulated.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=200))]
    pub k_max: u32,
    #[arg(long, env = "SECANTX_PRECISION_BITS", default_value_t = 256)]
    pub precision: u32,
    /// Significant digits printed.
    #[arg(long, default_value_t = 17)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Expression in x, or @NAME for a built-in function.
    #[arg(long, allow_hyphen_values = true)]
    pub function: String,
    /// Comma-separated starting points, oldest first. Newton starts from
    /// the first; an order-k secant method uses the first k + 1.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Methods: gsec:K, secant (= gsec:1), newton.
    #[arg(long, value_delimiter = ',', required = true)]
    pub methods: Vec<String>,
    /// Derivative expression for Newton when the function is not built in.
    #[arg(long, allow_hyphen_values = true)]
    pub derivative: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, env = "SECANTX_PRECISION_BITS", default_value_t = 256)]
    pub precision: u32,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Significant digits printed for iterates when no root is known.
    #[arg(long, default_value_t = 17)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unparsable input: exit 1.
    Usage(String),
    /// The requested computation cannot proceed: exit 3.
    Breakdown(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Breakdown(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Breakdown(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<secantx::Error> for CliError {
    fn from(e: secantx::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Exit code for a finished solve.
pub fn exit_code_for(t: Termination) -> i32 {
    match t {
        Termination::Converged | Termination::ResidualZero => 0,
        Termination::MaxIterations => 2,
        Termination::DerivativeBreakdown
        | Termination::DuplicateNode
        | Termination::NaNEncountered => 3,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        // reader went away (e.g. piped into `head`)
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::ReproTable2(a) => cmd_repro_table2(a, out),
        Command::OrderTable(a) => cmd_order_table(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Corpus(a) => cmd_corpus(a, out),
    }
}

fn precision(bits: u32) -> CliResult<Precision> {
    Precision::new(bits).map_err(|e| CliError::Usage(format!("--precision: {e}")))
}

fn parse_real(flag: &str, text: &str, prec: Precision) -> CliResult<Real> {
    Real::parse(text.trim(), prec).map_err(|e| CliError::Usage(format!("{flag}: {e}: {text:?}")))
}

fn parse_points(text: &str, prec: Precision) -> CliResult<Vec<Real>> {
    text.split(',')
        .map(|s| parse_real("--x0", s, prec))
        .collect()
}

fn parse_expression(flag: &str, text: &str) -> CliResult<Expression> {
    Expression::parse(text).map_err(|e: ParseError| {
        // echo the input with a caret under the offending position
        let caret = " ".repeat(e.offset);
        CliError::Usage(format!("{flag}: {e}\n  {text}\n  {caret}^"))
    })
}

/// The problem named by `--function`, plus its corpus entry if built in.
struct Target {
    problem: ProblemSpec,
    entry: Option<&'static CorpusEntry>,
}

fn target(
    function: &str,
    derivative: Option<&str>,
    alpha: Option<&str>,
    prec: Precision,
) -> CliResult<Target> {
    let (mut problem, entry) = match function.strip_prefix('@') {
        Some(name) => {
            let entry = lookup(name).map_err(|e| CliError::Usage(e.to_string()))?;
            (entry.to_problem(prec)?, Some(entry))
        }
        None => {
            let f = parse_expression("--function", function)?;
            let problem = ProblemSpec::new(function, Arc::new(move |x: &Real| f.eval(x)));
            (problem, None)
        }
    };
    if let Some(d) = derivative {
        let df = parse_expression("--derivative", d)?;
        problem.fprime = Some(Arc::new(move |x: &Real| df.eval(x)));
    }
    if let Some(a) = alpha {
        problem.known_root = Some(parse_real("--alpha", a, prec)?);
    }
    Ok(Target { problem, entry })
}

fn starting_points(
    x0: Option<&str>,
    entry: Option<&CorpusEntry>,
    prec: Precision,
) -> CliResult<Vec<Real>> {
    match (x0, entry) {
        (Some(text), _) => parse_points(text, prec),
        (None, Some(e)) => Ok(e.initial_points(prec)?),
        (None, None) => Err(CliError::Usage("--x0 is required for an expression".into())),
    }
}

fn opt_real(flag: &str, text: Option<&str>, prec: Precision) -> CliResult<Option<Real>> {
    text.map(|t| parse_real(flag, t, prec)).transpose()
}

fn fmt_eps(e: &Real) -> String {
    e.to_sci_string(4)
}

/// Rows of an iteration history: n, x_n, [f_n,] eps_n, sigma_n, order_n.
fn history_grid(report: &SolveReport, k: usize, digits: usize, with_f: bool) -> Grid {
    let mut headers = vec!["n", "x_n"];
    if with_f {
        headers.push("f_n");
    }
    headers.extend(["epsilon_n", "sigma_n", "order_n"]);
    let mut grid = Grid::new(headers);
    let errors = report.errors();
    let (sigma, order) = match &errors {
        Some(errs) => (sigma_sequence(errs, k), empirical_order(errs)),
        None => (
            vec![None; report.records.len()],
            vec![None; report.records.len()],
        ),
    };
    for (i, r) in report.records.iter().enumerate() {
        let mut row = vec![Some(r.n.to_string()), Some(r.x.to_sci_string(digits))];
        if with_f {
            row.push(Some(r.f.to_sci_string(digits)));
        }
        row.push(r.error.as_ref().map(fmt_eps));
        row.push(sigma[i].as_ref().map(|s| s.to_fixed_string(4)));
        row.push(order[i].as_ref().map(|s| s.to_fixed_string(3)));
        grid.push(row);
    }
    grid
}

const HISTORY_KEYS: [&str; 6] = ["n", "x", "f", "epsilon", "sigma", "order_estimate"];

fn write_summary(out: &mut dyn Write, report: &SolveReport, digits: usize) -> io::Result<()> {
    writeln!(out)?;
    writeln!(out, "termination: {}", report.termination)?;
    writeln!(out, "final x:     {}", report.final_x.to_sci_string(digits))?;
    writeln!(out, "evaluations: {}", report.evaluations)?;
    if let Some(note) = &report.note {
        writeln!(out, "note:        {note}")?;
    }
    Ok(())
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Converged => "Converged",
        Termination::ResidualZero => "ResidualZero",
        Termination::MaxIterations => "MaxIterations",
        Termination::DerivativeBreakdown => "DerivativeBreakdown",
        Termination::DuplicateNode => "DuplicateNode",
        Termination::NaNEncountered => "NaNEncountered",
    }
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult<i32> {
    let prec = precision(a.precision)?;
    let t = target(&a.function, None, a.alpha.as_deref(), prec)?;
    let k = a.k.or(t.entry.map(|e| e.suggested_k)).unwrap_or(2);
    let points = starting_points(a.x0.as_deref(), t.entry, prec)?;
    let stop = StopRule {
        tol_residual: opt_real("--tol-residual", a.tol_residual.as_deref(), prec)?,
        tol_step: opt_real("--tol-step", a.tol_step.as_deref(), prec)?,
        max_iterations: a.max_iter,
        ..StopRule::default()
    };
    let config = SolverConfig::new(k, points)?
        .with_precision(prec)?
        .with_stop(stop);
    let report = solve(&t.problem, &config);
    let grid = history_grid(&report, k, a.digits, true);
    match a.format {
        Format::Table => {
            grid.write_table(out)?;
            write_summary(out, &report, a.digits)?;
        }
        Format::Csv => grid.write_csv(out)?,
        Format::Json => {
            let doc = json!({
                "config": {
                    "function": a.function,
                    "k": k,
                    "x0": config.initial_points().iter().map(|x| x.to_sci_string(a.digits)).collect::<Vec<_>>(),
                    "precision": prec.bits(),
                    "alpha": t.problem.known_root.as_ref().map(|r| r.to_sci_string(a.digits)),
                },
                "records": grid.json_rows(&HISTORY_KEYS),
                "termination": termination_name(report.termination),
                "final_x": report.final_x.to_sci_string(a.digits),
                "evaluations": report.evaluations,
                "note": report.note,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )?;
        }
    }
    Ok(exit_code_for(report.termination))
}

/// One of the reference run's limit checks.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    pub name: &'static str,
    pub value: String,
    pub target: String,
    pub tolerance: &'static str,
    pub pass: bool,
}

/// The reference run: x^3 - 8, k = 2, starts 5 and 4.
pub fn reference_run(prec: Precision) -> CliResult<(SolveReport, Vec<LimitCheck>)> {
    let entry = lookup("paper-x3m8")?;
    let problem = entry.to_problem(prec)?;
    let config = SolverConfig::new(2, entry.initial_points(prec)?)?;
    let report = solve(&problem, &config);
    let errors = report.errors().expect("root is known");
    let mut checks = Vec::new();

    let l = Real::from_i64(-1, prec)
        .div_i64(12)
        .map_err(secantx::Error::from)?;
    if let Some(last) = sigma_sequence(&errors, 2).into_iter().flatten().last() {
        let gap = last.sub(&l).map_err(secantx::Error::from)?.abs();
        checks.push(LimitCheck {
            name: "sigma -> L",
            value: last.to_fixed_string(4),
            target: l.to_fixed_string(5),
            tolerance: "1%",
            pass: gap <= l.abs().div_i64(100).map_err(secantx::Error::from)?,
        });
    }
    let s2 = order_of_convergence(
        2,
        &Real::parse("1e-30", prec).map_err(secantx::Error::from)?,
    );
    if let Some(last) = empirical_order(&errors).into_iter().flatten().last() {
        let gap = last.sub(&s2).map_err(secantx::Error::from)?.abs();
        checks.push(LimitCheck {
            name: "order -> s_2",
            value: last.to_fixed_string(3),
            target: s2.to_fixed_string(5),
            tolerance: "0.1",
            pass: gap <= Real::parse("0.1", prec).map_err(secantx::Error::from)?,
        });
    }
    Ok((report, checks))
}

pub fn cmd_repro_table2(a: &ReproArgs, out: &mut dyn Write) -> CliResult<i32> {
    let prec = precision(a.precision)?;
    let (report, checks) = reference_run(prec)?;
    let grid = history_grid(&report, 2, a.digits, false);
    match a.format {
        Format::Table => {
            writeln!(
                out,
                "f(x) = x^3 - 8, k = 2, x0 = 5, x1 = 4, {} bits",
                prec.bits()
            )?;
            writeln!(out)?;
            grid.write_table(out)?;
            writeln!(out)?;
            for c in &checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "[{verdict}] {}: last {} vs {} (within {})",
                    c.name, c.value, c.target, c.tolerance
                )?;
            }
        }
        Format::Csv => grid.write_csv(out)?,
        Format::Json => {
            let keys = ["n", "x", "epsilon", "sigma", "order_estimate"];
            let doc = json!({
                "config": {"function": "x^3 - 8", "k": 2, "x0": ["5", "4"], "precision": prec.bits()},
                "records": grid.json_rows(&keys),
                "termination": termination_name(report.termination),
                "checks": checks.iter().map(|c| json!({
                    "name": c.name, "value": c.value, "target": c.target,
                    "tolerance": c.tolerance, "pass": c.pass,
                })).collect::<Vec<_>>(),
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )?;
        }
    }
    Ok(0)
}

pub fn cmd_order_table(a: &OrderArgs, out: &mut dyn Write) -> CliResult<i32> {
    let prec = precision(a.precision)?;
    let tol = Real::one(prec)
        .mul_pow2(8 - i64::from(prec.bits()))
        .map_err(secantx::Error::from)?;
    let decimals = a.digits.saturating_sub(1).max(1);
    let mut grid = Grid::new(["k", "s_k", "lower", "upper", "EI"]);
    for k in 1..=a.k_max as usize {
        let s = order_of_convergence(k, &tol);
        let (lo, hi) = match order_bounds(k, prec) {
            Ok((lo, hi)) => (
                Some(lo.to_fixed_string(decimals)),
                Some(hi.to_fixed_string(decimals)),
            ),
            Err(_) => (None, None),
        };
        let ei = efficiency_index(&s, 1)?;
        grid.push(vec![
            Some(k.to_string()),
            Some(s.to_fixed_string(decimals)),
            lo,
            hi,
            Some(ei.to_fixed_string(decimals)),
        ]);
    }
    match a.format {
        Format::Table => grid.write_table(out)?,
        Format::Csv => grid.write_csv(out)?,
        Format::Json => {
            let doc = json!({
                "precision": prec.bits(),
                "rows": grid.json_rows(&["k", "s_k", "lower", "upper", "efficiency_index"]),
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )?;
        }
    }
    Ok(0)
}

/// A method named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodSpec {
    pub method: Method,
    name: String,
}

impl MethodSpec {
    pub fn parse(text: &str) -> CliResult<MethodSpec> {
        let t = text.trim();
        let method = match t {
            "newton" => Method::Newton,
            "secant" => Method::Secant { k: 1 },
            _ => match t.strip_prefix("gsec:").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Method::Secant { k },
                _ => {
                    return Err(CliError::Usage(format!(
                        "unknown method {t:?}; expected gsec:K, secant or newton"
                    )))
                }
            },
        };
        Ok(MethodSpec {
            method,
            name: t.to_string(),
        })
    }

    pub fn label(&self) -> String {
        self.name.clone()
    }
}

fn run_method(
    spec: &MethodSpec,
    problem: &ProblemSpec,
    points: &[Real],
    stop: &StopRule,
) -> CliResult<SolveReport> {
    match spec.method {
        Method::Newton => {
            newton_solve(problem, &points[0], stop).map_err(|e| CliError::Breakdown(e.to_string()))
        }
        Method::Secant { k } => {
            let take = points.len().min(k + 1);
            if take < 2 {
                return Err(CliError::Usage(format!(
                    "{} needs at least two --x0 values",
                    spec.label()
                )));
            }
            let config = SolverConfig::new(k, points[..take].to_vec())?.with_stop(stop.clone());
            Ok(solve(problem, &config))
        }
    }
}

pub fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> CliResult<i32> {
    let prec = precision(a.precision)?;
    let specs = a
        .methods
        .iter()
        .map(|m| MethodSpec::parse(m))
        .collect::<CliResult<Vec<_>>>()?;
    let t = target(
        &a.function,
        a.derivative.as_deref(),
        a.alpha.as_deref(),
        prec,
    )?;
    let points = starting_points(a.x0.as_deref(), t.entry, prec)?;
    if specs.iter().any(|s| s.method == Method::Newton) && t.problem.fprime.is_none() {
        return Err(CliError::Breakdown(format!(
            "newton needs a derivative; pass --derivative for {:?}",
            a.function
        )));
    }
    let stop = StopRule {
        max_iterations: a.max_iter,
        ..StopRule::default()
    };
    // independent solves; joined in method order
    let reports: Vec<CliResult<SolveReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|spec| {
                let (problem, points, stop) = (&t.problem, &points, &stop);
                scope.spawn(move || run_method(spec, problem, points, stop))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread"))
            .collect()
    });
    let reports = reports.into_iter().collect::<CliResult<Vec<_>>>()?;

    let runs: Vec<(&SolveReport, usize)> = reports
        .iter()
        .map(|r| (r, r.method.evaluations_per_iteration() as usize))
        .collect();
    let known = t.problem.known_root.is_some();
    let mut headers = vec!["q".to_string(), "cost".to_string()];
    for s in &specs {
        headers.push(format!("{}:n", s.label()));
        headers.push(format!(
            "{}:{}",
            s.label(),
            if known { "epsilon" } else { "x" }
        ));
    }
    let mut grid = Grid::new(headers.clone());
    for row in equal_cost_table(&runs) {
        let mut cells = vec![Some(row.q.to_string()), Some(row.cost.to_string())];
        for rec in &row.entries {
            cells.push(Some(rec.n.to_string()));
            cells.push(Some(match &rec.error {
                Some(e) => fmt_eps(&e.abs()),
                None => rec.x.to_sci_string(a.digits),
            }));
        }
        grid.push(cells);
    }
    match a.format {
        Format::Table => {
            grid.write_table(out)?;
            writeln!(out)?;
            for (s, r) in specs.iter().zip(&reports) {
                writeln!(
                    out,
                    "{}: {} after {} iterates, {} evaluations",
                    s.label(),
                    r.termination,
                    r.records.len(),
                    r.evaluations
                )?;
            }
        }
        Format::Csv => grid.write_csv(out)?,
        Format::Json => {
            let keys: Vec<&str> = headers.iter().map(String::as_str).collect();
            let doc = json!({
                "config": {
                    "function": a.function,
                    "methods": specs.iter().map(MethodSpec::label).collect::<Vec<_>>(),
                    "precision": prec.bits(),
                },
                "rows": grid.json_rows(&keys),
                "terminations": specs.iter().zip(&reports).map(|(s, r)| json!({
                    "method": s.label(),
                    "termination": termination_name(r.termination),
                    "evaluations": r.evaluations,
                })).collect::<Vec<Value>>(),
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )?;
        }
    }
    Ok(0)
}

pub fn cmd_corpus(a: &FormatArgs, out: &mut dyn Write) -> CliResult<i32> {
    let mut grid = Grid::new(["name", "expression", "k", "x0", "description"]);
    for e in builtin_corpus() {
        grid.push(vec![
            Some(format!("@{}", e.name)),
            Some(e.expression.to_string()),
            Some(e.suggested_k.to_string()),
            Some(e.suggested_initial_points.join(",")),
            Some(e.description.to_string()),
        ]);
    }
    match a.format {
        Format::Table => grid.write_table(out)?,
        Format::Csv => grid.write_csv(out)?,
        Format::Json => {
            let rows = grid.json_rows(&["name", "expression", "k", "x0", "description"]);
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("serializable")
            )?;
        }
    }
    Ok(0)
}
