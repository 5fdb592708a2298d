//! Iteration drivers: the generalized secant method of order `k` (with the
//! classical secant method as `k = 1`) and a reference Newton-Raphson.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::divdiff::DiagonalState;
use crate::error::{Error, Result};
use crate::realnum::{Precision, Real, RealError};

/// A real function evaluated at the precision of its argument.
pub type RealFn = Arc<dyn Fn(&Real) -> Result<Real, RealError> + Send + Sync>;

/// The equation `f(x) = 0` plus whatever is known about it.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub f: RealFn,
    pub fprime: Option<RealFn>,
    /// `order -> f^(order)(alpha)`.
    pub higher_derivatives_at_root: BTreeMap<u32, Real>,
    pub known_root: Option<Real>,
}

impl ProblemSpec {
    pub fn new(name: impl Into<String>, f: RealFn) -> ProblemSpec {
        ProblemSpec {
            name: name.into(),
            f,
            fprime: None,
            higher_derivatives_at_root: BTreeMap::new(),
            known_root: None,
        }
    }

    pub fn with_derivative(mut self, fprime: RealFn) -> ProblemSpec {
        self.fprime = Some(fprime);
        self
    }

    pub fn with_known_root(mut self, alpha: Real) -> ProblemSpec {
        self.known_root = Some(alpha);
        self
    }

    pub fn with_derivatives_at_root(mut self, d: BTreeMap<u32, Real>) -> ProblemSpec {
        self.higher_derivatives_at_root = d;
        self
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("fprime", &self.fprime.is_some())
            .field(
                "higher_derivatives_at_root",
                &self.higher_derivatives_at_root,
            )
            .field("known_root", &self.known_root)
            .finish()
    }
}

/// Stopping criteria. `None` tolerances take precision-dependent defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct StopRule {
    /// Stop once `|f(x_n)| <= tol_residual`. Default 0.
    pub tol_residual: Option<Real>,
    /// Stop once `|x_{n+1} - x_n| <= tol_step * (1 + |x_n|)`.
    /// Default `2^-(bits - 10)`.
    pub tol_step: Option<Real>,
    /// Iterates produced beyond the initial points.
    pub max_iterations: usize,
    /// Steps with `|dx| > cap * (1 + |x_n|)` abort the run. `None` disables.
    pub step_cap: Option<u64>,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            tol_residual: None,
            tol_step: None,
            max_iterations: 100,
            step_cap: Some(10_000_000_000),
        }
    }
}

struct Tolerances {
    residual: Real,
    step: Real,
    cap: Option<Real>,
}

impl StopRule {
    fn resolve(&self, prec: Precision) -> Result<Tolerances> {
        let residual = match &self.tol_residual {
            Some(t) => t.abs().with_precision(prec),
            None => Real::zero(prec),
        };
        let step = match &self.tol_step {
            Some(t) => t.abs().with_precision(prec),
            None => Real::one(prec).mul_pow2(10 - i64::from(prec.bits()))?,
        };
        let cap = self.step_cap.map(|c| Real::from_u64(c, prec));
        Ok(Tolerances {
            residual,
            step,
            cap,
        })
    }
}

/// Order `k` and starting points for a generalized secant run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    k: usize,
    initial_points: Vec<Real>,
    precision: Precision,
    pub stop: StopRule,
}

impl SolverConfig {
    /// `initial_points` are chronological (`x_0` first). Between 2 and
    /// `k + 1` distinct points are required; with fewer than `k + 1` the
    /// order grows by one per step until the window is full.
    pub fn new(k: usize, initial_points: Vec<Real>) -> Result<SolverConfig> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        let first = initial_points
            .first()
            .ok_or_else(|| Error::InvalidConfig("no initial points".into()))?;
        let precision = first.precision();
        let config = SolverConfig {
            k,
            initial_points,
            precision,
            stop: StopRule::default(),
        };
        config.with_precision(precision)
    }

    /// Rounds the starting points to `prec` and revalidates.
    pub fn with_precision(mut self, prec: Precision) -> Result<SolverConfig> {
        self.precision = prec;
        self.initial_points = self
            .initial_points
            .iter()
            .map(|x| x.with_precision(prec))
            .collect();
        let m = self.initial_points.len();
        if m < 2 || m > self.k + 1 {
            return Err(Error::InvalidConfig(format!(
                "k = {} needs between 2 and {} initial points, got {m}",
                self.k,
                self.k + 1
            )));
        }
        for (i, a) in self.initial_points.iter().enumerate() {
            if self.initial_points[i + 1..].contains(a) {
                return Err(Error::InvalidConfig(format!("initial point {a} repeated")));
            }
        }
        Ok(self)
    }

    pub fn with_stop(mut self, stop: StopRule) -> SolverConfig {
        self.stop = stop;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn initial_points(&self) -> &[Real] {
        &self.initial_points
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    pub x: Real,
    pub f: Real,
    /// Derivative estimate whose step produced this iterate; absent for
    /// starting points.
    pub deriv_estimate: Option<Real>,
    /// `x_n - alpha` when the root is known.
    pub error: Option<Real>,
    /// Interpolation order used for the step (0 for starting points).
    pub k_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    ResidualZero,
    MaxIterations,
    DerivativeBreakdown,
    DuplicateNode,
    NaNEncountered,
}

impl Termination {
    pub fn is_success(self) -> bool {
        matches!(self, Termination::Converged | Termination::ResidualZero)
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Termination::Converged => "converged",
            Termination::ResidualZero => "residual zero",
            Termination::MaxIterations => "maximum iterations",
            Termination::DerivativeBreakdown => "derivative breakdown",
            Termination::DuplicateNode => "duplicate node",
            Termination::NaNEncountered => "function evaluation failed",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Secant { k: usize },
    Newton,
}

impl Method {
    /// Function evaluations per iteration: one for the secant family,
    /// two (`f` and `f'`) for Newton.
    pub fn evaluations_per_iteration(self) -> u32 {
        match self {
            Method::Secant { .. } => 1,
            Method::Newton => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub records: Vec<IterationRecord>,
    pub termination: Termination,
    pub final_x: Real,
    /// Calls to `f` (and `f'` for Newton).
    pub evaluations: usize,
    pub note: Option<String>,
}

impl SolveReport {
    pub fn errors(&self) -> Option<Vec<Real>> {
        self.records.iter().map(|r| r.error.clone()).collect()
    }
}

/// One step `x_{n+1} = x_n - f(x_n) / p'(x_n)` from the stored window.
pub fn generalized_secant_step(state: &DiagonalState, f_newest: &Real) -> Result<Real> {
    let d = state.derivative_at_newest()?;
    if d.is_zero() {
        return Err(Error::DerivativeBreakdown);
    }
    Ok(state.newest().sub(&f_newest.div(&d)?)?)
}

struct Run<'a> {
    problem: &'a ProblemSpec,
    prec: Precision,
    tol: Tolerances,
    records: Vec<IterationRecord>,
    evaluations: usize,
}

enum Eval {
    Value(Real),
    Failed(String),
}

impl<'a> Run<'a> {
    fn new(problem: &'a ProblemSpec, prec: Precision, stop: &StopRule) -> Result<Run<'a>> {
        Ok(Run {
            problem,
            prec,
            tol: stop.resolve(prec)?,
            records: Vec::new(),
            evaluations: 0,
        })
    }

    fn call(&mut self, g: &RealFn, x: &Real) -> Eval {
        self.evaluations += 1;
        match g(x) {
            Ok(v) => Eval::Value(v.with_precision(self.prec)),
            Err(e) => Eval::Failed(format!("evaluation at {x} failed: {e}")),
        }
    }

    fn record(&mut self, x: Real, f: Real, deriv: Option<Real>, k_used: usize) -> Result<()> {
        let error = match &self.problem.known_root {
            Some(alpha) => Some(x.sub(&alpha.with_precision(self.prec))?),
            None => None,
        };
        self.records.push(IterationRecord {
            n: self.records.len(),
            x,
            f,
            deriv_estimate: deriv,
            error,
            k_used,
        });
        Ok(())
    }

    /// Residual test on the newest record.
    fn residual_stop(&self) -> Option<Termination> {
        let f = &self.records.last()?.f;
        if f.is_zero() {
            Some(Termination::ResidualZero)
        } else if f.abs() <= self.tol.residual {
            Some(Termination::Converged)
        } else {
            None
        }
    }

    fn step_small(&self, step: &Real, xn: &Real) -> Result<bool> {
        let scale = xn.abs().add_i64(1)?;
        Ok(step.abs() <= self.tol.step.mul(&scale)?)
    }

    fn step_runaway(&self, step: &Real, xn: &Real) -> Result<bool> {
        match &self.tol.cap {
            Some(cap) => Ok(step.abs() > cap.mul(&xn.abs().add_i64(1)?)?),
            None => Ok(false),
        }
    }

    fn finish(self, method: Method, termination: Termination, note: Option<String>) -> SolveReport {
        let final_x = self
            .records
            .last()
            .map(|r| r.x.clone())
            .unwrap_or_else(|| Real::zero(self.prec));
        SolveReport {
            method,
            records: self.records,
            termination,
            final_x,
            evaluations: self.evaluations,
            note,
        }
    }
}

/// Runs the generalized secant method. Failures end up in the report's
/// termination code rather than as errors.
pub fn solve(problem: &ProblemSpec, config: &SolverConfig) -> SolveReport {
    let method = Method::Secant { k: config.k };
    let prec = config.precision;
    let mut run = match Run::new(problem, prec, &config.stop) {
        Ok(run) => run,
        Err(e) => return empty_report(method, prec, e),
    };
    match secant_loop(&mut run, config) {
        Ok((t, note)) => run.finish(method, t, note),
        Err(e) => {
            let t = termination_for(&e);
            run.finish(method, t, Some(e.to_string()))
        }
    }
}

fn empty_report(method: Method, prec: Precision, e: Error) -> SolveReport {
    SolveReport {
        method,
        records: Vec::new(),
        termination: termination_for(&e),
        final_x: Real::zero(prec),
        evaluations: 0,
        note: Some(e.to_string()),
    }
}

fn termination_for(e: &Error) -> Termination {
    match e {
        Error::DerivativeBreakdown => Termination::DerivativeBreakdown,
        Error::DuplicateNode(_) => Termination::DuplicateNode,
        Error::Real(RealError::DivisionByZero) => Termination::DerivativeBreakdown,
        _ => Termination::NaNEncountered,
    }
}

type Outcome = (Termination, Option<String>);

fn secant_loop(run: &mut Run<'_>, config: &SolverConfig) -> Result<Outcome> {
    let f = run.problem.f.clone();
    let mut pairs = Vec::with_capacity(config.initial_points.len());
    for x in &config.initial_points {
        let fx = match run.call(&f, x) {
            Eval::Value(v) => v,
            Eval::Failed(msg) => return Ok((Termination::NaNEncountered, Some(msg))),
        };
        run.record(x.clone(), fx.clone(), None, 0)?;
        if let Some(t) = run.residual_stop() {
            return Ok((t, None));
        }
        pairs.push((x.clone(), fx));
    }
    pairs.reverse();
    let mut state = DiagonalState::init(&pairs)?;

    for _ in 0..config.stop.max_iterations {
        let deriv = state.derivative_at_newest()?;
        if deriv.is_zero() {
            return Ok((Termination::DerivativeBreakdown, None));
        }
        let xn = state.newest().clone();
        let step = state.newest_value().div(&deriv)?;
        let x_new = xn.sub(&step)?;
        if run.step_runaway(&step, &xn)? {
            return Ok((
                Termination::MaxIterations,
                Some(format!(
                    "diverged: step {} exceeds the cap",
                    step.to_sci_string(6)
                )),
            ));
        }
        if state.contains(&x_new) {
            if x_new == xn || run.step_small(&step, &xn)? {
                return Ok((Termination::Converged, None));
            }
            return Ok((
                Termination::DuplicateNode,
                Some(format!("iterate {x_new} repeats a node")),
            ));
        }
        let f_new = match run.call(&f, &x_new) {
            Eval::Value(v) => v,
            Eval::Failed(msg) => return Ok((Termination::NaNEncountered, Some(msg))),
        };
        run.record(x_new.clone(), f_new.clone(), Some(deriv), state.order())?;
        if let Some(t) = run.residual_stop() {
            return Ok((t, None));
        }
        if run.step_small(&step, &xn)? {
            return Ok((Termination::Converged, None));
        }
        state = if state.order() < config.k {
            state.extend(x_new, f_new)?
        } else {
            state.push_node(x_new, f_new)?
        };
    }
    Ok((Termination::MaxIterations, None))
}

/// Newton-Raphson from `x0` at the precision of `x0`.
pub fn newton_solve(problem: &ProblemSpec, x0: &Real, stop: &StopRule) -> Result<SolveReport> {
    let fprime = problem
        .fprime
        .clone()
        .ok_or_else(|| Error::MissingDerivative(problem.name.clone()))?;
    let prec = x0.precision();
    let mut run = Run::new(problem, prec, stop)?;
    let outcome = newton_loop(&mut run, &fprime, x0, stop.max_iterations);
    Ok(match outcome {
        Ok((t, note)) => run.finish(Method::Newton, t, note),
        Err(e) => {
            let t = termination_for(&e);
            run.finish(Method::Newton, t, Some(e.to_string()))
        }
    })
}

fn newton_loop(run: &mut Run<'_>, fprime: &RealFn, x0: &Real, max: usize) -> Result<Outcome> {
    let f = run.problem.f.clone();
    let mut x = x0.clone();
    let mut fx = match run.call(&f, &x) {
        Eval::Value(v) => v,
        Eval::Failed(msg) => return Ok((Termination::NaNEncountered, Some(msg))),
    };
    run.record(x.clone(), fx.clone(), None, 0)?;
    if let Some(t) = run.residual_stop() {
        return Ok((t, None));
    }
    for _ in 0..max {
        let d = match run.call(fprime, &x) {
            Eval::Value(v) => v,
            Eval::Failed(msg) => return Ok((Termination::NaNEncountered, Some(msg))),
        };
        if d.is_zero() {
            return Ok((Termination::DerivativeBreakdown, None));
        }
        let step = fx.div(&d)?;
        if run.step_runaway(&step, &x)? {
            return Ok((
                Termination::MaxIterations,
                Some(format!(
                    "diverged: step {} exceeds the cap",
                    step.to_sci_string(6)
                )),
            ));
        }
        let x_new = x.sub(&step)?;
        if x_new == x {
            return Ok((Termination::Converged, None));
        }
        fx = match run.call(&f, &x_new) {
            Eval::Value(v) => v,
            Eval::Failed(msg) => return Ok((Termination::NaNEncountered, Some(msg))),
        };
        run.record(x_new.clone(), fx.clone(), Some(d), 1)?;
        if let Some(t) = run.residual_stop() {
            return Ok((t, None));
        }
        let small = run.step_small(&step, &x)?;
        x = x_new;
        if small {
            return Ok((Termination::Converged, None));
        }
    }
    Ok((Termination::MaxIterations, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::{lookup, Expression};
    use proptest::prelude::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn expr_fn(text: &str) -> RealFn {
        let e = Expression::parse(text).unwrap();
        Arc::new(move |x: &Real| e.eval(x))
    }

    fn real(s: &str, prec: Precision) -> Real {
        Real::parse(s, prec).unwrap()
    }

    fn pts(xs: &[&str], prec: Precision) -> Vec<Real> {
        xs.iter().map(|s| real(s, prec)).collect()
    }

    fn table2_report(prec: Precision) -> SolveReport {
        let e = lookup("paper-x3m8").unwrap();
        let problem = e.to_problem(prec).unwrap();
        let config = SolverConfig::new(2, pts(&["5", "4"], prec)).unwrap();
        solve(&problem, &config)
    }

    #[test]
    fn secant_bootstrap_step() {
        let prec = Precision::QUAD;
        let state = DiagonalState::init(&[
            (real("4", prec), real("56", prec)),
            (real("5", prec), real("117", prec)),
        ])
        .unwrap();
        let x = generalized_secant_step(&state, &real("56", prec)).unwrap();
        let exact = Real::from_ratio(&188.into(), &61.into(), prec).unwrap();
        assert_eq!(x, exact);
        assert!(x.to_sci_string(7).starts_with("3.081967"));
    }

    #[test]
    fn linear_function_one_step() {
        let prec = Precision::DEFAULT;
        let problem = ProblemSpec::new("lin", expr_fn("3*x - 7"));
        let config = SolverConfig::new(1, pts(&["10", "-4"], prec)).unwrap();
        let report = solve(&problem, &config);
        assert!(report.termination.is_success());
        // 7/3 is inexact in binary, so f there is a rounding residual
        let root = Real::from_i64(7, prec).div_i64(3).unwrap();
        assert!(report.records[2].x.within_ulps(&root, 2, &root));
        assert!(report.records[2].f.abs() <= root.ulp().mul_i64(8).unwrap());
    }

    #[test]
    fn zero_derivative_estimate_breaks_down() {
        let prec = Precision::DEFAULT;
        let state = DiagonalState::init(&[
            (real("1", prec), real("2", prec)),
            (real("-1", prec), real("2", prec)),
        ])
        .unwrap();
        assert_eq!(
            generalized_secant_step(&state, &real("2", prec)),
            Err(Error::DerivativeBreakdown)
        );
        let problem = ProblemSpec::new("no-root", expr_fn("x^2 + 1"));
        let config = SolverConfig::new(1, pts(&["-1", "1"], prec)).unwrap();
        let report = solve(&problem, &config);
        assert_eq!(report.termination, Termination::DerivativeBreakdown);
        assert_eq!(report.records.len(), 2);
    }

    #[test]
    fn table2_iterates() {
        // 36-digit values from an independent 113-bit replay of the run.
        let expected = [
            "5",
            "4",
            "3.08196721311475409836065573770491792",
            "2.28621882971781130732266803773062580",
            "2.01034420943787831264152973172014271",
            "1.99979593345266992578358353656798415",
            "2.00000007223139333059960671366229837",
            "2.00000000000001531923884491258853168",
            "2.00000000000000000000000001893448134",
            "2",
        ];
        let prec = Precision::QUAD;
        let report = table2_report(prec);
        assert_eq!(report.termination, Termination::ResidualZero);
        assert_eq!(report.records.len(), expected.len());
        for (r, want) in report.records.iter().zip(expected) {
            let want = real(want, prec);
            assert!(
                r.x.within_ulps(&want, 1, &want),
                "n = {}: {} vs {}",
                r.n,
                r.x,
                want
            );
        }
        let k_used: Vec<usize> = report.records.iter().map(|r| r.k_used).collect();
        assert_eq!(k_used, [0, 0, 1, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(report.evaluations, report.records.len());
        let e8 = report.records[8].error.as_ref().unwrap();
        assert_eq!(e8.to_sci_string(7), "1.893448E-26");
    }

    #[test]
    fn full_window_skips_bootstrap() {
        let prec = Precision::QUAD;
        let problem = lookup("paper-x3m8").unwrap().to_problem(prec).unwrap();
        let start = table2_report(prec).records[..3]
            .iter()
            .map(|r| r.x.clone())
            .collect();
        let report = solve(&problem, &SolverConfig::new(2, start).unwrap());
        let boot = table2_report(prec);
        assert_eq!(report.records[3].x, boot.records[3].x);
        assert_eq!(report.records[3].k_used, 2);
    }

    #[test]
    fn residual_zero_at_start() {
        let prec = Precision::DEFAULT;
        let problem = ProblemSpec::new("cube", expr_fn("x^3 - 8"));
        let config = SolverConfig::new(2, pts(&["2", "3"], prec)).unwrap();
        let report = solve(&problem, &config);
        assert_eq!(report.termination, Termination::ResidualZero);
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.evaluations, 1);
    }

    #[test]
    fn config_validation() {
        let prec = Precision::DEFAULT;
        assert!(SolverConfig::new(0, pts(&["1", "2"], prec)).is_err());
        assert!(SolverConfig::new(2, pts(&["1"], prec)).is_err());
        assert!(SolverConfig::new(1, pts(&["1", "2", "3"], prec)).is_err());
        assert!(SolverConfig::new(3, pts(&["1", "2", "1"], prec)).is_err());
        // distinct at 256 bits, equal once rounded to 16
        let close = pts(&["1", "1.0000001"], prec);
        let c = SolverConfig::new(2, close).unwrap();
        assert!(c.with_precision(Precision::new(16).unwrap()).is_err());
    }

    #[test]
    fn max_iterations_respected() {
        let prec = Precision::QUAD;
        let problem = lookup("paper-x3m8").unwrap().to_problem(prec).unwrap();
        let stop = StopRule {
            max_iterations: 3,
            ..StopRule::default()
        };
        let config = SolverConfig::new(2, pts(&["5", "4"], prec))
            .unwrap()
            .with_stop(stop);
        let report = solve(&problem, &config);
        assert_eq!(report.termination, Termination::MaxIterations);
        assert_eq!(report.records.len(), 5);
    }

    #[test]
    fn runaway_step_is_capped() {
        let prec = Precision::DEFAULT;
        let problem = ProblemSpec::new("flat", expr_fn("x^2"));
        let near = Real::one(prec)
            .add(&Real::one(prec).mul_pow2(-60).unwrap())
            .unwrap();
        let config = SolverConfig::new(1, vec![real("-1", prec), near]).unwrap();
        let report = solve(&problem, &config);
        assert_eq!(report.termination, Termination::MaxIterations);
        assert!(report.note.unwrap().contains("cap"));
        assert_eq!(report.records.len(), 2);
    }

    #[test]
    fn evaluation_failure() {
        let prec = Precision::DEFAULT;
        let problem = ProblemSpec::new("log", expr_fn("ln(x)"));
        let config = SolverConfig::new(1, pts(&["2", "-1"], prec)).unwrap();
        let report = solve(&problem, &config);
        assert_eq!(report.termination, Termination::NaNEncountered);
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.evaluations, 2);
    }

    #[test]
    fn residual_tolerance() {
        let prec = Precision::DEFAULT;
        let problem = lookup("x-cos").unwrap().to_problem(prec).unwrap();
        let stop = StopRule {
            tol_residual: Some(real("1e-10", prec)),
            ..StopRule::default()
        };
        let config = SolverConfig::new(3, pts(&["0", "1"], prec))
            .unwrap()
            .with_stop(stop);
        let report = solve(&problem, &config);
        assert_eq!(report.termination, Termination::Converged);
        let last = report.records.last().unwrap();
        assert!(last.f.abs() <= real("1e-10", prec));
        let prev = &report.records[report.records.len() - 2];
        assert!(prev.f.abs() > real("1e-10", prec));
    }

    #[test]
    fn k1_is_textbook_secant() {
        let prec = Precision::DEFAULT;
        let problem = lookup("x-cos").unwrap().to_problem(prec).unwrap();
        let config = SolverConfig::new(1, pts(&["0", "1"], prec)).unwrap();
        let report = solve(&problem, &config);
        assert!(report.termination.is_success());
        let r = &report.records;
        for n in 1..r.len() - 1 {
            // x_{n+1} = x_n - f_n (x_n - x_{n-1}) / (f_n - f_{n-1})
            let num = r[n].f.mul(&r[n].x.sub(&r[n - 1].x).unwrap()).unwrap();
            let den = r[n].f.sub(&r[n - 1].f).unwrap();
            let want = r[n].x.sub(&num.div(&den).unwrap()).unwrap();
            let scale = r[n].x.abs();
            assert!(r[n + 1].x.within_ulps(&want, 4, &scale), "n = {n}");
        }
    }

    #[test]
    fn errors_contract_near_root() {
        let prec = Precision::DEFAULT;
        for name in ["x-cos", "wallis-cubic", "exp-2", "sqrt2"] {
            let e = lookup(name).unwrap();
            let problem = e.to_problem(prec).unwrap();
            let config = SolverConfig::new(e.suggested_k, e.initial_points(prec).unwrap()).unwrap();
            let report = solve(&problem, &config);
            assert!(report.termination.is_success(), "{name}");
            let errs = report.errors().unwrap();
            let tiny = real("1e-3", prec);
            let floor = real("1e-70", prec);
            for w in errs.windows(2) {
                if w[0].abs() < tiny && w[1].abs() > floor {
                    assert!(w[1].abs() < w[0].abs(), "{name}");
                }
            }
        }
    }

    #[test]
    fn newton_examples() {
        let prec = Precision::DEFAULT;
        let problem = lookup("sqrt2").unwrap().to_problem(prec).unwrap();
        let report = newton_solve(&problem, &real("1.5", prec), &StopRule::default()).unwrap();
        let x1 = &report.records[1].x;
        assert_eq!(*x1, Real::from_i64(17, prec).div_i64(12).unwrap());
        assert!(report.termination.is_success());
        assert!(report.evaluations <= 2 * report.records.len());
        assert!(report.evaluations >= 2 * report.records.len() - 1);

        let lin = ProblemSpec::new("lin", expr_fn("2*x + 1")).with_derivative(expr_fn("2"));
        let report = newton_solve(&lin, &real("8", prec), &StopRule::default()).unwrap();
        assert_eq!(report.termination, Termination::ResidualZero);
        assert_eq!(report.records.len(), 2);

        let bare = ProblemSpec::new("bare", expr_fn("x"));
        assert_eq!(
            newton_solve(&bare, &real("1", prec), &StopRule::default()).unwrap_err(),
            Error::MissingDerivative("bare".into())
        );
    }

    #[test]
    fn newton_quadratic_ratio() {
        let prec = Precision::DEFAULT;
        let problem = lookup("paper-x3m8").unwrap().to_problem(prec).unwrap();
        let report = newton_solve(&problem, &real("5", prec), &StopRule::default()).unwrap();
        let errs = report.errors().unwrap();
        // last ratio e_{n+1}/e_n^2 before the arithmetic floor
        let floor = real("1e-60", prec);
        let ratio = errs
            .windows(2)
            .filter(|w| w[1].abs() > floor)
            .map(|w| w[1].div(&w[0].mul(&w[0]).unwrap()).unwrap())
            .next_back()
            .unwrap();
        // f''(2) / (2 f'(2)) = 12 / 24
        assert!((ratio.to_f64() - 0.5).abs() < 0.5 * 0.01, "{ratio}");
    }

    #[test]
    fn newton_zero_derivative() {
        let prec = Precision::DEFAULT;
        let problem = ProblemSpec::new("p", expr_fn("x^2 + 1")).with_derivative(expr_fn("2*x"));
        let report = newton_solve(&problem, &real("0", prec), &StopRule::default()).unwrap();
        assert_eq!(report.termination, Termination::DerivativeBreakdown);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn one_evaluation_per_iterate(k in 1usize..5, a in -3i64..=3, spread in 1i64..6) {
            let prec = Precision::new(160).unwrap();
            let counter = Arc::new(AtomicUsize::new(0));
            let f = expr_fn("x^3 - 2*x - 5");
            let c = counter.clone();
            let counted: RealFn = Arc::new(move |x: &Real| {
                c.fetch_add(1, Ordering::SeqCst);
                f(x)
            });
            let problem = ProblemSpec::new("counted", counted);
            let x0 = Real::from_i64(a, prec);
            let x1 = Real::from_i64(a + spread, prec);
            let config = SolverConfig::new(k, vec![x0, x1]).unwrap();
            let report = solve(&problem, &config);
            prop_assert_eq!(report.evaluations, counter.load(Ordering::SeqCst));
            if report.termination != Termination::NaNEncountered {
                prop_assert_eq!(report.evaluations, report.records.len());
            }
        }
    }
}
