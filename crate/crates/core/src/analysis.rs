//! Convergence analytics: the order `s_k` and its bounds, the asymptotic
//! constant, empirical order estimates, efficiency indices and equal-cost
//! comparison of iteration histories.
//!
//! Sequences derived from an error list are aligned with it: entry `n`
//! belongs to iterate `n`, and `None` marks an index where the quantity is
//! undefined (too early, or a zero error in its window).

use crate::error::{Error, Result};
use crate::iterate::{IterationRecord, ProblemSpec, SolveReport};
use crate::realnum::{Precision, Real};

fn g(s: &Real, k: usize) -> Result<Real> {
    // s^{k+1} - (1 + s + ... + s^k)
    let one = Real::one(s.precision());
    let mut power = one.clone();
    let mut sum = Real::zero(s.precision());
    for _ in 0..=k {
        sum = sum.add(&power)?;
        power = power.mul(s)?;
    }
    Ok(power.sub(&sum)?)
}

/// The root in `(1, 2)` of `s^{k+1} = sum_{i=0}^{k} s^i`, bisected until
/// the bracket is narrower than `tol` and the residual at its midpoint is
/// at most `tol`. Works at the precision of `tol`.
pub fn order_of_convergence(k: usize, tol: &Real) -> Real {
    let prec = tol.precision();
    let mut lo = Real::one(prec);
    let mut hi = Real::from_i64(2, prec);
    if k == 0 {
        return lo;
    }
    let tol = tol.abs();
    let floor = hi.ulp().mul_i64(2).expect("in range");
    loop {
        let width = hi.sub(&lo).expect("in range");
        let mid = lo.add(&hi).and_then(|s| s.mul_pow2(-1)).expect("in range");
        let gm = g(&mid, k).expect("in range");
        if width <= floor || (width <= tol && gm.abs() <= tol) {
            return mid;
        }
        if gm.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Bisection tolerance used when no other is given: `2^-(bits - 8)`.
pub fn default_order_tolerance(prec: Precision) -> Real {
    Real::one(prec)
        .mul_pow2(8 - i64::from(prec.bits()))
        .expect("in range")
}

/// `(2 - 2^{-k-1} e, 2 - 2^{-k-1})`, valid for `k >= 2`.
pub fn order_bounds(k: usize, prec: Precision) -> Result<(Real, Real)> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "order bounds hold for k >= 2, got k = {k}"
        )));
    }
    let shift = -(k as i64) - 1;
    let two = Real::from_i64(2, prec);
    let lower = two.sub(&Real::e(prec).mul_pow2(shift)?)?;
    let upper = two.sub(&Real::one(prec).mul_pow2(shift)?)?;
    Ok((lower, upper))
}

fn factorial(n: usize, prec: Precision) -> Result<Real> {
    let mut acc = Real::one(prec);
    for i in 2..=n {
        acc = acc.mul_i64(i as i64)?;
    }
    Ok(acc)
}

/// `L = (-1)^{k+1} / (k+1)! * f^{(k+1)}(alpha) / f'(alpha)`.
pub fn asymptotic_constant(fprime_at_root: &Real, f_k1_at_root: &Real, k: usize) -> Result<Real> {
    if fprime_at_root.is_zero() {
        return Err(Error::DomainError("f'(alpha) is zero".into()));
    }
    let prec = fprime_at_root.precision();
    let l = f_k1_at_root
        .with_precision(prec)
        .div(fprime_at_root)?
        .div(&factorial(k + 1, prec)?)?;
    Ok(if (k + 1) % 2 == 1 { l.neg() } else { l })
}

/// `|L|^{(s_k - 1)/k}`, taken as 0 when `L = 0`.
pub fn error_ratio_limit(l: &Real, k: usize, s_k: &Real) -> Result<Real> {
    if l.is_zero() {
        return Ok(Real::zero(l.precision()));
    }
    let exponent = s_k
        .with_precision(l.precision())
        .add_i64(-1)?
        .div_i64(k as i64)?;
    Ok(l.abs().pow(&exponent)?)
}

/// `sigma_n = e_{n+1} / (e_n e_{n-1} ... e_{n-k})`.
pub fn sigma_sequence(errors: &[Real], k: usize) -> Vec<Option<Real>> {
    (0..errors.len())
        .map(|n| {
            if n < k || n + 1 >= errors.len() {
                return None;
            }
            let window = &errors[n - k..=n + 1];
            if window.iter().any(Real::is_zero) {
                return None;
            }
            let mut den = errors[n].clone();
            for e in &errors[n - k..n] {
                den = den.mul(e).ok()?;
            }
            errors[n + 1].div(&den).ok()
        })
        .collect()
}

/// `log|e_{n+1}/e_n| / log|e_n/e_{n-1}|`.
pub fn empirical_order(errors: &[Real]) -> Vec<Option<Real>> {
    let log_ratio = |a: &Real, b: &Real| -> Option<Real> {
        if a.is_zero() || b.is_zero() {
            return None;
        }
        a.div(b).ok()?.abs().ln().ok()
    };
    (0..errors.len())
        .map(|n| {
            if n == 0 || n + 1 >= errors.len() {
                return None;
            }
            let num = log_ratio(&errors[n + 1], &errors[n])?;
            let den = log_ratio(&errors[n], &errors[n - 1])?;
            if den.is_zero() {
                return None;
            }
            num.div(&den).ok()
        })
        .collect()
}

/// `e_{n+1} / e_n^2`, the quantity that settles for quadratic convergence.
pub fn quadratic_ratio_sequence(errors: &[Real]) -> Vec<Option<Real>> {
    (0..errors.len())
        .map(|n| {
            let next = errors.get(n + 1)?;
            let e = &errors[n];
            if e.is_zero() || next.is_zero() {
                return None;
            }
            next.div(&e.mul(e).ok()?).ok()
        })
        .collect()
}

/// Replaces errors below `floor` in magnitude by zero, so that derived
/// ratios read them as absent rather than as rounding noise.
pub fn mask_below(errors: &[Real], floor: &Real) -> Vec<Real> {
    errors
        .iter()
        .map(|e| {
            if e.abs() < *floor {
                Real::zero(e.precision())
            } else {
                e.clone()
            }
        })
        .collect()
}

/// `order^{1/p}` for a method costing `p` evaluations per iteration.
pub fn efficiency_index(order: &Real, evals_per_iteration: u32) -> Result<Real> {
    if *order <= Real::one(order.precision()) {
        return Err(Error::DomainError(format!(
            "efficiency index needs order > 1, got {order}"
        )));
    }
    if evals_per_iteration == 0 {
        return Err(Error::DomainError(
            "evaluations per iteration must be positive".into(),
        ));
    }
    if evals_per_iteration == 1 {
        return Ok(order.clone());
    }
    let p = Real::one(order.precision()).div_i64(i64::from(evals_per_iteration))?;
    Ok(order.pow(&p)?)
}

/// Theoretical summary for order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderProfile {
    pub k: usize,
    pub s_k: Real,
    /// Present for `k >= 2`.
    pub bounds: Option<(Real, Real)>,
    pub l: Option<Real>,
    pub error_ratio_limit: Option<Real>,
    pub efficiency_index: Real,
}

impl OrderProfile {
    /// `derivs` holds `(f'(alpha), f^{(k+1)}(alpha))` when known.
    pub fn compute(
        k: usize,
        prec: Precision,
        derivs: Option<(&Real, &Real)>,
    ) -> Result<OrderProfile> {
        let s_k = order_of_convergence(k, &default_order_tolerance(prec));
        let bounds = if k >= 2 {
            Some(order_bounds(k, prec)?)
        } else {
            None
        };
        let (l, limit) = match derivs {
            Some((d1, dk1)) => {
                let l = asymptotic_constant(d1, dk1, k)?;
                let limit = error_ratio_limit(&l, k, &s_k)?;
                (Some(l), Some(limit))
            }
            None => (None, None),
        };
        Ok(OrderProfile {
            k,
            efficiency_index: efficiency_index(&s_k, 1)?,
            s_k,
            bounds,
            l,
            error_ratio_limit: limit,
        })
    }

    /// Profile using the derivatives at the root stored in `problem`.
    pub fn for_problem(k: usize, prec: Precision, problem: &ProblemSpec) -> Result<OrderProfile> {
        let d = &problem.higher_derivatives_at_root;
        let derivs = match (d.get(&1), d.get(&(k as u32 + 1))) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        OrderProfile::compute(k, prec, derivs)
    }
}

/// One row of an equal-cost comparison: iterates of each method after the
/// same number `q * prod(m)` of function evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct CostRow {
    pub q: usize,
    pub cost: usize,
    pub entries: Vec<IterationRecord>,
}

/// Pairs iterate `q * m2` of the first run with iterate `q * m1` of the
/// second, for `q = 1, 2, ...` while both exist.
pub fn equal_cost_compare(
    report1: &SolveReport,
    m1: usize,
    report2: &SolveReport,
    m2: usize,
) -> Vec<(usize, IterationRecord, IterationRecord)> {
    equal_cost_table(&[(report1, m1), (report2, m2)])
        .into_iter()
        .map(|row| {
            let mut it = row.entries.into_iter();
            let a = it.next().expect("two entries");
            let b = it.next().expect("two entries");
            (row.q, a, b)
        })
        .collect()
}

/// General form for any number of methods: method `i` contributes its
/// iterate `q * prod_{j != i} m_j`, so every entry in a row has cost
/// `q * prod_j m_j`.
pub fn equal_cost_table(runs: &[(&SolveReport, usize)]) -> Vec<CostRow> {
    if runs.is_empty() || runs.iter().any(|&(_, m)| m == 0) {
        return Vec::new();
    }
    let total: usize = runs.iter().map(|&(_, m)| m).product();
    let mut rows = Vec::new();
    for q in 1.. {
        let entries: Option<Vec<IterationRecord>> = runs
            .iter()
            .map(|&(r, m)| r.records.get(q * total / m).cloned())
            .collect();
        match entries {
            Some(entries) => rows.push(CostRow {
                q,
                cost: q * total,
                entries,
            }),
            None => break,
        }
    }
    rows
}

/// One step of the identity `e_{n+1} = C_n e_n` with
/// `C_n = (p' - f[x_n, alpha]) / p'`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub n: usize,
    pub c_n: Real,
    pub actual: Real,
    pub predicted: Real,
}

/// Evaluates the error identity for every step of `report` whose
/// derivative estimate is recorded. Requires the root in `problem`.
pub fn error_identity(report: &SolveReport, problem: &ProblemSpec) -> Result<Vec<IdentityCheck>> {
    let alpha = problem
        .known_root
        .as_ref()
        .ok_or_else(|| Error::DomainError("error identity needs the root".into()))?;
    let mut out = Vec::new();
    for pair in report.records.windows(2) {
        let (cur, next) = (&pair[0], &pair[1]);
        let Some(p) = &next.deriv_estimate else {
            continue;
        };
        let prec = cur.x.precision();
        let alpha = alpha.with_precision(prec);
        let eps = cur.x.sub(&alpha)?;
        if eps.is_zero() {
            continue;
        }
        let f_alpha = (problem.f)(&alpha)?.with_precision(prec);
        let slope = cur.f.sub(&f_alpha)?.div(&eps)?;
        let c_n = p.sub(&slope)?.div(p)?;
        out.push(IdentityCheck {
            n: cur.n,
            predicted: c_n.mul(&eps)?,
            actual: next.x.sub(&alpha)?,
            c_n,
        });
    }
    Ok(out)
}
