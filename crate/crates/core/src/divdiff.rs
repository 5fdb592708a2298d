//! Divided differences and the Newton-form interpolant.
//!
//! Nodes are kept newest-first: `nodes[0]` is the latest iterate. Only the
//! bottom diagonal of the divided-difference table is stored,
//! `diagonal[i] = f[x_n, x_{n-1}, ..., x_{n-i}]`, which is all the
//! generalized secant step needs. Appending a node updates that diagonal
//! with one division per order.

use crate::error::{Error, Result};
use crate::realnum::Real;

const GUARD_BITS: u64 = 64;

fn check_distinct<'a>(xs: impl Iterator<Item = &'a Real> + Clone) -> Result<()> {
    for (i, a) in xs.clone().enumerate() {
        if xs.clone().skip(i + 1).any(|b| a == b) {
            return Err(Error::DuplicateNode(a.to_string()));
        }
    }
    Ok(())
}

/// Highest-order divided difference `f[x_0, ..., x_m]` over all points,
/// at the precision of the first node, by the standard recursion
/// `f[x_i..x_m] = (f[x_i..x_{m-1}] - f[x_{i+1}..x_m]) / (x_i - x_m)`.
pub fn divided_difference(points: &[(Real, Real)]) -> Result<Real> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_distinct(points.iter().map(|(x, _)| x))?;
    let n = points.len();
    let prec = points[0].0.precision();
    // Cancellation in the recursion depends on node order; guard bits keep
    // the rounded result independent of it.
    let wide = prec.widen(GUARD_BITS + 8 * n as u64);
    let xs: Vec<Real> = points.iter().map(|(x, _)| x.with_precision(wide)).collect();
    let mut column: Vec<Real> = points
        .iter()
        .map(|(_, fx)| fx.with_precision(wide))
        .collect();
    for order in 1..n {
        for i in 0..n - order {
            let num = column[i].sub(&column[i + 1])?;
            let den = xs[i].sub(&xs[i + order])?;
            column[i] = num.div(&den)?;
        }
    }
    Ok(column.swap_remove(0).with_precision(prec))
}

/// Working memory of the generalized secant method.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState {
    nodes: Vec<Real>,
    diagonal: Vec<Real>,
}

impl DiagonalState {
    pub fn single(x: Real, fx: Real) -> DiagonalState {
        DiagonalState {
            nodes: vec![x],
            diagonal: vec![fx],
        }
    }

    /// Builds the diagonal over `points`, given newest-first.
    pub fn init(points: &[(Real, Real)]) -> Result<DiagonalState> {
        let (oldest, rest) = points.split_last().ok_or(Error::EmptyInput)?;
        check_distinct(points.iter().map(|(x, _)| x))?;
        let mut state = DiagonalState::single(oldest.0.clone(), oldest.1.clone());
        for (x, fx) in rest.iter().rev() {
            state = state.extend(x.clone(), fx.clone())?;
        }
        Ok(state)
    }

    /// Nodes, newest first.
    pub fn nodes(&self) -> &[Real] {
        &self.nodes
    }

    /// `[f_n, f[x_{n-1},x_n], ..., f[x_{n-k},...,x_n]]`.
    pub fn diagonal(&self) -> &[Real] {
        &self.diagonal
    }

    /// Degree of the interpolant, one less than the node count.
    pub fn order(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn newest(&self) -> &Real {
        &self.nodes[0]
    }

    pub fn newest_value(&self) -> &Real {
        &self.diagonal[0]
    }

    pub fn contains(&self, x: &Real) -> bool {
        self.nodes.iter().any(|n| n == x)
    }

    /// Slides the window: `x_new` becomes the newest node and the oldest
    /// node is dropped, so the order stays the same.
    pub fn push_node(&self, x_new: Real, f_new: Real) -> Result<DiagonalState> {
        self.advance(x_new, f_new, self.nodes.len())
    }

    /// Adds `x_new` without dropping anything, raising the order by one.
    pub fn extend(&self, x_new: Real, f_new: Real) -> Result<DiagonalState> {
        self.advance(x_new, f_new, self.nodes.len() + 1)
    }

    fn advance(&self, x_new: Real, f_new: Real, len: usize) -> Result<DiagonalState> {
        if self.contains(&x_new) {
            return Err(Error::DuplicateNode(x_new.to_string()));
        }
        let mut diagonal = Vec::with_capacity(len);
        diagonal.push(f_new);
        for i in 1..len {
            // f[x_{n+1-i}..x_{n+1}] from f[x_{n+1-i}..x_n] and f[x_{n+2-i}..x_{n+1}]
            let num = self.diagonal[i - 1].sub(&diagonal[i - 1])?;
            let den = self.nodes[i - 1].sub(&x_new)?;
            diagonal.push(num.div(&den)?);
        }
        let mut nodes = Vec::with_capacity(len);
        nodes.push(x_new);
        nodes.extend(self.nodes.iter().take(len - 1).cloned());
        Ok(DiagonalState { nodes, diagonal })
    }

    /// `p'(x_n)` of the interpolant through the stored nodes:
    /// `f[x_n,x_{n-1}] + sum_{i>=2} f[x_n..x_{n-i}] prod_{j=1}^{i-1} (x_n - x_{n-j})`.
    pub fn derivative_at_newest(&self) -> Result<Real> {
        if self.nodes.len() < 2 {
            return Err(Error::OutOfRange(
                "derivative of the interpolant needs at least two nodes".into(),
            ));
        }
        let xn = &self.nodes[0];
        let mut sum = self.diagonal[1].clone();
        let mut product = Real::one(xn.precision());
        for i in 2..self.diagonal.len() {
            product = product.mul(&xn.sub(&self.nodes[i - 1])?)?;
            sum = sum.add(&self.diagonal[i].mul(&product)?)?;
        }
        Ok(sum)
    }

    /// Value of the Newton-form interpolant at `x`, nested evaluation.
    pub fn newton_form_eval(&self, x: &Real) -> Result<Real> {
        let k = self.order();
        let mut acc = self.diagonal[k].clone();
        for i in (0..k).rev() {
            acc = acc.mul(&x.sub(&self.nodes[i])?)?.add(&self.diagonal[i])?;
        }
        Ok(acc)
    }
}
