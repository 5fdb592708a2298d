//! Built-in test functions with analytic metadata.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::Expression;
use crate::error::{Error, Result};
use crate::iterate::ProblemSpec;
use crate::realnum::{Precision, Real};

/// A named test function. Derivatives are analytic expressions in `x`;
/// the root is a long decimal seed polished to the requested precision.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub expression: &'static str,
    pub description: &'static str,
    derivatives: &'static [(u32, &'static str)],
    root_seed: &'static str,
    pub suggested_k: usize,
    pub suggested_initial_points: &'static [&'static str],
}

const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "paper-x3m8",
        expression: "x^3 - 8",
        description: "x^3 - 8 = 0, k = 2, started from 5 and 4",
        derivatives: &[(1, "3*x^2"), (2, "6*x"), (3, "6"), (4, "0")],
        root_seed: "2",
        suggested_k: 2,
        suggested_initial_points: &["5", "4"],
    },
    CorpusEntry {
        name: "sqrt2",
        expression: "x^2 - 2",
        description: "square root of two; degree 2",
        derivatives: &[(1, "2*x"), (2, "2"), (3, "0"), (4, "0")],
        root_seed: "1.414213562373095048801688724209698078569671875376948073176679737990732478462107038850387534327641573",
        suggested_k: 2,
        suggested_initial_points: &["1", "2"],
    },
    CorpusEntry {
        name: "x-cos",
        expression: "x - cos(x)",
        description: "fixed point of cosine",
        derivatives: &[
            (1, "1 + sin(x)"),
            (2, "cos(x)"),
            (3, "-sin(x)"),
            (4, "-cos(x)"),
        ],
        root_seed: "0.7390851332151606416553120876738734040134117589007574649656806357732846548835475945993761069317665318",
        suggested_k: 3,
        suggested_initial_points: &["0", "1"],
    },
    CorpusEntry {
        name: "wallis-cubic",
        expression: "x^3 - 2*x - 5",
        description: "Wallis's cubic; degree 3",
        derivatives: &[(1, "3*x^2 - 2"), (2, "6*x"), (3, "6"), (4, "0")],
        root_seed: "2.094551481542326591482386540579302963857306105628239180304128529045312189983483667146267281777157758",
        suggested_k: 3,
        suggested_initial_points: &["2", "3"],
    },
    CorpusEntry {
        name: "shifted-quadratic",
        expression: "x^2 - 4*x + 3",
        description: "(x - 1)(x - 3) near its smaller root; degree 2",
        derivatives: &[(1, "2*x - 4"), (2, "2"), (3, "0"), (4, "0")],
        root_seed: "1",
        suggested_k: 2,
        suggested_initial_points: &["0", "0.5"],
    },
    CorpusEntry {
        name: "exp-2",
        expression: "exp(x) - 2",
        description: "natural logarithm of two",
        derivatives: &[(1, "exp(x)"), (2, "exp(x)"), (3, "exp(x)"), (4, "exp(x)")],
        root_seed: "0.6931471805599453094172321214581765680755001343602552541206800094933936219696947156058633269964186875",
        suggested_k: 2,
        suggested_initial_points: &["0", "1"],
    },
];

pub fn builtin_corpus() -> &'static [CorpusEntry] {
    CORPUS
}

pub fn lookup(name: &str) -> Result<&'static CorpusEntry> {
    CORPUS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::NotFound(name.to_string()))
}

impl CorpusEntry {
    pub fn parsed(&self) -> Expression {
        Expression::parse(self.expression).expect("corpus expression parses")
    }

    pub fn derivative(&self, order: u32) -> Option<Expression> {
        self.derivatives
            .iter()
            .find(|(o, _)| *o == order)
            .map(|(_, text)| Expression::parse(text).expect("corpus derivative parses"))
    }

    /// Orders for which an analytic derivative is recorded.
    pub fn derivative_orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.derivatives.iter().map(|(o, _)| *o)
    }

    /// The root at `prec`, polished by Newton steps at extra precision.
    pub fn known_root(&self, prec: Precision) -> Result<Real> {
        let wide = prec.widen(64);
        let f = self.parsed();
        let df = self.derivative(1).expect("corpus entries carry f'");
        let mut x = Real::parse(self.root_seed, wide)?;
        let tol = Real::one(wide).mul_pow2(-i64::from(wide.bits()) + 2)?;
        for _ in 0..64 {
            let fx = f.eval(&x)?;
            if fx.is_zero() {
                break;
            }
            let step = fx.div(&df.eval(&x)?)?;
            x = x.sub(&step)?;
            if step.abs() <= tol.mul(&x.abs())? {
                break;
            }
        }
        Ok(x.with_precision(prec))
    }

    pub fn derivatives_at_root(&self, prec: Precision) -> Result<BTreeMap<u32, Real>> {
        let alpha = self.known_root(prec.widen(64))?;
        self.derivatives
            .iter()
            .map(|&(order, text)| {
                let d = Expression::parse(text).expect("corpus derivative parses");
                Ok((order, d.eval(&alpha)?.with_precision(prec)))
            })
            .collect()
    }

    pub fn initial_points(&self, prec: Precision) -> Result<Vec<Real>> {
        self.suggested_initial_points
            .iter()
            .map(|s| Ok(Real::parse(s, prec)?))
            .collect()
    }

    /// Problem with `f`, `f'`, the root and derivatives at the root.
    pub fn to_problem(&self, prec: Precision) -> Result<ProblemSpec> {
        let f = self.parsed();
        let df = self.derivative(1).expect("corpus entries carry f'");
        Ok(
            ProblemSpec::new(self.name, Arc::new(move |x: &Real| f.eval(x)))
                .with_derivative(Arc::new(move |x: &Real| df.eval(x)))
                .with_known_root(self.known_root(prec)?)
                .with_derivatives_at_root(self.derivatives_at_root(prec)?),
        )
    }
}
