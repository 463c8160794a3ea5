//! Naive symbolic differentiation over expression trees.
//!
//! The second contrast method: exact derivatives produced by rewrite
//! rules on the expression itself. Differentiation is purely
//! structural — no numeric evaluation happens until [`SymExpr::eval`]
//! is called — and the only simplifications applied along the way are
//! constant folding and the identities `0*e -> 0`, `0+e -> e`,
//! `1*e -> e`, `e^1 -> e`. The simplifier is deliberately this
//! minimal: anything stronger would mask the expression swell that
//! repeated rule application produces, which is the phenomenon this
//! module is here to demonstrate. [`SymExpr::simplify`] applies a few
//! extra identities for comparison.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// A symbolic expression over the elementary operation vocabulary,
/// variables, and constants.
#[derive(Debug, Clone, PartialEq)]
pub enum SymExpr {
    Const(f64),
    Var(String),
    Neg(Box<SymExpr>),
    Add(Box<SymExpr>, Box<SymExpr>),
    Sub(Box<SymExpr>, Box<SymExpr>),
    Mul(Box<SymExpr>, Box<SymExpr>),
    Div(Box<SymExpr>, Box<SymExpr>),
    Pow(Box<SymExpr>, Box<SymExpr>),
    Ln(Box<SymExpr>),
    Exp(Box<SymExpr>),
    Sin(Box<SymExpr>),
    Cos(Box<SymExpr>),
    Tan(Box<SymExpr>),
    Sqrt(Box<SymExpr>),
}

use SymExpr::*;

fn is_const(e: &SymExpr, v: f64) -> bool {
    matches!(e, Const(c) if *c == v)
}

/// Fold a binary op when both children are constants and the result
/// is finite; otherwise keep the structure.
fn fold2(a: &SymExpr, b: &SymExpr, f: impl Fn(f64, f64) -> f64) -> Option<SymExpr> {
    if let (Const(x), Const(y)) = (a, b) {
        let v = f(*x, *y);
        if v.is_finite() {
            return Some(Const(v));
        }
    }
    None
}

fn fold1(a: &SymExpr, f: impl Fn(f64) -> f64) -> Option<SymExpr> {
    if let Const(x) = a {
        let v = f(*x);
        if v.is_finite() {
            return Some(Const(v));
        }
    }
    None
}

#[allow(clippy::should_implement_trait)]
impl SymExpr {
    pub fn var(name: impl Into<String>) -> SymExpr {
        Var(name.into())
    }

    pub fn constant(value: f64) -> SymExpr {
        Const(value)
    }

    // Smart constructors: constant folding plus the minimal identity set.

    pub fn add(a: SymExpr, b: SymExpr) -> SymExpr {
        if let Some(c) = fold2(&a, &b, |x, y| x + y) {
            return c;
        }
        if is_const(&a, 0.0) {
            return b;
        }
        if is_const(&b, 0.0) {
            return a;
        }
        Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: SymExpr, b: SymExpr) -> SymExpr {
        if let Some(c) = fold2(&a, &b, |x, y| x - y) {
            return c;
        }
        Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: SymExpr, b: SymExpr) -> SymExpr {
        if let Some(c) = fold2(&a, &b, |x, y| x * y) {
            return c;
        }
        if is_const(&a, 0.0) || is_const(&b, 0.0) {
            return Const(0.0);
        }
        if is_const(&a, 1.0) {
            return b;
        }
        if is_const(&b, 1.0) {
            return a;
        }
        Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: SymExpr, b: SymExpr) -> SymExpr {
        if !is_const(&b, 0.0) {
            if let Some(c) = fold2(&a, &b, |x, y| x / y) {
                return c;
            }
        }
        Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: SymExpr, b: SymExpr) -> SymExpr {
        if is_const(&b, 1.0) {
            return a;
        }
        if let Some(c) = fold2(&a, &b, |x, y| x.powf(y)) {
            return c;
        }
        Pow(Box::new(a), Box::new(b))
    }

    pub fn neg(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, |x| -x) {
            return c;
        }
        Neg(Box::new(a))
    }

    pub fn ln(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, f64::ln) {
            return c;
        }
        Ln(Box::new(a))
    }

    pub fn exp(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, f64::exp) {
            return c;
        }
        Exp(Box::new(a))
    }

    pub fn sin(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, f64::sin) {
            return c;
        }
        Sin(Box::new(a))
    }

    pub fn cos(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, f64::cos) {
            return c;
        }
        Cos(Box::new(a))
    }

    pub fn tan(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, f64::tan) {
            return c;
        }
        Tan(Box::new(a))
    }

    pub fn sqrt(a: SymExpr) -> SymExpr {
        if let Some(c) = fold1(&a, f64::sqrt) {
            return c;
        }
        Sqrt(Box::new(a))
    }

    /// Node count of the expression tree.
    pub fn size(&self) -> usize {
        match self {
            Const(_) | Var(_) => 1,
            Neg(a) | Ln(a) | Exp(a) | Sin(a) | Cos(a) | Tan(a) | Sqrt(a) => 1 + a.size(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Exact symbolic derivative with respect to `var`.
    ///
    /// Purely structural: unbound variables are fine, nothing is
    /// evaluated.
    ///
    /// ```
    /// use wengert::SymExpr;
    ///
    /// let f = SymExpr::parse("x * x").unwrap();
    /// assert_eq!(f.diff("x").to_string(), "x + x"); // product rule
    /// ```
    pub fn diff(&self, var: &str) -> SymExpr {
        match self {
            Const(_) => Const(0.0),
            Var(name) => Const(if name == var { 1.0 } else { 0.0 }),
            Neg(a) => SymExpr::neg(a.diff(var)),
            Add(a, b) => SymExpr::add(a.diff(var), b.diff(var)),
            Sub(a, b) => SymExpr::sub(a.diff(var), b.diff(var)),
            // product rule: du*v + u*dv
            Mul(a, b) => SymExpr::add(
                SymExpr::mul(a.diff(var), (**b).clone()),
                SymExpr::mul((**a).clone(), b.diff(var)),
            ),
            // quotient rule: (du*v - u*dv) / (v*v)
            Div(a, b) => SymExpr::div(
                SymExpr::sub(
                    SymExpr::mul(a.diff(var), (**b).clone()),
                    SymExpr::mul((**a).clone(), b.diff(var)),
                ),
                SymExpr::mul((**b).clone(), (**b).clone()),
            ),
            Pow(a, b) => match &**b {
                // power rule for constant exponents: c*u^(c-1)*du
                Const(c) => SymExpr::mul(
                    SymExpr::mul(Const(*c), SymExpr::pow((**a).clone(), Const(c - 1.0))),
                    a.diff(var),
                ),
                // general case: u^v * (dv*ln(u) + v*du/u)
                _ => SymExpr::mul(
                    (*self).clone(),
                    SymExpr::add(
                        SymExpr::mul(b.diff(var), SymExpr::ln((**a).clone())),
                        SymExpr::div(SymExpr::mul((**b).clone(), a.diff(var)), (**a).clone()),
                    ),
                ),
            },
            Ln(a) => SymExpr::div(a.diff(var), (**a).clone()),
            Exp(a) => SymExpr::mul(SymExpr::exp((**a).clone()), a.diff(var)),
            Sin(a) => SymExpr::mul(SymExpr::cos((**a).clone()), a.diff(var)),
            Cos(a) => SymExpr::neg(SymExpr::mul(SymExpr::sin((**a).clone()), a.diff(var))),
            Tan(a) => SymExpr::div(
                a.diff(var),
                SymExpr::mul(SymExpr::cos((**a).clone()), SymExpr::cos((**a).clone())),
            ),
            Sqrt(a) => SymExpr::div(
                a.diff(var),
                SymExpr::mul(Const(2.0), SymExpr::sqrt((**a).clone())),
            ),
        }
    }

    /// Evaluate with every free variable bound.
    pub fn eval(&self, bindings: &HashMap<String, f64>) -> Result<f64> {
        let domain = |op: &'static str, detail: String| Error::Domain {
            op,
            node: None,
            detail,
        };
        let v = match self {
            Const(c) => *c,
            Var(name) => *bindings
                .get(name)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
            Neg(a) => -a.eval(bindings)?,
            Add(a, b) => a.eval(bindings)? + b.eval(bindings)?,
            Sub(a, b) => a.eval(bindings)? - b.eval(bindings)?,
            Mul(a, b) => a.eval(bindings)? * b.eval(bindings)?,
            Div(a, b) => {
                let d = b.eval(bindings)?;
                if d == 0.0 {
                    return Err(domain("Div", "division by zero".into()));
                }
                a.eval(bindings)? / d
            }
            Pow(a, b) => {
                let base = a.eval(bindings)?;
                let exp = b.eval(bindings)?;
                if base == 0.0 && exp < 0.0 {
                    return Err(domain("Pow", "zero base with negative exponent".into()));
                }
                base.powf(exp)
            }
            Ln(a) => {
                let x = a.eval(bindings)?;
                if x <= 0.0 {
                    return Err(domain("Ln", format!("ln of non-positive value {x}")));
                }
                x.ln()
            }
            Exp(a) => a.eval(bindings)?.exp(),
            Sin(a) => a.eval(bindings)?.sin(),
            Cos(a) => a.eval(bindings)?.cos(),
            Tan(a) => a.eval(bindings)?.tan(),
            Sqrt(a) => {
                let x = a.eval(bindings)?;
                if x < 0.0 {
                    return Err(domain("Sqrt", format!("sqrt of negative value {x}")));
                }
                x.sqrt()
            }
        };
        if !v.is_finite() {
            return Err(domain("SymExpr", format!("non-finite result {v}")));
        }
        Ok(v)
    }

    /// Apply a richer identity set bottom-up, for comparing sizes
    /// against the deliberately minimal default.
    pub fn simplify(&self) -> SymExpr {
        let e = match self {
            Const(_) | Var(_) => self.clone(),
            Neg(a) => SymExpr::neg(a.simplify()),
            Add(a, b) => SymExpr::add(a.simplify(), b.simplify()),
            Sub(a, b) => SymExpr::sub(a.simplify(), b.simplify()),
            Mul(a, b) => SymExpr::mul(a.simplify(), b.simplify()),
            Div(a, b) => SymExpr::div(a.simplify(), b.simplify()),
            Pow(a, b) => SymExpr::pow(a.simplify(), b.simplify()),
            Ln(a) => SymExpr::ln(a.simplify()),
            Exp(a) => SymExpr::exp(a.simplify()),
            Sin(a) => SymExpr::sin(a.simplify()),
            Cos(a) => SymExpr::cos(a.simplify()),
            Tan(a) => SymExpr::tan(a.simplify()),
            Sqrt(a) => SymExpr::sqrt(a.simplify()),
        };
        match e {
            Sub(a, b) if is_const(&b, 0.0) => *a,
            Sub(a, b) if is_const(&a, 0.0) => SymExpr::neg(*b),
            Div(a, b) if is_const(&b, 1.0) => *a,
            Div(a, b) if is_const(&a, 0.0) && !is_const(&b, 0.0) => Const(0.0),
            Pow(a, b) if is_const(&b, 0.0) && !is_const(&a, 0.0) => Const(1.0),
            Pow(a, _) if is_const(&a, 1.0) => Const(1.0),
            Neg(inner) => match *inner {
                Neg(x) => *x,
                other => SymExpr::neg(other),
            },
            other => other,
        }
    }
}

// Precedence levels mirroring the expression-language grammar, so the
// printed form reparses with the same structure.
fn precedence(e: &SymExpr) -> u8 {
    match e {
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(..) => 3,
        Pow(..) => 4,
        _ => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &SymExpr, min: u8) -> fmt::Result {
    if precedence(child) < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(c) => {
                if *c < 0.0 {
                    // keep unary minus reparseable: -2 prints as -2,
                    // but it is an atom here, so parenthesize in context
                    write!(f, "-{}", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Var(name) => write!(f, "{name}"),
            Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 3)
            }
            Add(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " + ")?;
                write_child(f, b, 2)
            }
            Sub(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " - ")?;
                write_child(f, b, 2)
            }
            Mul(a, b) => {
                write_child(f, a, 2)?;
                write!(f, " * ")?;
                write_child(f, b, 3)
            }
            Div(a, b) => {
                write_child(f, a, 2)?;
                write!(f, " / ")?;
                write_child(f, b, 3)
            }
            Pow(a, b) => {
                // the base binds tighter than ^; the exponent side of
                // the grammar accepts a unary, so Neg needs no parens
                write_child(f, a, 5)?;
                write!(f, "^")?;
                write_child(f, b, 3)
            }
            Ln(a) => write!(f, "ln({a})"),
            Exp(a) => write!(f, "exp({a})"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Tan(a) => write!(f, "tan({a})"),
            Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> SymExpr {
        SymExpr::var("x")
    }

    fn bind(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn product_rule_on_x_times_x() {
        // d/dx (x*x) = 1*x + x*1 = x + x
        let e = SymExpr::mul(x(), x());
        let d = e.diff("x");
        assert_eq!(d, SymExpr::add(x(), x()));
    }

    #[test]
    fn ln_rule() {
        let d = SymExpr::ln(x()).diff("x");
        assert_eq!(d, SymExpr::div(Const(1.0), x()));
    }

    #[test]
    fn derivative_of_running_example_wrt_x1() {
        // f = ln(x1) + x1*x2 - sin(x2); df/dx1 at (2,5) = 1/2 + 5 = 5.5
        let f = SymExpr::sub(
            SymExpr::add(
                SymExpr::ln(SymExpr::var("x1")),
                SymExpr::mul(SymExpr::var("x1"), SymExpr::var("x2")),
            ),
            SymExpr::sin(SymExpr::var("x2")),
        );
        let d = f.diff("x1");
        let v = d.eval(&bind(&[("x1", 2.0), ("x2", 5.0)])).unwrap();
        assert!((v - 5.5).abs() < 1e-12);
    }

    #[test]
    fn constant_expression_evaluates_to_itself() {
        assert_eq!(Const(4.25).eval(&bind(&[])).unwrap(), 4.25);
    }

    #[test]
    fn unbound_variable_is_an_error() {
        assert!(matches!(
            x().eval(&bind(&[])),
            Err(Error::UnboundVariable(name)) if name == "x"
        ));
    }

    #[test]
    fn diff_is_purely_structural() {
        // differentiating with unbound variables must not evaluate anything
        let e = SymExpr::mul(SymExpr::var("unbound"), SymExpr::sin(x()));
        let d = e.diff("x");
        assert!(d.size() > 1);
        // and the derivative still mentions the unbound variable
        assert!(format!("{d}").contains("unbound"));
    }

    #[test]
    fn minimal_identities_only() {
        // e - 0 is NOT simplified by the default constructors
        let e = SymExpr::sub(x(), Const(0.0));
        assert_eq!(e.size(), 3);
        // but the opt-in simplifier removes it
        assert_eq!(e.simplify(), x());
    }

    #[test]
    fn swell_product_chain_grows_superlinearly() {
        // p_k(x) = product of sin(i*x), i = 1..=k
        fn chain(k: usize) -> SymExpr {
            let factor = |i: usize| SymExpr::sin(SymExpr::mul(Const(i as f64), SymExpr::var("x")));
            let mut p = factor(1);
            for i in 2..=k {
                p = SymExpr::mul(p, factor(i));
            }
            p
        }
        let mut per_factor = Vec::new();
        for k in 2..=10 {
            let d = chain(k).diff("x");
            per_factor.push(d.size() as f64 / k as f64);
        }
        for w in per_factor.windows(2) {
            assert!(w[1] > w[0], "size/k must increase: {per_factor:?}");
        }
    }

    #[test]
    fn display_round_trips_structure() {
        let e = SymExpr::sub(
            SymExpr::mul(SymExpr::add(x(), Const(2.0)), SymExpr::var("y")),
            SymExpr::pow(x(), Const(3.0)),
        );
        let s = format!("{e}");
        assert_eq!(s, "(x + 2) * y - x^3");
    }

    #[test]
    fn pow_of_pow_parenthesizes_the_base() {
        let e = SymExpr::pow(SymExpr::pow(x(), Const(2.0)), Const(3.0));
        assert_eq!(format!("{e}"), "(x^2)^3");
        let f = SymExpr::pow(x(), SymExpr::pow(Const(2.0), Const(3.0)));
        // constant folding collapses 2^3
        assert_eq!(format!("{f}"), "x^8");
    }
}
