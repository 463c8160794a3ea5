//! The elementary operation set.
//!
//! Every computation the library differentiates is a composition of
//! these operations, each with fixed arity and a known local partial
//! derivative per parent. `eval` and `local_partials` are the two
//! numeric kernels everything else (sweeps, tracing, symbolic
//! evaluation) is built from.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An elementary operation on a tape.
///
/// `Input` and `Const` are nullary; `Const` carries its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElemOp {
    Input,
    Const(f64),
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Ln,
    Exp,
    Sin,
    Cos,
    Tan,
    Sqrt,
}

impl ElemOp {
    /// Number of parents this operation takes.
    pub fn arity(&self) -> usize {
        match self {
            ElemOp::Input | ElemOp::Const(_) => 0,
            ElemOp::Neg
            | ElemOp::Ln
            | ElemOp::Exp
            | ElemOp::Sin
            | ElemOp::Cos
            | ElemOp::Tan
            | ElemOp::Sqrt => 1,
            ElemOp::Add | ElemOp::Sub | ElemOp::Mul | ElemOp::Div | ElemOp::Pow => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ElemOp::Input => "Input",
            ElemOp::Const(_) => "Const",
            ElemOp::Add => "Add",
            ElemOp::Sub => "Sub",
            ElemOp::Mul => "Mul",
            ElemOp::Div => "Div",
            ElemOp::Neg => "Neg",
            ElemOp::Pow => "Pow",
            ElemOp::Ln => "Ln",
            ElemOp::Exp => "Exp",
            ElemOp::Sin => "Sin",
            ElemOp::Cos => "Cos",
            ElemOp::Tan => "Tan",
            ElemOp::Sqrt => "Sqrt",
        }
    }

    /// Short display form used in graph exports and trace listings.
    pub fn symbol(&self) -> &'static str {
        match self {
            ElemOp::Input => "input",
            ElemOp::Const(_) => "const",
            ElemOp::Add => "+",
            ElemOp::Sub => "-",
            ElemOp::Mul => "*",
            ElemOp::Div => "/",
            ElemOp::Neg => "neg",
            ElemOp::Pow => "^",
            ElemOp::Ln => "ln",
            ElemOp::Exp => "exp",
            ElemOp::Sin => "sin",
            ElemOp::Cos => "cos",
            ElemOp::Tan => "tan",
            ElemOp::Sqrt => "sqrt",
        }
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity() {
            return Err(Error::ArityMismatch {
                op: self.name(),
                expected: self.arity(),
                got,
            });
        }
        Ok(())
    }

    fn domain(&self, detail: String) -> Error {
        Error::Domain {
            op: self.name(),
            node: None,
            detail,
        }
    }

    /// Evaluate this operation on its parent values.
    ///
    /// Domain violations (`ln` of a non-positive value, `sqrt` of a
    /// negative, division by zero, `0^negative`, or any non-finite
    /// result) are reported as errors rather than returned as NaN.
    /// `Input` nodes take their value from the sweep and cannot be
    /// evaluated here.
    pub fn eval<S: Scalar>(&self, args: &[S]) -> Result<S> {
        self.check_arity(args.len())?;
        let value = match self {
            ElemOp::Input => {
                return Err(self.domain("input nodes take their value from the sweep".into()))
            }
            ElemOp::Const(c) => S::from_f64(*c),
            ElemOp::Add => args[0] + args[1],
            ElemOp::Sub => args[0] - args[1],
            ElemOp::Mul => args[0] * args[1],
            ElemOp::Div => {
                if args[1].primal() == 0.0 {
                    return Err(self.domain("division by zero".into()));
                }
                args[0] / args[1]
            }
            ElemOp::Neg => -args[0],
            ElemOp::Pow => {
                let base = args[0].primal();
                let exp = args[1].primal();
                if base == 0.0 && exp < 0.0 {
                    return Err(self.domain(format!("zero base with negative exponent {exp}")));
                }
                args[0].powf(args[1])
            }
            ElemOp::Ln => {
                let a = args[0].primal();
                if a <= 0.0 {
                    return Err(self.domain(format!("ln of non-positive value {a}")));
                }
                args[0].ln()
            }
            ElemOp::Exp => args[0].exp(),
            ElemOp::Sin => args[0].sin(),
            ElemOp::Cos => args[0].cos(),
            ElemOp::Tan => args[0].tan(),
            ElemOp::Sqrt => {
                let a = args[0].primal();
                if a < 0.0 {
                    return Err(self.domain(format!("sqrt of negative value {a}")));
                }
                args[0].sqrt()
            }
        };
        if !value.primal().is_finite() {
            return Err(self.domain(format!("non-finite result {}", value.primal())));
        }
        Ok(value)
    }

    /// Local partial derivatives with respect to each parent,
    /// evaluated at `parent_values` where the op produced `value`.
    ///
    /// A non-finite partial (e.g. the `1/x` partial of `Ln` at zero,
    /// or the `Sqrt` partial at zero) is a domain error: the
    /// derivative does not exist there even when the value does.
    pub fn local_partials<S: Scalar>(&self, parent_values: &[S], value: S) -> Result<Vec<S>> {
        self.check_arity(parent_values.len())?;
        let partials = match self {
            ElemOp::Input | ElemOp::Const(_) => vec![],
            ElemOp::Add => vec![S::one(), S::one()],
            ElemOp::Sub => vec![S::one(), -S::one()],
            ElemOp::Mul => vec![parent_values[1], parent_values[0]],
            ElemOp::Div => {
                let (a, b) = (parent_values[0], parent_values[1]);
                vec![S::one() / b, -a / (b * b)]
            }
            ElemOp::Neg => vec![-S::one()],
            ElemOp::Pow => {
                let (base, exp) = (parent_values[0], parent_values[1]);
                let d_base = exp * base.powf(exp - S::one());
                // The exponent partial needs ln(base); where that is
                // undefined the exponent must be constant, so its
                // partial is taken as zero. See `Dual::powf`.
                let d_exp = if base.primal() > 0.0 {
                    value * base.ln()
                } else {
                    S::zero()
                };
                vec![d_base, d_exp]
            }
            ElemOp::Ln => vec![S::one() / parent_values[0]],
            ElemOp::Exp => vec![value],
            ElemOp::Sin => vec![parent_values[0].cos()],
            ElemOp::Cos => vec![-parent_values[0].sin()],
            ElemOp::Tan => {
                let c = parent_values[0].cos();
                vec![S::one() / (c * c)]
            }
            ElemOp::Sqrt => vec![S::one() / (S::from_f64(2.0) * value)],
        };
        for p in &partials {
            if !p.primal().is_finite() {
                return Err(self.domain(format!("non-finite partial derivative {}", p.primal())));
            }
        }
        Ok(partials)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPS_1: [ElemOp; 7] = [
        ElemOp::Neg,
        ElemOp::Ln,
        ElemOp::Exp,
        ElemOp::Sin,
        ElemOp::Cos,
        ElemOp::Tan,
        ElemOp::Sqrt,
    ];
    const OPS_2: [ElemOp; 5] = [
        ElemOp::Add,
        ElemOp::Sub,
        ElemOp::Mul,
        ElemOp::Div,
        ElemOp::Pow,
    ];

    #[test]
    fn mul_partials_swap_parents() {
        let p = ElemOp::Mul.local_partials(&[2.0, 5.0], 10.0).unwrap();
        assert_eq!(p, vec![5.0, 2.0]);
    }

    #[test]
    fn sin_partial_is_cos() {
        let p = ElemOp::Sin.local_partials(&[5.0], 5.0f64.sin()).unwrap();
        assert!((p[0] - 5.0f64.cos()).abs() < 1e-15);
        assert!((p[0] - 0.2837).abs() < 1e-4);
    }

    #[test]
    fn add_partials_are_ones() {
        let p = ElemOp::Add.local_partials(&[3.0, 4.0], 7.0).unwrap();
        assert_eq!(p, vec![1.0, 1.0]);
    }

    #[test]
    fn sub_partials_are_one_minus_one() {
        let p = ElemOp::Sub.local_partials(&[3.0, 4.0], -1.0).unwrap();
        assert_eq!(p, vec![1.0, -1.0]);
    }

    #[test]
    fn arity_is_enforced() {
        assert!(matches!(
            ElemOp::Mul.eval(&[1.0]),
            Err(Error::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(matches!(
            ElemOp::Sin.local_partials(&[1.0, 2.0], 0.0),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn domain_violations_error() {
        assert!(ElemOp::Ln.eval(&[-1.0]).unwrap_err().is_domain());
        assert!(ElemOp::Ln.eval(&[0.0]).unwrap_err().is_domain());
        assert!(ElemOp::Sqrt.eval(&[-0.5]).unwrap_err().is_domain());
        assert!(ElemOp::Div.eval(&[1.0, 0.0]).unwrap_err().is_domain());
        assert!(ElemOp::Pow.eval(&[0.0, -1.0]).unwrap_err().is_domain());
        // negative base with fractional exponent has no real value
        assert!(ElemOp::Pow.eval(&[-2.0, 0.5]).unwrap_err().is_domain());
    }

    #[test]
    fn ln_partial_at_zero_is_domain_error() {
        assert!(ElemOp::Ln
            .local_partials(&[0.0], f64::NEG_INFINITY)
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn sqrt_partial_at_zero_is_domain_error() {
        assert!(ElemOp::Sqrt
            .local_partials(&[0.0], 0.0)
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn pow_negative_base_integer_exponent_partials() {
        // d/da a^2 at a = -3 is -6; the exponent partial is pinned to 0 there
        let p = ElemOp::Pow.local_partials(&[-3.0, 2.0], 9.0).unwrap();
        assert_eq!(p[0], -6.0);
        assert_eq!(p[1], 0.0);
    }

    // Independent oracle: central finite difference of eval itself.
    fn fd_partial(op: ElemOp, args: &[f64], slot: usize) -> f64 {
        let h = 1e-6 * args[slot].abs().max(1.0);
        let mut hi = args.to_vec();
        let mut lo = args.to_vec();
        hi[slot] += h;
        lo[slot] -= h;
        (op.eval(&hi).unwrap() - op.eval(&lo).unwrap()) / (2.0 * h)
    }

    #[test]
    fn partials_match_finite_differences_at_generic_points() {
        let points_1 = [0.7, 1.3, 2.9];
        let points_2 = [(0.7, 1.9), (2.3, 0.6), (1.1, 2.2)];
        for op in OPS_1 {
            for &x in &points_1 {
                let v = op.eval(&[x]).unwrap();
                let p = op.local_partials(&[x], v).unwrap();
                let fd = fd_partial(op, &[x], 0);
                let scale = p[0].abs().max(fd.abs()).max(1.0);
                assert!(
                    (p[0] - fd).abs() / scale < 1e-7,
                    "{op:?} at {x}: analytic {} vs fd {fd}",
                    p[0]
                );
            }
        }
        for op in OPS_2 {
            for &(a, b) in &points_2 {
                let v = op.eval(&[a, b]).unwrap();
                let p = op.local_partials(&[a, b], v).unwrap();
                for (slot, &analytic) in p.iter().enumerate() {
                    let fd = fd_partial(op, &[a, b], slot);
                    let scale = analytic.abs().max(fd.abs()).max(1.0);
                    assert!(
                        (analytic - fd).abs() / scale < 1e-7,
                        "{op:?} slot {slot} at ({a},{b}): analytic {analytic} vs fd {fd}"
                    );
                }
            }
        }
    }
}
