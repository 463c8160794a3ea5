//! Conversion from parsed expressions to symbolic trees.

use super::ast::{BinOp, Expr};
use crate::symbolic::SymExpr;

impl Expr {
    /// Convert to a [`SymExpr`] for symbolic differentiation.
    ///
    /// This uses the raw variants rather than the simplifying
    /// constructors so the symbolic tree mirrors the parsed expression
    /// exactly.
    pub fn to_symbolic(&self) -> SymExpr {
        match self {
            Expr::Number { value, .. } => SymExpr::Const(*value),
            Expr::Var { name, .. } => SymExpr::Var(name.clone()),
            Expr::Neg { operand, .. } => SymExpr::Neg(Box::new(operand.to_symbolic())),
            Expr::Call { func, arg, .. } => {
                let a = Box::new(arg.to_symbolic());
                match func {
                    super::ast::Func::Ln => SymExpr::Ln(a),
                    super::ast::Func::Exp => SymExpr::Exp(a),
                    super::ast::Func::Sin => SymExpr::Sin(a),
                    super::ast::Func::Cos => SymExpr::Cos(a),
                    super::ast::Func::Tan => SymExpr::Tan(a),
                    super::ast::Func::Sqrt => SymExpr::Sqrt(a),
                }
            }
            Expr::Binary { op, lhs, rhs, .. } => {
                let l = Box::new(lhs.to_symbolic());
                let r = Box::new(rhs.to_symbolic());
                match op {
                    BinOp::Add => SymExpr::Add(l, r),
                    BinOp::Sub => SymExpr::Sub(l, r),
                    BinOp::Mul => SymExpr::Mul(l, r),
                    BinOp::Div => SymExpr::Div(l, r),
                    BinOp::Pow => SymExpr::Pow(l, r),
                }
            }
        }
    }
}

impl SymExpr {
    /// Parse a bare expression in the language syntax directly into a
    /// symbolic tree.
    pub fn parse(source: &str) -> Result<SymExpr, super::parser::ParseError> {
        let ast = super::parser::parse(source)?;
        Ok(ast.returns[0].to_symbolic())
    }
}
