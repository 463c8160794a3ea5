//! Trace-time execution: programs become straight-line tapes.
//!
//! A program is executed with concrete inputs and every elementary
//! operation it performs is appended to a tape. Control flow is
//! resolved during this execution: an if-statement's comparison is
//! evaluated numerically (it is not recorded — only the taken branch
//! leaves a trace) and repeat-loops append their body once per
//! iteration. The resulting tape is the derivative's subject: it
//! describes the path actually taken at this point, so re-tracing at
//! a point that takes another branch yields a structurally different
//! tape, and no derivative information crosses branch boundaries.

use super::ast::{BinOp, CmpOp, Comparison, Expr, Func, ProgramAst, Stmt};
use crate::builder::TapeBuilder;
use crate::error::{Error, Result};
use crate::op::ElemOp;
use crate::scalar::Scalar;
use crate::tape::Tape;
use std::collections::HashMap;

impl Func {
    pub(crate) fn elem_op(&self) -> ElemOp {
        match self {
            Func::Ln => ElemOp::Ln,
            Func::Exp => ElemOp::Exp,
            Func::Sin => ElemOp::Sin,
            Func::Cos => ElemOp::Cos,
            Func::Tan => ElemOp::Tan,
            Func::Sqrt => ElemOp::Sqrt,
        }
    }
}

impl BinOp {
    pub(crate) fn elem_op(&self) -> ElemOp {
        match self {
            BinOp::Add => ElemOp::Add,
            BinOp::Sub => ElemOp::Sub,
            BinOp::Mul => ElemOp::Mul,
            BinOp::Div => ElemOp::Div,
            BinOp::Pow => ElemOp::Pow,
        }
    }
}

struct Tracer<S> {
    tape: Tape<S>,
    /// Value of each tape node, computed as it is recorded. Needed for
    /// branch decisions and domain checks; the returned tape itself is
    /// left unevaluated for the caller's forward sweep.
    values: Vec<S>,
    /// Variable name -> tape node currently holding it.
    env: HashMap<String, usize>,
}

impl<S: Scalar> Tracer<S> {
    fn new(params: &[String], inputs: &[S]) -> Result<Self> {
        if inputs.len() != params.len() {
            return Err(Error::LengthMismatch {
                what: "inputs",
                expected: params.len(),
                got: inputs.len(),
            });
        }
        let mut tape = Tape::new();
        let mut values = Vec::with_capacity(inputs.len());
        let mut env = HashMap::new();
        for (name, &value) in params.iter().zip(inputs) {
            let node = tape.input()?;
            values.push(value);
            env.insert(name.clone(), node);
        }
        Ok(Tracer { tape, values, env })
    }

    fn record(&mut self, op: ElemOp, parents: &[usize]) -> Result<usize> {
        let node = self.tape.record(op, parents)?;
        let value = match op {
            ElemOp::Const(c) => S::from_f64(c),
            _ => {
                let args: Vec<S> = parents.iter().map(|&p| self.values[p]).collect();
                op.eval(&args).map_err(|e| e.at_node(node))?
            }
        };
        self.values.push(value);
        Ok(node)
    }

    /// Record an expression's operations; returns the node holding its
    /// value.
    fn trace_expr(&mut self, expr: &Expr) -> Result<usize> {
        match expr {
            Expr::Number { value, .. } => self.record(ElemOp::Const(*value), &[]),
            Expr::Var { name, .. } => self
                .env
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnboundVariable(name.clone())),
            Expr::Neg { operand, .. } => {
                let a = self.trace_expr(operand)?;
                self.record(ElemOp::Neg, &[a])
            }
            Expr::Call { func, arg, .. } => {
                let a = self.trace_expr(arg)?;
                self.record(func.elem_op(), &[a])
            }
            Expr::Binary { op, lhs, rhs, .. } => {
                let a = self.trace_expr(lhs)?;
                let b = self.trace_expr(rhs)?;
                self.record(op.elem_op(), &[a, b])
            }
        }
    }

    /// Evaluate an expression without recording it — used for branch
    /// conditions, which vanish from the trace.
    fn eval_expr(&self, expr: &Expr) -> Result<S> {
        match expr {
            Expr::Number { value, .. } => Ok(S::from_f64(*value)),
            Expr::Var { name, .. } => self
                .env
                .get(name)
                .map(|&node| self.values[node])
                .ok_or_else(|| Error::UnboundVariable(name.clone())),
            Expr::Neg { operand, .. } => Ok(-self.eval_expr(operand)?),
            Expr::Call { func, arg, .. } => {
                let a = self.eval_expr(arg)?;
                func.elem_op().eval(&[a])
            }
            Expr::Binary { op, lhs, rhs, .. } => {
                let a = self.eval_expr(lhs)?;
                let b = self.eval_expr(rhs)?;
                op.elem_op().eval(&[a, b])
            }
        }
    }

    fn condition_holds(&self, condition: &Comparison) -> Result<bool> {
        let lhs = self.eval_expr(&condition.lhs)?.primal();
        let rhs = self.eval_expr(&condition.rhs)?.primal();
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::NonFiniteComparison);
        }
        // == is exact floating-point comparison by design
        Ok(match condition.op {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Eq => lhs == rhs,
        })
    }

    fn exec_stmts(&mut self, stmts: &[Stmt]) -> Result<()> {
        for stmt in stmts {
            match stmt {
                Stmt::Assign { name, value, .. } => {
                    let node = self.trace_expr(value)?;
                    self.env.insert(name.clone(), node);
                }
                Stmt::If {
                    condition,
                    then_body,
                    else_body,
                    ..
                } => {
                    if self.condition_holds(condition)? {
                        self.exec_stmts(then_body)?;
                    } else {
                        self.exec_stmts(else_body)?;
                    }
                }
                Stmt::Repeat { count, body, .. } => {
                    for _ in 0..*count {
                        self.exec_stmts(body)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Execute `ast` at `inputs`, recording every elementary operation
/// into a fresh straight-line tape with one output per return
/// expression. The tape is unevaluated; run `forward_sweep` on it.
pub fn trace<S: Scalar>(ast: &ProgramAst, inputs: &[S]) -> Result<Tape<S>> {
    let mut tracer = Tracer::new(&ast.params, inputs)?;
    tracer.exec_stmts(&ast.statements)?;
    for ret in &ast.returns {
        let node = tracer.trace_expr(ret)?;
        tracer.tape.mark_output(node)?;
    }
    Ok(tracer.tape)
}

impl TapeBuilder for ProgramAst {
    fn num_inputs(&self) -> usize {
        self.params.len()
    }

    fn build<S: Scalar>(&self, inputs: &[S]) -> Result<Tape<S>> {
        trace(self, inputs)
    }
}
