//! Abstract syntax for the expression/program language.
//!
//! A program declares parameters, runs a list of statements
//! (assignments, if/else over a comparison, repeat-loops with a
//! constant count), and returns one or more expressions. Spans are
//! byte offsets into the source for error reporting; they are carried
//! on every node but excluded from structural comparison.

use std::fmt;

/// Byte range in the original source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }

    pub fn merge(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sin,
    Cos,
    Tan,
    Sqrt,
}

impl Func {
    pub const NAMES: [(&'static str, Func); 6] = [
        ("ln", Func::Ln),
        ("exp", Func::Exp),
        ("sin", Func::Sin),
        ("cos", Func::Cos),
        ("tan", Func::Tan),
        ("sqrt", Func::Sqrt),
    ];

    pub fn from_name(name: &str) -> Option<Func> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| *f)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Expr {
    Number {
        value: f64,
        span: SourceSpan,
    },
    Var {
        name: String,
        span: SourceSpan,
    },
    Neg {
        operand: Box<Expr>,
        span: SourceSpan,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
        span: SourceSpan,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        span: SourceSpan,
    },
}

impl Expr {
    pub fn span(&self) -> SourceSpan {
        match self {
            Expr::Number { span, .. }
            | Expr::Var { span, .. }
            | Expr::Neg { span, .. }
            | Expr::Call { span, .. }
            | Expr::Binary { span, .. } => *span,
        }
    }

    /// Structural equality, ignoring spans.
    pub fn structural_eq(&self, other: &Expr) -> bool {
        match (self, other) {
            (Expr::Number { value: a, .. }, Expr::Number { value: b, .. }) => a == b,
            (Expr::Var { name: a, .. }, Expr::Var { name: b, .. }) => a == b,
            (Expr::Neg { operand: a, .. }, Expr::Neg { operand: b, .. }) => a.structural_eq(b),
            (
                Expr::Call {
                    func: fa, arg: aa, ..
                },
                Expr::Call {
                    func: fb, arg: ab, ..
                },
            ) => fa == fb && aa.structural_eq(ab),
            (
                Expr::Binary {
                    op: oa,
                    lhs: la,
                    rhs: ra,
                    ..
                },
                Expr::Binary {
                    op: ob,
                    lhs: lb,
                    rhs: rb,
                    ..
                },
            ) => oa == ob && la.structural_eq(lb) && ra.structural_eq(rb),
            _ => false,
        }
    }

    /// Free variables in first-use (pre-order, left-to-right) order.
    pub fn free_vars_in_order(&self, seen: &mut Vec<String>) {
        match self {
            Expr::Number { .. } => {}
            Expr::Var { name, .. } => {
                if !seen.iter().any(|s| s == name) {
                    seen.push(name.clone());
                }
            }
            Expr::Neg { operand, .. } => operand.free_vars_in_order(seen),
            Expr::Call { arg, .. } => arg.free_vars_in_order(seen),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.free_vars_in_order(seen);
                rhs.free_vars_in_order(seen);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
    pub span: SourceSpan,
}

impl Comparison {
    pub fn structural_eq(&self, other: &Comparison) -> bool {
        self.op == other.op
            && self.lhs.structural_eq(&other.lhs)
            && self.rhs.structural_eq(&other.rhs)
    }
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Assign {
        name: String,
        value: Expr,
        span: SourceSpan,
    },
    If {
        condition: Comparison,
        then_body: Vec<Stmt>,
        else_body: Vec<Stmt>,
        span: SourceSpan,
    },
    Repeat {
        count: usize,
        body: Vec<Stmt>,
        span: SourceSpan,
    },
}

impl Stmt {
    pub fn structural_eq(&self, other: &Stmt) -> bool {
        match (self, other) {
            (
                Stmt::Assign {
                    name: na,
                    value: va,
                    ..
                },
                Stmt::Assign {
                    name: nb,
                    value: vb,
                    ..
                },
            ) => na == nb && va.structural_eq(vb),
            (
                Stmt::If {
                    condition: ca,
                    then_body: ta,
                    else_body: ea,
                    ..
                },
                Stmt::If {
                    condition: cb,
                    then_body: tb,
                    else_body: eb,
                    ..
                },
            ) => ca.structural_eq(cb) && stmts_structural_eq(ta, tb) && stmts_structural_eq(ea, eb),
            (
                Stmt::Repeat {
                    count: ka,
                    body: ba,
                    ..
                },
                Stmt::Repeat {
                    count: kb,
                    body: bb,
                    ..
                },
            ) => ka == kb && stmts_structural_eq(ba, bb),
            _ => false,
        }
    }
}

fn stmts_structural_eq(a: &[Stmt], b: &[Stmt]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.structural_eq(y))
}

/// A parsed program: parameters, statements, and return expressions.
#[derive(Debug, Clone)]
pub struct ProgramAst {
    pub params: Vec<String>,
    pub statements: Vec<Stmt>,
    pub returns: Vec<Expr>,
}

impl ProgramAst {
    pub fn structural_eq(&self, other: &ProgramAst) -> bool {
        self.params == other.params
            && stmts_structural_eq(&self.statements, &other.statements)
            && self.returns.len() == other.returns.len()
            && self
                .returns
                .iter()
                .zip(&other.returns)
                .all(|(a, b)| a.structural_eq(b))
    }

    /// Count of operator nodes (everything except bare numbers and
    /// variable references) across returns and statement expressions.
    pub fn operator_count(&self) -> usize {
        fn count_expr(e: &Expr) -> usize {
            match e {
                Expr::Number { .. } | Expr::Var { .. } => 0,
                Expr::Neg { operand, .. } => 1 + count_expr(operand),
                Expr::Call { arg, .. } => 1 + count_expr(arg),
                Expr::Binary { lhs, rhs, .. } => 1 + count_expr(lhs) + count_expr(rhs),
            }
        }
        fn count_stmts(stmts: &[Stmt]) -> usize {
            stmts
                .iter()
                .map(|s| match s {
                    Stmt::Assign { value, .. } => count_expr(value),
                    Stmt::If {
                        condition,
                        then_body,
                        else_body,
                        ..
                    } => {
                        count_expr(&condition.lhs)
                            + count_expr(&condition.rhs)
                            + count_stmts(then_body)
                            + count_stmts(else_body)
                    }
                    Stmt::Repeat { body, .. } => count_stmts(body),
                })
                .sum()
        }
        count_stmts(&self.statements) + self.returns.iter().map(count_expr).sum::<usize>()
    }
}

// Pretty-printing. The printed form reparses to a structurally
// identical AST; precedence mirrors the grammar.

fn expr_precedence(e: &Expr) -> u8 {
    match e {
        Expr::Binary {
            op: BinOp::Add | BinOp::Sub,
            ..
        } => 1,
        Expr::Binary {
            op: BinOp::Mul | BinOp::Div,
            ..
        } => 2,
        Expr::Neg { .. } => 3,
        Expr::Binary { op: BinOp::Pow, .. } => 4,
        _ => 5,
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    let p = expr_precedence(e);
    if p < min {
        write!(f, "(")?;
    }
    match e {
        Expr::Number { value, .. } => write!(f, "{value}")?,
        Expr::Var { name, .. } => write!(f, "{name}")?,
        Expr::Neg { operand, .. } => {
            write!(f, "-")?;
            write_expr(f, operand, 3)?;
        }
        Expr::Call { func, arg, .. } => {
            write!(f, "{}(", func.name())?;
            write_expr(f, arg, 0)?;
            write!(f, ")")?;
        }
        Expr::Binary { op, lhs, rhs, .. } => {
            match op {
                // left-associative: the right child needs one level more
                BinOp::Add | BinOp::Sub => {
                    write_expr(f, lhs, 1)?;
                    write!(f, " {} ", op.symbol())?;
                    write_expr(f, rhs, 2)?;
                }
                BinOp::Mul | BinOp::Div => {
                    write_expr(f, lhs, 2)?;
                    write!(f, " {} ", op.symbol())?;
                    write_expr(f, rhs, 3)?;
                }
                // right-associative; base must be an atom, exponent a unary
                BinOp::Pow => {
                    write_expr(f, lhs, 5)?;
                    write!(f, "^")?;
                    write_expr(f, rhs, 3)?;
                }
            }
        }
    }
    if p < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

fn write_stmts(f: &mut fmt::Formatter<'_>, stmts: &[Stmt], indent: usize) -> fmt::Result {
    for s in stmts {
        for _ in 0..indent {
            write!(f, "  ")?;
        }
        match s {
            Stmt::Assign { name, value, .. } => writeln!(f, "{name} = {value}")?,
            Stmt::If {
                condition,
                then_body,
                else_body,
                ..
            } => {
                writeln!(f, "if {condition}:")?;
                write_stmts(f, then_body, indent + 1)?;
                if !else_body.is_empty() {
                    for _ in 0..indent {
                        write!(f, "  ")?;
                    }
                    writeln!(f, "else:")?;
                    write_stmts(f, else_body, indent + 1)?;
                }
                for _ in 0..indent {
                    write!(f, "  ")?;
                }
                writeln!(f, "end")?;
            }
            Stmt::Repeat { count, body, .. } => {
                writeln!(f, "repeat {count}:")?;
                write_stmts(f, body, indent + 1)?;
                for _ in 0..indent {
                    write!(f, "  ")?;
                }
                writeln!(f, "end")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for ProgramAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // a program with no parameters can only have come from a bare
        // expression, and the grammar's `params` clause needs at least
        // one name — print the bare form
        if self.params.is_empty() && self.statements.is_empty() && self.returns.len() == 1 {
            return writeln!(f, "{}", self.returns[0]);
        }
        writeln!(f, "params {}", self.params.join(", "))?;
        write_stmts(f, &self.statements, 0)?;
        write!(f, "return ")?;
        for (i, r) in self.returns.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        writeln!(f)
    }
}
