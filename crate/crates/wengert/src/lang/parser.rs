//! Recursive-descent parser for the expression language.
//!
//! Grammar:
//!
//! ```text
//! program   := param_decl stmt* "return" expr ("," expr)*
//! param_decl:= "params" ident ("," ident)*
//! stmt      := ident "=" expr
//!            | "if" cmp ":" stmt* ("else" ":" stmt*)? "end"
//!            | "repeat" integer ":" stmt* "end"
//! cmp       := expr ("<" | "<=" | ">" | ">=" | "==") expr
//! expr      := term (("+" | "-") term)*
//! term      := unary (("*" | "/") unary)*
//! unary     := "-" unary | power
//! power     := atom ("^" unary)?
//! atom      := number | ident | func "(" expr ")" | "(" expr ")"
//! func      := "ln" | "exp" | "sin" | "cos" | "tan" | "sqrt"
//! ```
//!
//! A bare expression (no `params`/`return`) is also accepted; its
//! parameters are inferred in first-use order.
//!
//! Parsing is total: every input yields either an AST or an error
//! with a byte-span into the source. Beyond the grammar, the parser
//! enforces that every variable is assigned before use (a variable
//! assigned under an `if` counts only if both branches assign it),
//! that parameters are never assigned, and that loop counts are
//! nonnegative integer literals.

use super::ast::{BinOp, CmpOp, Comparison, Expr, Func, ProgramAst, SourceSpan, Stmt};
use super::lexer::{lex, Token, TokenKind};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Lex(String),
    Syntax(String),
    UseBeforeAssignment(String),
    AssignToParameter(String),
    NonConstantLoopBound(String),
    DuplicateParameter(String),
    ReservedName(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match &self.kind {
            ParseErrorKind::Lex(m) => m.clone(),
            ParseErrorKind::Syntax(m) => m.clone(),
            ParseErrorKind::UseBeforeAssignment(name) => {
                format!("variable `{name}` used before assignment")
            }
            ParseErrorKind::AssignToParameter(name) => {
                format!("parameter `{name}` is read-only")
            }
            ParseErrorKind::NonConstantLoopBound(m) => m.clone(),
            ParseErrorKind::DuplicateParameter(name) => {
                format!("duplicate parameter `{name}`")
            }
            ParseErrorKind::ReservedName(name) => {
                format!("`{name}` is a reserved function name")
            }
        };
        write!(f, "{msg} at offset {}", self.span.start)
    }
}

impl std::error::Error for ParseError {}

/// Parse a program or a bare expression.
pub fn parse(source: &str) -> Result<ProgramAst, ParseError> {
    let tokens = lex(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    let ast = if parser.peek_kind() == &TokenKind::Params {
        parser.program()?
    } else {
        parser.bare_expression()?
    };
    validate(&ast)?;
    Ok(ast)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError {
            kind: ParseErrorKind::Syntax(format!(
                "expected {expected}, found {}",
                t.kind.describe()
            )),
            span: t.span,
        })
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<Token, ParseError> {
        if self.peek_kind() == &kind {
            Ok(self.advance())
        } else {
            self.syntax(expected)
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek_kind().clone() {
            TokenKind::Ident(name) => {
                let span = self.peek().span;
                self.advance();
                if Func::from_name(&name).is_some() {
                    return Err(ParseError {
                        kind: ParseErrorKind::ReservedName(name),
                        span,
                    });
                }
                Ok((name, span))
            }
            _ => self.syntax(expected),
        }
    }

    fn program(&mut self) -> Result<ProgramAst, ParseError> {
        self.expect(TokenKind::Params, "`params`")?;
        let mut params = Vec::new();
        loop {
            let (name, span) = self.ident("parameter name")?;
            if params.contains(&name) {
                return Err(ParseError {
                    kind: ParseErrorKind::DuplicateParameter(name),
                    span,
                });
            }
            params.push(name);
            if self.peek_kind() == &TokenKind::Comma {
                self.advance();
            } else {
                break;
            }
        }
        let statements = self.stmt_list()?;
        self.expect(TokenKind::Return, "`return`")?;
        let mut returns = vec![self.expr()?];
        while self.peek_kind() == &TokenKind::Comma {
            self.advance();
            returns.push(self.expr()?);
        }
        self.expect(TokenKind::Eof, "end of input")?;
        Ok(ProgramAst {
            params,
            statements,
            returns,
        })
    }

    fn bare_expression(&mut self) -> Result<ProgramAst, ParseError> {
        let expr = self.expr()?;
        self.expect(TokenKind::Eof, "end of input")?;
        let mut params = Vec::new();
        expr.free_vars_in_order(&mut params);
        Ok(ProgramAst {
            params,
            statements: Vec::new(),
            returns: vec![expr],
        })
    }

    /// Statements until a `return`, `else`, `end`, or end of input.
    fn stmt_list(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut stmts = Vec::new();
        loop {
            match self.peek_kind() {
                TokenKind::Return | TokenKind::Else | TokenKind::End | TokenKind::Eof => {
                    return Ok(stmts)
                }
                _ => stmts.push(self.stmt()?),
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.peek_kind().clone() {
            TokenKind::Ident(_) => {
                let (name, name_span) = self.ident("variable name")?;
                self.expect(TokenKind::Assign, "`=`")?;
                let value = self.expr()?;
                let span = name_span.merge(value.span());
                Ok(Stmt::Assign { name, value, span })
            }
            TokenKind::If => {
                let start = self.advance().span;
                let condition = self.comparison()?;
                self.expect(TokenKind::Colon, "`:`")?;
                let then_body = self.stmt_list()?;
                let else_body = if self.peek_kind() == &TokenKind::Else {
                    self.advance();
                    self.expect(TokenKind::Colon, "`:`")?;
                    self.stmt_list()?
                } else {
                    Vec::new()
                };
                let end = self.expect(TokenKind::End, "`end`")?.span;
                Ok(Stmt::If {
                    condition,
                    then_body,
                    else_body,
                    span: start.merge(end),
                })
            }
            TokenKind::Repeat => {
                let start = self.advance().span;
                let count = self.loop_count()?;
                self.expect(TokenKind::Colon, "`:`")?;
                let body = self.stmt_list()?;
                let end = self.expect(TokenKind::End, "`end`")?.span;
                Ok(Stmt::Repeat {
                    count,
                    body,
                    span: start.merge(end),
                })
            }
            _ => self.syntax("a statement"),
        }
    }

    fn loop_count(&mut self) -> Result<usize, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Number(v) => {
                self.advance();
                if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
                    return Err(ParseError {
                        kind: ParseErrorKind::NonConstantLoopBound(format!(
                            "loop count must be a nonnegative integer constant, got {v}"
                        )),
                        span: t.span,
                    });
                }
                Ok(v as usize)
            }
            TokenKind::Ident(_) | TokenKind::LParen | TokenKind::Minus => Err(ParseError {
                kind: ParseErrorKind::NonConstantLoopBound(
                    "loop count must be an integer literal known before tracing".into(),
                ),
                span: t.span,
            }),
            _ => self.syntax("an integer loop count"),
        }
    }

    fn comparison(&mut self) -> Result<Comparison, ParseError> {
        let lhs = self.expr()?;
        let op = match self.peek_kind() {
            TokenKind::Lt => CmpOp::Lt,
            TokenKind::Le => CmpOp::Le,
            TokenKind::Gt => CmpOp::Gt,
            TokenKind::Ge => CmpOp::Ge,
            TokenKind::EqEq => CmpOp::Eq,
            _ => return self.syntax("a comparison operator"),
        };
        self.advance();
        let rhs = self.expr()?;
        let span = lhs.span().merge(rhs.span());
        Ok(Comparison { lhs, op, rhs, span })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            let span = lhs.span().merge(rhs.span());
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span,
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            let span = lhs.span().merge(rhs.span());
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_kind() == &TokenKind::Minus {
            let start = self.advance().span;
            let operand = self.unary()?;
            let span = start.merge(operand.span());
            return Ok(Expr::Neg {
                operand: Box::new(operand),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek_kind() == &TokenKind::Caret {
            self.advance();
            // right-associative: the exponent is a unary
            let exponent = self.unary()?;
            let span = base.span().merge(exponent.span());
            return Ok(Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
                span,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Number(value) => {
                self.advance();
                Ok(Expr::Number {
                    value,
                    span: t.span,
                })
            }
            TokenKind::Ident(name) => {
                self.advance();
                if let Some(func) = Func::from_name(&name) {
                    self.expect(TokenKind::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    let close = self.expect(TokenKind::RParen, "`)`")?.span;
                    return Ok(Expr::Call {
                        func,
                        arg: Box::new(arg),
                        span: t.span.merge(close),
                    });
                }
                Ok(Expr::Var { name, span: t.span })
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.syntax("a number, variable, function call, or `(`"),
        }
    }
}

// Static checks: definite assignment, read-only parameters.

fn validate(ast: &ProgramAst) -> Result<(), ParseError> {
    let params: HashSet<&str> = ast.params.iter().map(String::as_str).collect();
    let mut defined: HashSet<String> = ast.params.iter().cloned().collect();
    check_stmts(&ast.statements, &params, &mut defined)?;
    for r in &ast.returns {
        check_expr(r, &defined)?;
    }
    Ok(())
}

fn check_expr(expr: &Expr, defined: &HashSet<String>) -> Result<(), ParseError> {
    match expr {
        Expr::Number { .. } => Ok(()),
        Expr::Var { name, span } => {
            if defined.contains(name) {
                Ok(())
            } else {
                Err(ParseError {
                    kind: ParseErrorKind::UseBeforeAssignment(name.clone()),
                    span: *span,
                })
            }
        }
        Expr::Neg { operand, .. } => check_expr(operand, defined),
        Expr::Call { arg, .. } => check_expr(arg, defined),
        Expr::Binary { lhs, rhs, .. } => {
            check_expr(lhs, defined)?;
            check_expr(rhs, defined)
        }
    }
}

fn check_stmts(
    stmts: &[Stmt],
    params: &HashSet<&str>,
    defined: &mut HashSet<String>,
) -> Result<(), ParseError> {
    for stmt in stmts {
        match stmt {
            Stmt::Assign { name, value, span } => {
                check_expr(value, defined)?;
                if params.contains(name.as_str()) {
                    return Err(ParseError {
                        kind: ParseErrorKind::AssignToParameter(name.clone()),
                        span: *span,
                    });
                }
                defined.insert(name.clone());
            }
            Stmt::If {
                condition,
                then_body,
                else_body,
                ..
            } => {
                check_expr(&condition.lhs, defined)?;
                check_expr(&condition.rhs, defined)?;
                let mut then_defs = defined.clone();
                check_stmts(then_body, params, &mut then_defs)?;
                let mut else_defs = defined.clone();
                check_stmts(else_body, params, &mut else_defs)?;
                // a variable survives the if only when both paths define it
                for name in then_defs.intersection(&else_defs) {
                    defined.insert(name.clone());
                }
            }
            Stmt::Repeat { count, body, .. } => {
                // the body is checked once; its definitions persist only
                // if it runs at least once
                let mut body_defs = defined.clone();
                check_stmts(body, params, &mut body_defs)?;
                if *count >= 1 {
                    *defined = body_defs;
                }
            }
        }
    }
    Ok(())
}
