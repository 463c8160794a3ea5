//! The traced expression/program language.
//!
//! Small programs — parameters, assignments, if/else, constant-count
//! repeat loops, one or more return expressions — are parsed by a
//! recursive-descent parser and executed into straight-line tapes by
//! the [`trace`] function. Bare expressions are accepted too, with
//! parameters inferred in first-use order.

pub mod ast;
pub mod bindings;
pub mod convert;
pub mod corpus;
pub mod lexer;
pub mod parser;
pub mod tracer;

pub use ast::{BinOp, CmpOp, Comparison, Expr, Func, ProgramAst, SourceSpan, Stmt};
pub use bindings::parse_bindings;
pub use corpus::{canned_examples, CannedExample};
pub use parser::{parse, ParseError, ParseErrorKind};
pub use tracer::trace;
