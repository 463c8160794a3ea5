//! Shared fixtures for unit tests.

use crate::op::ElemOp;
use crate::tape::Tape;

/// The running example f(x1, x2) = ln(x1) + x1*x2 - sin(x2) as a
/// hand-recorded 7-node tape.
pub(crate) fn example_tape() -> Tape {
    let mut t = Tape::new();
    let x1 = t.input().unwrap();
    let x2 = t.input().unwrap();
    let v1 = t.record(ElemOp::Ln, &[x1]).unwrap();
    let v2 = t.record(ElemOp::Mul, &[x1, x2]).unwrap();
    let v3 = t.record(ElemOp::Sin, &[x2]).unwrap();
    let v4 = t.record(ElemOp::Add, &[v1, v2]).unwrap();
    let v5 = t.record(ElemOp::Sub, &[v4, v3]).unwrap();
    t.mark_output(v5).unwrap();
    t
}
