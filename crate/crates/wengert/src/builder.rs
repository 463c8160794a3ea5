//! Building tapes from function descriptions.
//!
//! A [`TapeBuilder`] is anything that can lay down its computation as
//! a fresh tape for given input values — the inputs matter because
//! control flow is resolved at trace time, so different points can
//! produce structurally different tapes. The build method is generic
//! over [`Scalar`] so the same description can be traced with plain
//! `f64` values or with `Dual` values for nested differentiation.

use crate::error::{Error, Result};
use crate::reverse;
use crate::scalar::Scalar;
use crate::tape::Tape;

/// A function description that can be traced into a [`Tape`].
pub trait TapeBuilder {
    /// Number of inputs the traced tape will have.
    fn num_inputs(&self) -> usize;

    /// Trace the computation at `inputs` into a fresh, unevaluated tape.
    fn build<S: Scalar>(&self, inputs: &[S]) -> Result<Tape<S>>;
}

/// Evaluate a scalar-output builder at a point.
pub fn eval_scalar<B: TapeBuilder + ?Sized>(f: &B, x: &[f64]) -> Result<f64> {
    let mut tape = f.build(x)?;
    if tape.num_outputs() != 1 {
        return Err(Error::MultiOutput {
            outputs: tape.num_outputs(),
        });
    }
    Ok(tape.forward_sweep(x)?[0])
}

/// Reverse-mode gradient of a scalar-output builder at a point.
pub fn gradient_of<B: TapeBuilder + ?Sized>(f: &B, x: &[f64]) -> Result<Vec<f64>> {
    let mut tape = f.build(x)?;
    reverse::gradient(&mut tape, x)
}
