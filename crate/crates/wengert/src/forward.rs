//! Forward accumulation over a recorded tape.
//!
//! One pass propagates one directional derivative: seeding the inputs
//! with a direction `u` yields the Jacobian-vector product `J u` at
//! the outputs. The full Jacobian therefore costs one pass per input.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tape::Tape;

/// Run one forward pass: evaluate the tape at `inputs` and propagate
/// the tangent direction `seed` alongside it.
///
/// Returns `(outputs, output_tangents)` where output tangent `j` is
/// the directional derivative of output `j` along `seed`.
pub fn forward_directional<S: Scalar>(
    tape: &mut Tape<S>,
    inputs: &[S],
    seed: &[S],
) -> Result<(Vec<S>, Vec<S>)> {
    let outputs = tape.forward_sweep(inputs)?;
    let tangents = tape.tangent_sweep(seed)?;
    let output_tangents = tape.output_indices().iter().map(|&o| tangents[o]).collect();
    Ok((outputs, output_tangents))
}

/// Assemble the full m-by-n Jacobian by forward mode: one tangent
/// sweep per input, seeded with the unit direction for that input.
pub fn jacobian_forward<S: Scalar>(tape: &mut Tape<S>, inputs: &[S]) -> Result<Vec<Vec<S>>> {
    let n = tape.num_inputs();
    tape.forward_sweep(inputs)?;
    let m = tape.num_outputs();
    if m == 0 {
        return Err(Error::NoOutputs);
    }
    let mut jacobian = vec![vec![S::zero(); n]; m];
    for i in 0..n {
        let mut seed = vec![S::zero(); n];
        seed[i] = S::one();
        let tangents = tape.tangent_sweep(&seed)?;
        for (j, &o) in tape.output_indices().iter().enumerate() {
            jacobian[j][i] = tangents[o];
        }
    }
    Ok(jacobian)
}
