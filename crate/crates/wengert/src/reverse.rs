//! Reverse accumulation: the adjoint sweep.
//!
//! After a forward sweep has stored values and local partials, one
//! reverse pass propagates adjoints from a chosen output back to the
//! inputs, accumulating `adjoint[parent] += adjoint[node] * partial`
//! at every edge. Fan-out is handled by the accumulation itself: a
//! node feeding several consumers receives one contribution per
//! consumer. One sweep yields the sensitivities of one output with
//! respect to every node — in particular all n input partials at once.
//!
//! The sweep is generic over [`Scalar`], so it can run on `Dual`
//! values; that composition (forward over reverse) is what
//! [`hvp`](crate::hvp::hvp) uses.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tape::Tape;

/// Per-node sensitivities of one output, produced by a reverse sweep.
///
/// Entries at input nodes (the first `num_inputs`) are the gradient
/// components.
#[derive(Debug, Clone)]
pub struct AdjointVector<S = f64> {
    adjoints: Vec<S>,
    num_inputs: usize,
}

impl<S: Scalar> AdjointVector<S> {
    /// Adjoint of every tape node, indexed by node.
    pub fn adjoints(&self) -> &[S] {
        &self.adjoints
    }

    /// Adjoints at the input nodes: the gradient of the swept output.
    pub fn input_adjoints(&self) -> &[S] {
        &self.adjoints[..self.num_inputs]
    }
}

/// One edge visit during a reverse sweep, recorded for trace listings.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AdjointEvent<S> {
    /// Node whose adjoint is being distributed.
    pub child: usize,
    /// Which parent slot of `child` this contribution flows through.
    pub slot: usize,
    /// Node receiving the contribution.
    pub parent: usize,
    /// Adjoint of `parent` after this contribution.
    pub accumulated: S,
    /// True if this was the first contribution into `parent`.
    pub first: bool,
}

fn sweep<S: Scalar>(
    tape: &Tape<S>,
    output: usize,
    output_seed: S,
    mut log: Option<&mut Vec<AdjointEvent<S>>>,
) -> Result<AdjointVector<S>> {
    if !tape.is_evaluated() {
        return Err(Error::UnpopulatedValues);
    }
    if output >= tape.num_outputs() {
        return Err(Error::InvalidOutputIndex {
            index: output,
            outputs: tape.num_outputs(),
        });
    }
    let output_node = tape.output_indices()[output];
    let mut adjoints = vec![S::zero(); tape.len()];
    let mut touched = vec![false; tape.len()];
    adjoints[output_node] = output_seed;
    touched[output_node] = true;

    // Strictly descending index order: every node's adjoint is final
    // before it is distributed to its parents.
    for child in (0..tape.len()).rev() {
        let node = tape.node(child);
        let child_adjoint = adjoints[child];
        for (slot, &parent) in node.parents.iter().enumerate() {
            adjoints[parent] = adjoints[parent] + child_adjoint * node.partials[slot];
            // one multiply and one add per edge
            tape.counter().add_adjoint(2);
            if let Some(events) = log.as_deref_mut() {
                events.push(AdjointEvent {
                    child,
                    slot,
                    parent,
                    accumulated: adjoints[parent],
                    first: !touched[parent],
                });
            }
            touched[parent] = true;
        }
    }
    Ok(AdjointVector {
        adjoints,
        num_inputs: tape.num_inputs(),
    })
}

/// Propagate adjoints backward from output `output` (an index into
/// the tape's output list), seeded with `output_seed`.
///
/// Requires a prior `forward_sweep`. Uses private adjoint storage, so
/// concurrent sweeps over one populated tape are safe.
pub fn reverse_sweep<S: Scalar>(
    tape: &Tape<S>,
    output: usize,
    output_seed: S,
) -> Result<AdjointVector<S>> {
    sweep(tape, output, output_seed, None)
}

/// Reverse sweep that also records every edge visit, for trace listings.
pub(crate) fn reverse_sweep_logged<S: Scalar>(
    tape: &Tape<S>,
    output: usize,
    output_seed: S,
) -> Result<(AdjointVector<S>, Vec<AdjointEvent<S>>)> {
    let mut events = Vec::new();
    let adj = sweep(tape, output, output_seed, Some(&mut events))?;
    Ok((adj, events))
}

/// Gradient of a single-output tape: one forward sweep, one reverse
/// sweep with unit seed, regardless of the number of inputs.
pub fn gradient<S: Scalar>(tape: &mut Tape<S>, inputs: &[S]) -> Result<Vec<S>> {
    if tape.num_outputs() != 1 {
        return Err(Error::MultiOutput {
            outputs: tape.num_outputs(),
        });
    }
    tape.forward_sweep(inputs)?;
    let adjoints = reverse_sweep(tape, 0, S::one())?;
    Ok(adjoints.input_adjoints().to_vec())
}

/// Assemble the full m-by-n Jacobian by reverse mode: one reverse
/// sweep per output.
pub fn jacobian_reverse<S: Scalar>(tape: &mut Tape<S>, inputs: &[S]) -> Result<Vec<Vec<S>>> {
    tape.forward_sweep(inputs)?;
    let m = tape.num_outputs();
    let mut jacobian = Vec::with_capacity(m);
    for j in 0..m {
        let adjoints = reverse_sweep(tape, j, S::one())?;
        jacobian.push(adjoints.input_adjoints().to_vec());
    }
    Ok(jacobian)
}
