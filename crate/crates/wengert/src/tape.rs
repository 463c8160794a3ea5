//! The evaluation trace: an append-only record of elementary
//! operations, also known as a Wengert list.
//!
//! A [`Tape`] is built by recording nodes whose parents always refer
//! to strictly earlier indices, so the node order is a topological
//! order by construction. The first `num_inputs` nodes are `Input`
//! nodes. A forward sweep populates every node's value and its local
//! partial derivatives (store-on-tape), after which tangent sweeps
//! (forward mode) and reverse sweeps (adjoint mode) are pure reads
//! with private derivative storage.
//!
//! A tape is single-writer while recording and during `forward_sweep`;
//! once populated it can be shared freely across threads.

use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::op::ElemOp;
use crate::scalar::Scalar;

/// One recorded elementary operation.
///
/// `value` and `partials` are populated by
/// [`Tape::forward_sweep`]; `partials[k]` is the local derivative of
/// this node with respect to `parents[k]`.
#[derive(Debug, Clone)]
pub struct TraceNode<S = f64> {
    pub op: ElemOp,
    pub parents: Vec<usize>,
    pub value: S,
    pub partials: Vec<S>,
}

/// An evaluation trace over scalar type `S`.
///
/// `S` is `f64` for ordinary use; sweeps over a `Tape<Dual>` propagate
/// tangents through every value and partial, which is how nested
/// forward-over-reverse differentiation is built.
#[derive(Debug)]
pub struct Tape<S = f64> {
    nodes: Vec<TraceNode<S>>,
    num_inputs: usize,
    output_indices: Vec<usize>,
    counter: OpCounter,
    values_valid: bool,
}

impl<S: Scalar> Default for Tape<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Tape<S> {
    pub fn new() -> Self {
        Tape {
            nodes: Vec::new(),
            num_inputs: 0,
            output_indices: Vec::new(),
            counter: OpCounter::new(),
            values_valid: false,
        }
    }

    /// Append a node computing `op` over `parents`; returns its index.
    ///
    /// The node's value is left unevaluated until the next forward
    /// sweep. Input nodes must all be recorded before any other node.
    pub fn record(&mut self, op: ElemOp, parents: &[usize]) -> Result<usize> {
        if parents.len() != op.arity() {
            return Err(Error::ArityMismatch {
                op: op.name(),
                expected: op.arity(),
                got: parents.len(),
            });
        }
        for &p in parents {
            if p >= self.nodes.len() {
                return Err(Error::ParentOutOfRange {
                    parent: p,
                    len: self.nodes.len(),
                });
            }
        }
        if op == ElemOp::Input {
            if self.nodes.len() != self.num_inputs {
                return Err(Error::InputAfterFirstOp);
            }
            self.num_inputs += 1;
        }
        let index = self.nodes.len();
        self.nodes.push(TraceNode {
            op,
            parents: parents.to_vec(),
            value: S::from_f64(f64::NAN),
            partials: Vec::new(),
        });
        self.values_valid = false;
        Ok(index)
    }

    /// Record an input node.
    pub fn input(&mut self) -> Result<usize> {
        self.record(ElemOp::Input, &[])
    }

    /// Record a constant node.
    pub fn constant(&mut self, value: f64) -> usize {
        self.record(ElemOp::Const(value), &[])
            .expect("constants are always recordable")
    }

    /// Mark a node as the next output `y_{m+1}`.
    pub fn mark_output(&mut self, node: usize) -> Result<()> {
        if node >= self.nodes.len() {
            return Err(Error::InvalidOutputNode {
                node,
                len: self.nodes.len(),
            });
        }
        self.output_indices.push(node);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.output_indices.len()
    }

    pub fn output_indices(&self) -> &[usize] {
        &self.output_indices
    }

    pub fn nodes(&self) -> &[TraceNode<S>] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &TraceNode<S> {
        &self.nodes[index]
    }

    /// True once `forward_sweep` has populated values and partials.
    pub fn is_evaluated(&self) -> bool {
        self.values_valid
    }

    pub fn counter(&self) -> &OpCounter {
        &self.counter
    }

    /// Evaluate every node in index order, storing values and local
    /// partials, and return the output values.
    ///
    /// Counts one primal operation per non-`Input`, non-`Const` node.
    /// Domain errors carry the index of the offending node.
    #[allow(clippy::needless_range_loop)]
    pub fn forward_sweep(&mut self, inputs: &[S]) -> Result<Vec<S>> {
        if inputs.len() != self.num_inputs {
            return Err(Error::LengthMismatch {
                what: "inputs",
                expected: self.num_inputs,
                got: inputs.len(),
            });
        }
        if self.output_indices.is_empty() {
            return Err(Error::NoOutputs);
        }
        self.values_valid = false;
        for i in 0..self.nodes.len() {
            match self.nodes[i].op {
                ElemOp::Input => {
                    // Inputs occupy indices 0..num_inputs.
                    self.nodes[i].value = inputs[i];
                }
                ElemOp::Const(c) => {
                    self.nodes[i].value = S::from_f64(c);
                }
                op => {
                    let parent_values: Vec<S> = self.nodes[i]
                        .parents
                        .iter()
                        .map(|&p| self.nodes[p].value)
                        .collect();
                    let value = op.eval(&parent_values).map_err(|e| e.at_node(i))?;
                    let partials = op
                        .local_partials(&parent_values, value)
                        .map_err(|e| e.at_node(i))?;
                    self.counter.add_primal(1);
                    self.nodes[i].value = value;
                    self.nodes[i].partials = partials;
                }
            }
        }
        self.values_valid = true;
        Ok(self
            .output_indices
            .iter()
            .map(|&o| self.nodes[o].value)
            .collect())
    }

    /// Propagate tangents through the populated tape for one seed
    /// direction; returns the tangent of every node.
    ///
    /// `seed[i]` is the tangent assigned to input `i`. Requires a
    /// prior `forward_sweep`. Uses private storage, so concurrent
    /// tangent sweeps over one tape are safe.
    pub fn tangent_sweep(&self, seed: &[S]) -> Result<Vec<S>> {
        if !self.values_valid {
            return Err(Error::UnpopulatedValues);
        }
        if seed.len() != self.num_inputs {
            return Err(Error::LengthMismatch {
                what: "seed",
                expected: self.num_inputs,
                got: seed.len(),
            });
        }
        let mut tangents = vec![S::zero(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            tangents[i] = match node.op {
                ElemOp::Input => seed[i],
                ElemOp::Const(_) => S::zero(),
                _ => {
                    // Multiply-accumulate over stored partials:
                    // arity multiplications plus arity-1 additions.
                    let mut t = node.partials[0] * tangents[node.parents[0]];
                    for k in 1..node.parents.len() {
                        t = t + node.partials[k] * tangents[node.parents[k]];
                    }
                    self.counter.add_tangent(2 * node.parents.len() as u64 - 1);
                    t
                }
            };
        }
        Ok(tangents)
    }
}
