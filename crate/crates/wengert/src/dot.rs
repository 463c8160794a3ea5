//! Graphviz DOT export of the computational graph.
//!
//! One graph node per trace node, one edge per parent link, emitted in
//! node-index order so the output is deterministic byte for byte.
//! Labels use the v-notation with input and output decoration:
//! `n0 [label="v-1 = x1"]`; output nodes get `peripheries=2`.

use crate::op::ElemOp;
use crate::scalar::Scalar;
use crate::tape::Tape;

/// Render the tape's data-flow graph as DOT text.
///
/// `input_names` overrides the default `x1..xn` input labels; it is
/// truncated or padded with defaults as needed.
pub fn export_dot<S: Scalar>(tape: &Tape<S>, input_names: Option<&[String]>) -> String {
    let n = tape.num_inputs();
    let label = |i: usize| format!("v{}", i as i64 - n as i64 + 1);
    let mut out = String::from("digraph trace {\n");
    for (i, node) in tape.nodes().iter().enumerate() {
        let desc = match node.op {
            ElemOp::Input => {
                let name = input_names
                    .and_then(|names| names.get(i).cloned())
                    .unwrap_or_else(|| format!("x{}", i + 1));
                format!("{} = {}", label(i), name)
            }
            ElemOp::Const(c) => format!("{} = {}", label(i), c),
            op => format!("{} = {}", label(i), op.symbol()),
        };
        let peripheries = if tape.output_indices().contains(&i) {
            ", peripheries=2"
        } else {
            ""
        };
        out.push_str(&format!("  n{i} [label=\"{desc}\"{peripheries}];\n"));
    }
    for (i, node) in tape.nodes().iter().enumerate() {
        for &p in &node.parents {
            out.push_str(&format!("  n{p} -> n{i};\n"));
        }
    }
    out.push_str("}\n");
    out
}
