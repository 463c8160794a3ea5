//! Plain-text trace listings.
//!
//! These render a populated tape in the classic three-column style:
//! variable, defining expression, numeric value. Variables use the
//! three-part v-notation — inputs are `v-(n-1)..v0`, working variables
//! `v1..` — with node index `i` displayed as `v(i - n + 1)`. Tangents
//! are prefixed `d` (`dv2`), adjoints `b` (`bv2`, read "v-bar").
//!
//! The adjoint listing reproduces the incremental presentation of the
//! reverse sweep: the first contribution into a node prints as a plain
//! assignment, later fan-out contributions print as `bvk = bvk + ...`.
//! The exact byte format is frozen by golden tests.

use crate::error::{Error, Result};
use crate::op::ElemOp;
use crate::reverse::reverse_sweep_logged;
use crate::scalar::Scalar;
use crate::tape::Tape;

fn v_label(node: usize, num_inputs: usize) -> String {
    format!("v{}", node as i64 - num_inputs as i64 + 1)
}

fn fmt_val(x: f64, precision: usize) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0
    format!("{x:.precision$}")
}

fn check_names<S: Scalar>(tape: &Tape<S>, input_names: &[String]) -> Result<()> {
    if input_names.len() != tape.num_inputs() {
        return Err(Error::LengthMismatch {
            what: "input_names",
            expected: tape.num_inputs(),
            got: input_names.len(),
        });
    }
    if !tape.is_evaluated() {
        return Err(Error::UnpopulatedValues);
    }
    Ok(())
}

fn render(title: &str, rows: &[(String, String, String)]) -> String {
    let label_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let expr_w = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let mut out = String::from(title);
    out.push('\n');
    for (label, expr, value) in rows {
        out.push_str(&format!(
            "  {label:<label_w$} = {expr:<expr_w$} = {value}\n"
        ));
    }
    out
}

fn const_display(c: f64) -> String {
    format!("{c}")
}

/// Render the forward evaluation trace of a populated tape.
pub fn forward_listing<S: Scalar>(
    tape: &Tape<S>,
    input_names: &[String],
    precision: usize,
) -> Result<String> {
    check_names(tape, input_names)?;
    let n = tape.num_inputs();
    let lbl = |i: usize| v_label(i, n);
    let mut rows = Vec::new();
    for (i, node) in tape.nodes().iter().enumerate() {
        let p = &node.parents;
        let expr = match node.op {
            ElemOp::Input => input_names[i].clone(),
            ElemOp::Const(c) => const_display(c),
            ElemOp::Add => format!("{} + {}", lbl(p[0]), lbl(p[1])),
            ElemOp::Sub => format!("{} - {}", lbl(p[0]), lbl(p[1])),
            ElemOp::Mul => format!("{} * {}", lbl(p[0]), lbl(p[1])),
            ElemOp::Div => format!("{} / {}", lbl(p[0]), lbl(p[1])),
            ElemOp::Pow => format!("{}^{}", lbl(p[0]), lbl(p[1])),
            ElemOp::Neg => format!("-{}", lbl(p[0])),
            ElemOp::Ln | ElemOp::Exp | ElemOp::Sin | ElemOp::Cos | ElemOp::Tan | ElemOp::Sqrt => {
                format!("{}({})", node.op.symbol(), lbl(p[0]))
            }
        };
        rows.push((lbl(i), expr, fmt_val(node.value.primal(), precision)));
    }
    for (j, &o) in tape.output_indices().iter().enumerate() {
        rows.push((
            format!("y{}", j + 1),
            lbl(o),
            fmt_val(tape.node(o).value.primal(), precision),
        ));
    }
    Ok(render("Forward evaluation trace", &rows))
}

/// Render the forward derivative (tangent) trace for one seed
/// direction. Runs a tangent sweep internally.
pub fn tangent_listing<S: Scalar>(
    tape: &Tape<S>,
    seed: &[S],
    input_names: &[String],
    precision: usize,
) -> Result<String> {
    check_names(tape, input_names)?;
    let tangents = tape.tangent_sweep(seed)?;
    let n = tape.num_inputs();
    let lbl = |i: usize| v_label(i, n);
    let dl = |i: usize| format!("d{}", v_label(i, n));
    let mut rows = Vec::new();
    for (i, node) in tape.nodes().iter().enumerate() {
        let p = &node.parents;
        let expr = match node.op {
            ElemOp::Input => format!("d{}", input_names[i]),
            ElemOp::Const(_) => "0".to_string(),
            ElemOp::Add => format!("{} + {}", dl(p[0]), dl(p[1])),
            ElemOp::Sub => format!("{} - {}", dl(p[0]), dl(p[1])),
            ElemOp::Mul => format!(
                "{} * {} + {} * {}",
                dl(p[0]),
                lbl(p[1]),
                lbl(p[0]),
                dl(p[1])
            ),
            ElemOp::Div => format!(
                "{} / {} - {} * {} / {}^2",
                dl(p[0]),
                lbl(p[1]),
                lbl(p[0]),
                dl(p[1]),
                lbl(p[1])
            ),
            ElemOp::Pow => format!(
                "{e} * {b}^({e} - 1) * {db} + {b}^{e} * ln({b}) * {de}",
                b = lbl(p[0]),
                e = lbl(p[1]),
                db = dl(p[0]),
                de = dl(p[1])
            ),
            ElemOp::Neg => format!("-{}", dl(p[0])),
            ElemOp::Ln => format!("{} / {}", dl(p[0]), lbl(p[0])),
            ElemOp::Exp => format!("exp({}) * {}", lbl(p[0]), dl(p[0])),
            ElemOp::Sin => format!("cos({}) * {}", lbl(p[0]), dl(p[0])),
            ElemOp::Cos => format!("-sin({}) * {}", lbl(p[0]), dl(p[0])),
            ElemOp::Tan => format!("{} / cos({})^2", dl(p[0]), lbl(p[0])),
            ElemOp::Sqrt => format!("{} / (2 * sqrt({}))", dl(p[0]), lbl(p[0])),
        };
        rows.push((dl(i), expr, fmt_val(tangents[i].primal(), precision)));
    }
    for (j, &o) in tape.output_indices().iter().enumerate() {
        rows.push((
            format!("dy{}", j + 1),
            dl(o),
            fmt_val(tangents[o].primal(), precision),
        ));
    }
    Ok(render("Forward derivative trace", &rows))
}

/// Render the reverse adjoint trace for one output, seeded with 1.
///
/// Lines appear in sweep order (descending node index); the gradient
/// summary rows come last.
pub fn adjoint_listing<S: Scalar>(
    tape: &Tape<S>,
    output: usize,
    input_names: &[String],
    precision: usize,
) -> Result<String> {
    check_names(tape, input_names)?;
    let (adjoints, events) = reverse_sweep_logged(tape, output, S::one())?;
    let n = tape.num_inputs();
    let lbl = |i: usize| v_label(i, n);
    let bl = |i: usize| format!("b{}", v_label(i, n));
    let output_node = tape.output_indices()[output];

    let mut rows = Vec::new();
    rows.push((
        bl(output_node),
        format!("by{}", output + 1),
        fmt_val(1.0, precision),
    ));
    for ev in &events {
        let node = tape.node(ev.child);
        let p = &node.parents;
        let b = bl(ev.child);
        let term = match (node.op, ev.slot) {
            (ElemOp::Add, _) => format!("{b} * 1"),
            (ElemOp::Sub, 0) => format!("{b} * 1"),
            (ElemOp::Sub, _) => format!("{b} * (-1)"),
            (ElemOp::Mul, 0) => format!("{b} * {}", lbl(p[1])),
            (ElemOp::Mul, _) => format!("{b} * {}", lbl(p[0])),
            (ElemOp::Div, 0) => format!("{b} / {}", lbl(p[1])),
            (ElemOp::Div, _) => format!("{b} * (-{} / {}^2)", lbl(p[0]), lbl(p[1])),
            (ElemOp::Pow, 0) => {
                format!(
                    "{b} * {e} * {base}^({e} - 1)",
                    base = lbl(p[0]),
                    e = lbl(p[1])
                )
            }
            (ElemOp::Pow, _) => {
                format!(
                    "{b} * {base}^{e} * ln({base})",
                    base = lbl(p[0]),
                    e = lbl(p[1])
                )
            }
            (ElemOp::Neg, _) => format!("{b} * (-1)"),
            (ElemOp::Ln, _) => format!("{b} / {}", lbl(p[0])),
            (ElemOp::Exp, _) => format!("{b} * exp({})", lbl(p[0])),
            (ElemOp::Sin, _) => format!("{b} * cos({})", lbl(p[0])),
            (ElemOp::Cos, _) => format!("{b} * (-sin({}))", lbl(p[0])),
            (ElemOp::Tan, _) => format!("{b} / cos({})^2", lbl(p[0])),
            (ElemOp::Sqrt, _) => format!("{b} / (2 * sqrt({}))", lbl(p[0])),
            (ElemOp::Input | ElemOp::Const(_), _) => unreachable!("nullary ops have no edges"),
        };
        let target = bl(ev.parent);
        let expr = if ev.first {
            term
        } else {
            format!("{target} + {term}")
        };
        rows.push((target, expr, fmt_val(ev.accumulated.primal(), precision)));
    }
    for (i, name) in input_names.iter().enumerate() {
        rows.push((
            format!("b{name}"),
            bl(i),
            fmt_val(adjoints.adjoints()[i].primal(), precision),
        ));
    }
    Ok(render("Reverse adjoint trace", &rows))
}
