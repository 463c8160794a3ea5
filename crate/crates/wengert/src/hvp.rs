//! Exact Hessian-vector products by forward-over-reverse composition.
//!
//! The reverse sweep is generic over the scalar type, so running the
//! whole gradient computation on [`Dual`] values whose input tangents
//! hold a direction `v` differentiates the gradient along `v`: the
//! primal channel of the input adjoints is the gradient, and the
//! tangent channel is exactly `H v`. The cost is a constant multiple
//! of one gradient, independent of the input dimension — the full
//! Hessian is never formed.

use crate::builder::TapeBuilder;
use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::reverse::reverse_sweep;
use crate::scalar::Scalar;

/// Guard on [`dense_hessian`]: it exists as a small-n oracle, not a
/// scalable operation.
pub const MAX_DENSE_HESSIAN: usize = 32;

/// An evaluation point `w` and a direction `v` for one product `H v`.
#[derive(Debug, Clone, PartialEq)]
pub struct HvpRequest {
    pub inputs: Vec<f64>,
    pub direction: Vec<f64>,
}

impl HvpRequest {
    pub fn new(inputs: Vec<f64>, direction: Vec<f64>) -> Self {
        HvpRequest { inputs, direction }
    }
}

/// Compute `H v` for a scalar-output function at `request.inputs`
/// along `request.direction`.
///
/// ```
/// use wengert::{hvp, HvpRequest, lang};
///
/// let f = lang::parse("x1^2 + x2^2").unwrap(); // H = 2I everywhere
/// let hv = hvp(&f, &HvpRequest::new(vec![3.0, -1.0], vec![1.0, 2.0])).unwrap();
/// assert_eq!(hv, vec![2.0, 4.0]);
/// ```
pub fn hvp<B: TapeBuilder + ?Sized>(f: &B, request: &HvpRequest) -> Result<Vec<f64>> {
    hvp_with_gradient(f, request).map(|(_, hv)| hv)
}

/// Compute the gradient and `H v` together in one dual-valued
/// gradient pass; the gradient comes out of the primal channel for
/// free.
pub fn hvp_with_gradient<B: TapeBuilder + ?Sized>(
    f: &B,
    request: &HvpRequest,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = f.num_inputs();
    if request.inputs.len() != n {
        return Err(Error::LengthMismatch {
            what: "inputs",
            expected: n,
            got: request.inputs.len(),
        });
    }
    if request.direction.len() != n {
        return Err(Error::LengthMismatch {
            what: "direction",
            expected: n,
            got: request.direction.len(),
        });
    }
    let duals: Vec<Dual> = request
        .inputs
        .iter()
        .zip(&request.direction)
        .map(|(&w, &v)| Dual::new(w, v))
        .collect();
    let mut tape = f.build(&duals)?;
    if tape.num_outputs() != 1 {
        return Err(Error::MultiOutput {
            outputs: tape.num_outputs(),
        });
    }
    tape.forward_sweep(&duals)?;
    let adjoints = reverse_sweep(&tape, 0, Dual::one())?;
    let gradient = adjoints.input_adjoints().iter().map(|a| a.primal).collect();
    let hv = adjoints
        .input_adjoints()
        .iter()
        .map(|a| a.tangent)
        .collect();
    Ok((gradient, hv))
}

/// Assemble the dense Hessian column by column from unit-direction
/// Hessian-vector products. Guarded to small n; intended as an oracle
/// for testing, not for scale.
pub fn dense_hessian<B: TapeBuilder + ?Sized>(f: &B, inputs: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = f.num_inputs();
    if n > MAX_DENSE_HESSIAN {
        return Err(Error::HessianTooLarge {
            n,
            max: MAX_DENSE_HESSIAN,
        });
    }
    if inputs.len() != n {
        return Err(Error::LengthMismatch {
            what: "inputs",
            expected: n,
            got: inputs.len(),
        });
    }
    let mut hessian = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut unit = vec![0.0; n];
        unit[i] = 1.0;
        let column = hvp(f, &HvpRequest::new(inputs.to_vec(), unit))?;
        for (row, h) in hessian.iter_mut().zip(column) {
            row[i] = h;
        }
    }
    Ok(hessian)
}
