//! Error type shared by tape construction, sweeps, and evaluation.

use std::fmt;

/// Errors raised while building tapes, running sweeps, or evaluating
/// expressions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation was recorded with the wrong number of parents.
    ArityMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    /// A parent index referred to a node at or past the insertion point.
    ParentOutOfRange { parent: usize, len: usize },
    /// An input node was recorded after a non-input node.
    InputAfterFirstOp,
    /// A slice argument had the wrong length for this tape.
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// A sweep was requested on a tape with no marked outputs.
    NoOutputs,
    /// An output was marked at a node index past the end of the tape.
    InvalidOutputNode { node: usize, len: usize },
    /// An output position was out of range (`index >= number of outputs`).
    InvalidOutputIndex { index: usize, outputs: usize },
    /// A reverse or tangent sweep ran before `forward_sweep` populated values.
    UnpopulatedValues,
    /// An operation that requires a single scalar output saw several.
    MultiOutput { outputs: usize },
    /// An elementary operation left its mathematical domain.
    ///
    /// `node` identifies the offending tape node when the error arose
    /// during a sweep or while tracing; it is `None` for free-standing
    /// evaluation (symbolic evaluation, probe points, comparisons).
    Domain {
        op: &'static str,
        node: Option<usize>,
        detail: String,
    },
    /// A branch condition compared against a non-finite value.
    NonFiniteComparison,
    /// `dense_hessian` was asked for more inputs than the guard allows.
    HessianTooLarge { n: usize, max: usize },
    /// Evaluation referenced a variable with no binding.
    UnboundVariable(String),
    /// A configuration value violated its documented invariant.
    InvalidConfig(&'static str),
}

impl Error {
    /// Attach a node index to a domain error produced by an op-level check.
    pub(crate) fn at_node(self, node: usize) -> Self {
        match self {
            Error::Domain { op, detail, .. } => Error::Domain {
                op,
                node: Some(node),
                detail,
            },
            other => other,
        }
    }

    /// True for errors that indicate the computation left its domain
    /// (as opposed to a malformed request).
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::NonFiniteComparison)
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ArityMismatch { op, expected, got } => {
                write!(f, "{op} takes {expected} parent(s), got {got}")
            }
            Error::ParentOutOfRange { parent, len } => {
                write!(
                    f,
                    "parent index {parent} out of range for tape of length {len}"
                )
            }
            Error::InputAfterFirstOp => {
                write!(f, "input nodes must be recorded before any other node")
            }
            Error::LengthMismatch {
                what,
                expected,
                got,
            } => {
                write!(f, "{what} has length {got}, expected {expected}")
            }
            Error::NoOutputs => write!(f, "tape has no marked outputs"),
            Error::InvalidOutputNode { node, len } => {
                write!(
                    f,
                    "output node {node} out of range for tape of length {len}"
                )
            }
            Error::InvalidOutputIndex { index, outputs } => {
                write!(
                    f,
                    "output index {index} out of range, tape has {outputs} output(s)"
                )
            }
            Error::UnpopulatedValues => {
                write!(f, "tape values are unpopulated; run forward_sweep first")
            }
            Error::MultiOutput { outputs } => {
                write!(f, "expected a single scalar output, tape has {outputs}")
            }
            Error::Domain { op, node, detail } => match node {
                Some(i) => write!(f, "domain error in {op} at node {i}: {detail}"),
                None => write!(f, "domain error in {op}: {detail}"),
            },
            Error::NonFiniteComparison => {
                write!(f, "branch condition compared a non-finite value")
            }
            Error::HessianTooLarge { n, max } => {
                write!(f, "dense Hessian guarded at n <= {max}, got n = {n}")
            }
            Error::UnboundVariable(name) => write!(f, "unbound variable `{name}`"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
