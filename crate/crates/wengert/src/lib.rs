//! Scalar automatic differentiation on evaluation traces.
//!
//! Computations are recorded as a [`Tape`] of elementary operations (a
//! Wengert list). From one populated tape both derivative modes run as
//! sweeps:
//!
//! - **Forward mode** propagates a tangent alongside every value — one
//!   pass per input direction. It is also available directly through
//!   [`Dual`] arithmetic without a tape.
//! - **Reverse mode** propagates adjoints from an output back to the
//!   inputs — one pass per output, yielding the whole gradient of a
//!   scalar function at a small constant multiple of the cost of
//!   evaluating it.
//!
//! The sweeps are generic over the scalar type, so running reverse
//! mode on [`Dual`] values differentiates the gradient itself: that is
//! [`hvp`](hvp::hvp), an exact Hessian-vector product at gradient-like
//! cost.
//!
//! Around the core sit a small traced expression language
//! ([`lang`]) whose programs (with if/else and constant-count loops)
//! unroll into straight-line tapes, two baseline differentiators for
//! contrast — central finite differences ([`fd_gradient`]) and naive
//! symbolic differentiation ([`SymExpr`]) — and two optimizers driven
//! by the AD engines ([`gradient_descent`], [`newton_cg`]).
//!
//! ```
//! use wengert::{lang, gradient};
//!
//! let f = lang::parse("ln(x1) + x1*x2 - sin(x2)").unwrap();
//! let mut tape = lang::trace(&f, &[2.0, 5.0]).unwrap();
//! let grad = gradient(&mut tape, &[2.0, 5.0]).unwrap();
//! assert_eq!(grad[0], 5.5);
//! assert!((grad[1] - 1.7163).abs() < 1e-4);
//! ```

pub mod builder;
pub mod counter;
pub mod dot;
pub mod dual;
pub mod error;
pub mod fd;
pub mod forward;
pub mod hvp;
pub mod lang;
pub mod listing;
pub mod op;
pub mod optim;
pub mod reverse;
pub mod scalar;
pub mod symbolic;
pub mod tape;

#[cfg(test)]
pub(crate) mod testutil;

pub use builder::{eval_scalar, gradient_of, TapeBuilder};
pub use counter::{OpCounter, OpCounts};
pub use dot::export_dot;
pub use dual::Dual;
pub use error::{Error, Result};
pub use fd::{fd_derivative, fd_gradient, FdConfig, FdScheme, FdStep};
pub use forward::{forward_directional, jacobian_forward};
pub use hvp::{dense_hessian, hvp, hvp_with_gradient, HvpRequest, MAX_DENSE_HESSIAN};
pub use listing::{adjoint_listing, forward_listing, tangent_listing};
pub use op::ElemOp;
pub use optim::{
    gradient_descent, newton_cg, trajectory_csv, GdConfig, Iterate, NewtonCgConfig, OptTrajectory,
    Termination,
};
pub use reverse::{gradient, jacobian_reverse, reverse_sweep, AdjointVector};
pub use scalar::Scalar;
pub use symbolic::SymExpr;
pub use tape::{Tape, TraceNode};
