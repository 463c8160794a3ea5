//! Operation counting for complexity measurements.
//!
//! Counters are atomic so read-only sweeps over a shared tape can
//! still tally work; counts accumulate across sweeps until `reset`.

use std::sync::atomic::{AtomicU64, Ordering};

/// Tally of elementary arithmetic performed by sweeps over one tape.
#[derive(Debug, Default)]
pub struct OpCounter {
    primal: AtomicU64,
    tangent: AtomicU64,
    adjoint: AtomicU64,
}

/// A point-in-time copy of an [`OpCounter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCounts {
    pub primal_ops: u64,
    pub tangent_ops: u64,
    pub adjoint_ops: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add_primal(&self, n: u64) {
        self.primal.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_tangent(&self, n: u64) {
        self.tangent.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn add_adjoint(&self, n: u64) {
        self.adjoint.fetch_add(n, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            primal_ops: self.primal.load(Ordering::Relaxed),
            tangent_ops: self.tangent.load(Ordering::Relaxed),
            adjoint_ops: self.adjoint.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.primal.store(0, Ordering::Relaxed);
        self.tangent.store(0, Ordering::Relaxed);
        self.adjoint.store(0, Ordering::Relaxed);
    }
}
