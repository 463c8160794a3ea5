//! Numerical differentiation by finite differences.
//!
//! The contrast method: approximate derivatives from function values
//! at probe points. The step size trades truncation error (shrinks
//! with h) against round-off error (grows as h shrinks), so the error
//! curve over h is V-shaped — this module exists to make that
//! behavior measurable next to the exact AD sweeps.

use crate::error::{Error, Result};

/// Difference scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    /// `(f(x + h) - f(x)) / h` — first order.
    Forward,
    /// `(f(x + h) - f(x - h)) / 2h` — second order, the default.
    Central,
}

/// Step-size policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdStep {
    /// Balance truncation against round-off: cube root of machine
    /// epsilon for the central scheme, square root for forward, each
    /// scaled by `max(1, |x_i|)`.
    Auto,
    /// A fixed positive step.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub scheme: FdScheme,
    pub step: FdStep,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            scheme: FdScheme::Central,
            step: FdStep::Auto,
        }
    }
}

impl FdConfig {
    pub fn central(step: FdStep) -> Self {
        FdConfig {
            scheme: FdScheme::Central,
            step,
        }
    }

    pub fn forward(step: FdStep) -> Self {
        FdConfig {
            scheme: FdScheme::Forward,
            step,
        }
    }

    fn step_for(&self, x: f64) -> Result<f64> {
        match self.step {
            FdStep::Fixed(h) => {
                if h > 0.0 && h.is_finite() {
                    Ok(h)
                } else {
                    Err(Error::InvalidConfig(
                        "finite-difference step must be positive",
                    ))
                }
            }
            FdStep::Auto => {
                let base = match self.scheme {
                    FdScheme::Central => f64::EPSILON.cbrt(),
                    FdScheme::Forward => f64::EPSILON.sqrt(),
                };
                Ok(base * x.abs().max(1.0))
            }
        }
    }
}

/// Approximate the gradient of `f` at `x` by finite differences.
///
/// `f` returns a `Result` so that probe points which leave the
/// function's domain surface as domain errors rather than NaN.
pub fn fd_gradient<F>(mut f: F, x: &[f64], config: &FdConfig) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut gradient = Vec::with_capacity(x.len());
    let base = match config.scheme {
        FdScheme::Forward => Some(f(x)?),
        FdScheme::Central => None,
    };
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = config.step_for(x[i])?;
        let d = match config.scheme {
            FdScheme::Forward => {
                probe[i] = x[i] + h;
                let hi = f(&probe)?;
                probe[i] = x[i];
                (hi - base.unwrap()) / h
            }
            FdScheme::Central => {
                probe[i] = x[i] + h;
                let hi = f(&probe)?;
                probe[i] = x[i] - h;
                let lo = f(&probe)?;
                probe[i] = x[i];
                (hi - lo) / (2.0 * h)
            }
        };
        gradient.push(d);
    }
    Ok(gradient)
}

/// One-dimensional convenience wrapper around [`fd_gradient`].
pub fn fd_derivative<F>(mut f: F, x: f64, config: &FdConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let g = fd_gradient(|xs| f(xs[0]), &[x], config)?;
    Ok(g[0])
}
