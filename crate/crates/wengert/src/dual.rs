//! Dual numbers: the forward-mode carrier.
//!
//! A [`Dual`] pairs a primal value with a tangent and propagates both
//! through arithmetic, so evaluating `f` on duals seeded with
//! `tangent = 1` on one input yields that input's partial derivative
//! alongside the value. This is the operator-overloading face of
//! forward mode; the tape-based tangent sweep in
//! [`forward`](crate::forward) is the other, and the two must agree.
//!
//! Arithmetic here mirrors `f64` semantics: out-of-domain inputs
//! produce NaN/inf rather than errors. Domain checking lives in the
//! tape sweeps.
//!
//! Both fields are concrete `f64`, which fixes nesting at one level by
//! construction: a `Dual` cannot carry another `Dual` in its tangent
//! channel, so perturbation confusion between nesting levels cannot
//! arise. Forward-over-reverse (Hessian-vector products) is the
//! supported composition; deeper towers are not.

use crate::scalar::Scalar;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A primal/tangent pair `(v, v̇)`.
///
/// ```
/// use wengert::Dual;
///
/// // f(x) = ln(x) + x*5 - sin(5) at x = 2, differentiated by seeding
/// // the input with unit tangent
/// let x = Dual::variable(2.0);
/// let y = x.ln() + x * 5.0 - Dual::constant(5.0).sin();
/// assert!((y.primal - 11.652071455223084).abs() < 1e-15);
/// assert_eq!(y.tangent, 5.5); // 1/x + 5
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub primal: f64,
    pub tangent: f64,
}

impl Dual {
    pub fn new(primal: f64, tangent: f64) -> Self {
        Dual { primal, tangent }
    }

    /// A value with zero tangent (derivative of a constant).
    pub fn constant(value: f64) -> Self {
        Dual {
            primal: value,
            tangent: 0.0,
        }
    }

    /// A value seeded with unit tangent (the variable of differentiation).
    pub fn variable(value: f64) -> Self {
        Dual {
            primal: value,
            tangent: 1.0,
        }
    }

    pub fn ln(self) -> Self {
        Dual {
            primal: self.primal.ln(),
            tangent: self.tangent / self.primal,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.primal.exp();
        Dual {
            primal: e,
            tangent: self.tangent * e,
        }
    }

    pub fn sin(self) -> Self {
        Dual {
            primal: self.primal.sin(),
            tangent: self.tangent * self.primal.cos(),
        }
    }

    pub fn cos(self) -> Self {
        Dual {
            primal: self.primal.cos(),
            tangent: -self.tangent * self.primal.sin(),
        }
    }

    pub fn tan(self) -> Self {
        let c = self.primal.cos();
        Dual {
            primal: self.primal.tan(),
            tangent: self.tangent / (c * c),
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.primal.sqrt();
        Dual {
            primal: s,
            tangent: self.tangent / (2.0 * s),
        }
    }

    /// `self^exponent` with both channels differentiated.
    ///
    /// The exponent-side term needs `ln(base)`, so for non-positive
    /// bases it is defined as zero; differentiating with respect to an
    /// exponent at a non-positive base is unsupported. The base-side
    /// term remains correct there for integral exponents, which keeps
    /// `x^2` differentiable at negative `x`.
    pub fn powf(self, exponent: Self) -> Self {
        let value = self.primal.powf(exponent.primal);
        let d_base = exponent.primal * self.primal.powf(exponent.primal - 1.0);
        let d_exp = if self.primal > 0.0 {
            value * self.primal.ln()
        } else {
            0.0
        };
        Dual {
            primal: value,
            tangent: d_base * self.tangent + d_exp * exponent.tangent,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            primal: self.primal + rhs.primal,
            tangent: self.tangent + rhs.tangent,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            primal: self.primal - rhs.primal,
            tangent: self.tangent - rhs.tangent,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            primal: self.primal * rhs.primal,
            tangent: self.tangent * rhs.primal + self.primal * rhs.tangent,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        Dual {
            primal: self.primal / rhs.primal,
            tangent: (self.tangent * rhs.primal - self.primal * rhs.tangent)
                / (rhs.primal * rhs.primal),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            primal: -self.primal,
            tangent: -self.tangent,
        }
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(self, rhs: f64) -> Dual {
        self + Dual::constant(rhs)
    }
}

impl Add<Dual> for f64 {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::constant(self) + rhs
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(self, rhs: f64) -> Dual {
        self - Dual::constant(rhs)
    }
}

impl Sub<Dual> for f64 {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::constant(self) - rhs
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        self * Dual::constant(rhs)
    }
}

impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual::constant(self) * rhs
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    fn div(self, rhs: f64) -> Dual {
        self / Dual::constant(rhs)
    }
}

impl Div<Dual> for f64 {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        Dual::constant(self) / rhs
    }
}

impl Scalar for Dual {
    fn from_f64(value: f64) -> Self {
        Dual::constant(value)
    }

    fn primal(self) -> f64 {
        self.primal
    }

    fn ln(self) -> Self {
        Dual::ln(self)
    }

    fn exp(self) -> Self {
        Dual::exp(self)
    }

    fn sin(self) -> Self {
        Dual::sin(self)
    }

    fn cos(self) -> Self {
        Dual::cos(self)
    }

    fn tan(self) -> Self {
        Dual::tan(self)
    }

    fn sqrt(self) -> Self {
        Dual::sqrt(self)
    }

    fn powf(self, exponent: Self) -> Self {
        Dual::powf(self, exponent)
    }
}
