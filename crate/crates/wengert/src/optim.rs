//! Derivative-driven optimizers.
//!
//! Two minimizers over [`TapeBuilder`] functions: fixed-step gradient
//! descent (`w <- w - eta * grad f`) and a Hessian-free Newton method
//! whose inner conjugate-gradient loop touches the Hessian only
//! through Hessian-vector products — the dense Hessian is never
//! formed. Both are deterministic given the function, the start
//! point, and the configuration.

use crate::builder::{eval_scalar, gradient_of, TapeBuilder};
use crate::error::{Error, Result};
use crate::hvp::{hvp, HvpRequest};

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Fixed-step gradient descent settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdConfig {
    /// Step size eta.
    pub step: f64,
    pub max_iters: usize,
    /// Stop when the max-norm of the gradient drops below this.
    pub grad_tol: f64,
}

impl Default for GdConfig {
    fn default() -> Self {
        GdConfig {
            step: 1e-2,
            max_iters: 1000,
            grad_tol: 1e-8,
        }
    }
}

impl GdConfig {
    fn validate(&self) -> Result<()> {
        if !positive(self.step) {
            return Err(Error::InvalidConfig("step size must be positive"));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if !positive(self.grad_tol) {
            return Err(Error::InvalidConfig("grad_tol must be positive"));
        }
        Ok(())
    }
}

/// Newton-CG settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonCgConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// The CG loop stops at this residual norm relative to the
    /// gradient norm.
    pub cg_rel_tol: f64,
    /// Cap on CG iterations per outer step; defaults to n.
    pub max_cg_iters: Option<usize>,
}

impl Default for NewtonCgConfig {
    fn default() -> Self {
        NewtonCgConfig {
            max_iters: 100,
            grad_tol: 1e-8,
            cg_rel_tol: 1e-8,
            max_cg_iters: None,
        }
    }
}

impl NewtonCgConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if !positive(self.grad_tol) {
            return Err(Error::InvalidConfig("grad_tol must be positive"));
        }
        if !positive(self.cg_rel_tol) {
            return Err(Error::InvalidConfig("cg_rel_tol must be positive"));
        }
        Ok(())
    }
}

/// Why an optimization run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Gradient max-norm fell below the tolerance.
    Converged,
    /// The iteration cap was reached.
    MaxIters,
    /// The function left its domain mid-run; the trajectory holds the
    /// iterates up to that point.
    DomainError,
}

/// One recorded iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub point: Vec<f64>,
    pub value: f64,
    pub grad_inf_norm: f64,
}

/// The whole run: every accepted iterate plus the stop reason.
#[derive(Debug, Clone, PartialEq)]
pub struct OptTrajectory {
    pub iterates: Vec<Iterate>,
    pub termination: Termination,
}

impl OptTrajectory {
    /// The last recorded point.
    pub fn final_point(&self) -> &[f64] {
        &self
            .iterates
            .last()
            .expect("trajectory is never empty")
            .point
    }

    pub fn final_value(&self) -> f64 {
        self.iterates
            .last()
            .expect("trajectory is never empty")
            .value
    }
}

/// Render a trajectory as CSV: `iter,f,grad_inf_norm` then one column
/// per parameter.
pub fn trajectory_csv(trajectory: &OptTrajectory, param_names: &[String]) -> String {
    let mut out = String::from("iter,f,grad_inf_norm");
    for name in param_names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (k, it) in trajectory.iterates.iter().enumerate() {
        out.push_str(&format!("{k},{},{}", it.value, it.grad_inf_norm));
        for w in &it.point {
            out.push_str(&format!(",{w}"));
        }
        out.push('\n');
    }
    out
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluate value and gradient together; `Ok(None)` means the point
/// left the function's domain.
fn value_and_grad<B: TapeBuilder + ?Sized>(f: &B, w: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    match eval_scalar(f, w).and_then(|v| gradient_of(f, w).map(|g| (v, g))) {
        Ok(pair) => Ok(Some(pair)),
        Err(e) if e.is_domain() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Minimize by fixed-step gradient descent: `w <- w - step * grad`.
///
/// Records `(w, f(w), |grad|_inf)` for every visited point, the start
/// included. A domain error mid-descent terminates the run with
/// [`Termination::DomainError`] rather than failing it.
pub fn gradient_descent<B: TapeBuilder + ?Sized>(
    f: &B,
    w0: &[f64],
    config: &GdConfig,
) -> Result<OptTrajectory> {
    config.validate()?;
    let mut iterates = Vec::new();
    let mut w = w0.to_vec();
    for k in 0..=config.max_iters {
        let Some((value, grad)) = value_and_grad(f, &w)? else {
            return Ok(OptTrajectory {
                iterates,
                termination: Termination::DomainError,
            });
        };
        let g_norm = inf_norm(&grad);
        iterates.push(Iterate {
            point: w.clone(),
            value,
            grad_inf_norm: g_norm,
        });
        if g_norm < config.grad_tol {
            return Ok(OptTrajectory {
                iterates,
                termination: Termination::Converged,
            });
        }
        if k == config.max_iters {
            break;
        }
        for (wi, gi) in w.iter_mut().zip(&grad) {
            *wi -= config.step * gi;
        }
    }
    Ok(OptTrajectory {
        iterates,
        termination: Termination::MaxIters,
    })
}

/// Solve `H d = -g` approximately by conjugate gradients, touching H
/// only through `hvp_at`. Returns the search direction.
///
/// Non-positive curvature along a CG direction truncates the solve:
/// the current partial solution is used, or steepest descent if it
/// happens on the first iteration.
fn cg_direction<B: TapeBuilder + ?Sized>(
    f: &B,
    w: &[f64],
    grad: &[f64],
    config: &NewtonCgConfig,
) -> Result<Option<Vec<f64>>> {
    let n = w.len();
    let max_cg = config.max_cg_iters.unwrap_or(n).max(1);
    let g_norm = dot(grad, grad).sqrt();
    let threshold = config.cg_rel_tol * g_norm;

    let mut d = vec![0.0; n];
    let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for i in 0..max_cg {
        if rr.sqrt() <= threshold {
            break;
        }
        let hp = match hvp(f, &HvpRequest::new(w.to_vec(), p.clone())) {
            Ok(hp) => hp,
            Err(e) if e.is_domain() => return Ok(None),
            Err(e) => return Err(e),
        };
        let curvature = dot(&p, &hp);
        if curvature <= 0.0 {
            if i == 0 {
                d = grad.iter().map(|g| -g).collect();
            }
            return Ok(Some(d));
        }
        let alpha = rr / curvature;
        for j in 0..n {
            d[j] += alpha * p[j];
            r[j] -= alpha * hp[j];
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        for j in 0..n {
            p[j] = r[j] + beta * p[j];
        }
        rr = rr_next;
    }
    Ok(Some(d))
}

/// Minimize by Newton-CG: each outer step solves the Newton system
/// matrix-free and takes the full step `w <- w + d`.
pub fn newton_cg<B: TapeBuilder + ?Sized>(
    f: &B,
    w0: &[f64],
    config: &NewtonCgConfig,
) -> Result<OptTrajectory> {
    config.validate()?;
    let mut iterates = Vec::new();
    let mut w = w0.to_vec();
    for k in 0..=config.max_iters {
        let Some((value, grad)) = value_and_grad(f, &w)? else {
            return Ok(OptTrajectory {
                iterates,
                termination: Termination::DomainError,
            });
        };
        let g_norm = inf_norm(&grad);
        iterates.push(Iterate {
            point: w.clone(),
            value,
            grad_inf_norm: g_norm,
        });
        if g_norm < config.grad_tol {
            return Ok(OptTrajectory {
                iterates,
                termination: Termination::Converged,
            });
        }
        if k == config.max_iters {
            break;
        }
        let Some(direction) = cg_direction(f, &w, &grad, config)? else {
            return Ok(OptTrajectory {
                iterates,
                termination: Termination::DomainError,
            });
        };
        for (wi, di) in w.iter_mut().zip(&direction) {
            *wi += di;
        }
    }
    Ok(OptTrajectory {
        iterates,
        termination: Termination::MaxIters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn quadratic_converges_to_three() {
        let f = parse("(x - 3)^2").unwrap();
        let config = GdConfig {
            step: 0.1,
            max_iters: 200,
            grad_tol: 1e-7,
        };
        let traj = gradient_descent(&f, &[0.0], &config).unwrap();
        assert_eq!(traj.termination, Termination::Converged);
        assert!((traj.final_point()[0] - 3.0).abs() < 1e-6);
        assert!(traj.iterates.len() <= 201);
    }

    #[test]
    fn oversized_step_diverges_on_quadratic() {
        // for f = x^2 the map is w <- (1 - 2*eta) w; eta = 1.5 gives factor -2
        let f = parse("x^2").unwrap();
        let config = GdConfig {
            step: 1.5,
            max_iters: 30,
            grad_tol: 1e-12,
        };
        let traj = gradient_descent(&f, &[1.0], &config).unwrap();
        assert_eq!(traj.termination, Termination::MaxIters);
        let xs: Vec<f64> = traj.iterates.iter().map(|it| it.point[0].abs()).collect();
        for pair in xs.windows(2) {
            assert!(pair[1] > pair[0], "|w| must grow: {xs:?}");
        }
    }

    #[test]
    fn descent_is_monotone_for_small_steps_on_example() {
        let f = parse("ln(x1) + x1*x2 - sin(x2)").unwrap();
        let config = GdConfig {
            step: 1e-3,
            max_iters: 50,
            grad_tol: 1e-15,
        };
        let traj = gradient_descent(&f, &[2.0, 5.0], &config).unwrap();
        let values: Vec<f64> = traj.iterates.iter().map(|it| it.value).collect();
        for pair in values.windows(2) {
            assert!(pair[1] < pair[0], "f must decrease: {values:?}");
        }
    }

    #[test]
    fn domain_error_mid_descent_terminates_cleanly() {
        // minimizing ln(x) walks x to 0 and past it
        let f = parse("ln(x)").unwrap();
        let config = GdConfig {
            step: 0.5,
            max_iters: 100,
            grad_tol: 1e-12,
        };
        let traj = gradient_descent(&f, &[1.0], &config).unwrap();
        assert_eq!(traj.termination, Termination::DomainError);
        assert!(!traj.iterates.is_empty());
    }

    #[test]
    fn newton_solves_one_dim_quadratic_in_one_step() {
        let f = parse("(x - 3)^2").unwrap();
        let traj = newton_cg(&f, &[-17.0], &NewtonCgConfig::default()).unwrap();
        assert_eq!(traj.termination, Termination::Converged);
        // start + one Newton step
        assert!(traj.iterates.len() <= 2);
        assert!((traj.final_point()[0] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn newton_cg_handles_rosenbrock() {
        let f = parse("100 * (x2 - x1^2)^2 + (1 - x1)^2").unwrap();
        let config = NewtonCgConfig {
            grad_tol: 1e-6,
            ..NewtonCgConfig::default()
        };
        let traj = newton_cg(&f, &[-1.2, 1.0], &config).unwrap();
        assert_eq!(traj.termination, Termination::Converged);
        assert!(traj.iterates.len() <= 101);
        assert!((traj.final_point()[0] - 1.0).abs() < 1e-4);
        assert!((traj.final_point()[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let f = parse("x^2").unwrap();
        let bad = GdConfig {
            step: 0.0,
            ..GdConfig::default()
        };
        assert!(matches!(
            gradient_descent(&f, &[1.0], &bad),
            Err(Error::InvalidConfig(_))
        ));
        let bad = NewtonCgConfig {
            grad_tol: 0.0,
            ..NewtonCgConfig::default()
        };
        assert!(matches!(
            newton_cg(&f, &[1.0], &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn csv_export_shape() {
        let f = parse("(x - 3)^2").unwrap();
        let config = GdConfig {
            step: 0.1,
            max_iters: 5,
            grad_tol: 1e-1,
        };
        let traj = gradient_descent(&f, &[0.0], &config).unwrap();
        let csv = trajectory_csv(&traj, &["x".to_string()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "iter,f,grad_inf_norm,x");
        assert_eq!(lines.len(), traj.iterates.len() + 1);
        assert!(lines[1].starts_with("0,9,6,0"));
    }
}
