//! Shared helpers for the integration suites: a seeded random
//! expression generator, comparison tolerances, and small independent
//! oracles (dense linear solve, least-squares fit).

#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wengert::lang::{parse, ProgramAst};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// |a - b| measured against max(1, |a|, |b|): relative for large
/// values, absolute near zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        rel_err(a, b) <= tol,
        "{what}: {a} vs {b} differ by rel {}",
        rel_err(a, b)
    );
}

/// Generate a random expression source over `n_vars` variables.
///
/// Arguments of `ln`, `sqrt`, and division denominators are wrapped
/// in positive forms, so the expression is smooth on all of R^n; the
/// full operation set still appears.
pub fn random_expr_source(rng: &mut ChaCha8Rng, n_vars: usize, depth: usize) -> String {
    if depth == 0 {
        return if rng.random_bool(0.7) {
            format!("x{}", rng.random_range(1..=n_vars))
        } else {
            format!("{:.3}", rng.random_range(0.3..2.5))
        };
    }
    let a = random_expr_source(rng, n_vars, depth - 1);
    match rng.random_range(0..100) {
        0..=17 => {
            let b = random_expr_source(rng, n_vars, depth - 1);
            format!("({a} + {b})")
        }
        18..=29 => {
            let b = random_expr_source(rng, n_vars, depth - 1);
            format!("({a} - {b})")
        }
        30..=54 => {
            let b = random_expr_source(rng, n_vars, depth - 1);
            format!("({a} * {b})")
        }
        55..=62 => {
            let b = random_expr_source(rng, n_vars, depth - 1);
            format!("({a} / (({b})^2 + 0.9))")
        }
        63..=69 => {
            let e = [2.0, 3.0][rng.random_range(0..2)];
            format!("({a})^{e}")
        }
        70..=73 => {
            // fractional power on a positive base
            let e = [0.5, 1.5, -1.0][rng.random_range(0..3)];
            format!("(({a})^2 + 0.8)^{e}")
        }
        74..=81 => format!("sin({a})"),
        82..=87 => format!("cos({a})"),
        88..=90 => format!("tan(0.4 * ({a}))"),
        91..=93 => format!("exp(0.3 * ({a}))"),
        94..=96 => format!("ln(({a})^2 + 0.7)"),
        97..=98 => format!("sqrt(({a})^2 + 0.4)"),
        _ => format!("-({a})"),
    }
}

/// A generated test case: parsed program plus an evaluation point at
/// which values and derivatives are finite and moderately sized.
pub struct RandomCase {
    pub source: String,
    pub ast: ProgramAst,
    pub point: Vec<f64>,
}

/// Draw cases until `count` pass the sanity filter (all intermediate
/// values and gradient components finite and bounded).
pub fn random_cases(seed: u64, count: usize, max_vars: usize, depth: usize) -> Vec<RandomCase> {
    let mut rng = rng(seed);
    let mut cases = Vec::with_capacity(count);
    while cases.len() < count {
        let n_vars = rng.random_range(1..=max_vars);
        let source = random_expr_source(&mut rng, n_vars, depth);
        let Ok(ast) = parse(&source) else { continue };
        if ast.params.is_empty() {
            continue;
        }
        let point: Vec<f64> = (0..ast.params.len())
            .map(|_| rng.random_range(-1.5..1.5))
            .collect();
        let Ok(mut tape) = wengert::lang::trace::<f64>(&ast, &point) else {
            continue;
        };
        let Ok(outputs) = tape.forward_sweep(&point) else {
            continue;
        };
        if !outputs.iter().all(|v| v.is_finite() && v.abs() < 1e6) {
            continue;
        }
        if !tape
            .nodes()
            .iter()
            .all(|n| n.value.is_finite() && n.value.abs() < 1e6)
        {
            continue;
        }
        let Ok(grad) = wengert::gradient_of(&ast, &point) else {
            continue;
        };
        if !grad.iter().all(|g| g.is_finite() && g.abs() < 1e4) {
            continue;
        }
        // keep only points where the finite-difference oracle is
        // self-consistent across step sizes, i.e. where its truncation
        // error is small enough to compare against at 1e-5
        let fd = |step: f64| {
            wengert::fd_gradient(
                |x| wengert::eval_scalar(&ast, x),
                &point,
                &wengert::FdConfig::central(wengert::FdStep::Fixed(step)),
            )
        };
        let (Ok(coarse), Ok(fine)) = (fd(2e-5), fd(2e-6)) else {
            continue;
        };
        if coarse
            .iter()
            .zip(&fine)
            .any(|(a, b)| rel_err(*a, *b) > 2e-6)
        {
            continue;
        }
        cases.push(RandomCase { source, ast, point });
    }
    cases
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// Independent oracle for the optimizer tests.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        assert!(m[col][col].abs() > 1e-12, "singular system");
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// f(x) = sum_i sin(x_i) * x_i — a scalar chain function whose tape
/// grows linearly in n, used for operation-count measurements.
pub struct ChainFunction {
    pub n: usize,
}

impl wengert::TapeBuilder for ChainFunction {
    fn num_inputs(&self) -> usize {
        self.n
    }

    fn build<S: wengert::Scalar>(&self, _inputs: &[S]) -> wengert::Result<wengert::Tape<S>> {
        use wengert::ElemOp;
        let mut t = wengert::Tape::new();
        let xs: Vec<usize> = (0..self.n).map(|_| t.input().unwrap()).collect();
        let mut acc = None;
        for &x in &xs {
            let s = t.record(ElemOp::Sin, &[x])?;
            let term = t.record(ElemOp::Mul, &[s, x])?;
            acc = Some(match acc {
                None => term,
                Some(a) => t.record(ElemOp::Add, &[a, term])?,
            });
        }
        t.mark_output(acc.unwrap())?;
        Ok(t)
    }
}

/// f(w) = 1/2 w'Aw - b'w for a fixed matrix and vector.
pub struct QuadraticForm {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl QuadraticForm {
    /// Random symmetric positive-definite instance: A = M'M + I.
    pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let m: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    a[i][j] += m[k][i] * m[k][j];
                }
                if i == j {
                    a[i][j] += 1.0;
                }
            }
        }
        let b = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        QuadraticForm { a, b }
    }
}

impl wengert::TapeBuilder for QuadraticForm {
    fn num_inputs(&self) -> usize {
        self.b.len()
    }

    fn build<S: wengert::Scalar>(&self, _inputs: &[S]) -> wengert::Result<wengert::Tape<S>> {
        use wengert::ElemOp;
        let n = self.b.len();
        let mut t = wengert::Tape::new();
        let ws: Vec<usize> = (0..n).map(|_| t.input().unwrap()).collect();
        let mut acc: Option<usize> = None;
        for i in 0..n {
            for j in 0..n {
                let c = t.constant(0.5 * self.a[i][j]);
                let wi_wj = t.record(ElemOp::Mul, &[ws[i], ws[j]])?;
                let term = t.record(ElemOp::Mul, &[c, wi_wj])?;
                acc = Some(match acc {
                    None => term,
                    Some(a) => t.record(ElemOp::Add, &[a, term])?,
                });
            }
        }
        for i in 0..n {
            let c = t.constant(self.b[i]);
            let term = t.record(ElemOp::Mul, &[c, ws[i]])?;
            let a = acc.unwrap();
            acc = Some(t.record(ElemOp::Sub, &[a, term])?);
        }
        t.mark_output(acc.unwrap())?;
        Ok(t)
    }
}

/// Least-squares fit y = a + b*x; returns (a, b, r_squared).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    (intercept, slope, 1.0 - ss_res / ss_tot)
}
