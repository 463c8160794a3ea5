//! Acceptance suite: one test per criterion, each printing a PASS
//! line when its assertions hold. Run with `cargo test --test
//! acceptance -- --nocapture` to see the lines.

#![allow(clippy::needless_range_loop)]
mod common;

use common::{
    assert_close, linear_fit, random_cases, rel_err, rng, solve_dense, ChainFunction, QuadraticForm,
};
use rand::Rng;
use std::collections::HashMap;
use wengert::lang::{parse, trace};
use wengert::{
    adjoint_listing, dense_hessian, fd_derivative, fd_gradient, forward_directional, gradient,
    gradient_of, hvp, jacobian_forward, newton_cg, tangent_listing, ElemOp, FdConfig, FdStep,
    GdConfig, HvpRequest, NewtonCgConfig, Tape, TapeBuilder, Termination,
};

/// The canonical 7-node recording of f(x1,x2) = ln(x1) + x1*x2 -
/// sin(x2): inputs, then ln, mul, sin, add, sub.
fn canonical_tape() -> Tape {
    let mut t = Tape::new();
    let x1 = t.input().unwrap();
    let x2 = t.input().unwrap();
    let v1 = t.record(ElemOp::Ln, &[x1]).unwrap();
    let v2 = t.record(ElemOp::Mul, &[x1, x2]).unwrap();
    let v3 = t.record(ElemOp::Sin, &[x2]).unwrap();
    let v4 = t.record(ElemOp::Add, &[v1, v2]).unwrap();
    let v5 = t.record(ElemOp::Sub, &[v4, v3]).unwrap();
    t.mark_output(v5).unwrap();
    t
}

fn names() -> Vec<String> {
    vec!["x1".into(), "x2".into()]
}

/// Pull the numeric value off each listing row (text after the last '=').
fn listing_values(listing: &str) -> Vec<f64> {
    listing
        .lines()
        .skip(1)
        .map(|line| {
            line.rsplit('=')
                .next()
                .unwrap()
                .trim()
                .parse::<f64>()
                .unwrap()
        })
        .collect()
}

#[test]
fn criterion_1_forward_trace_reproduction() {
    let mut tape = canonical_tape();
    let (y, dy) = forward_directional(&mut tape, &[2.0, 5.0], &[1.0, 0.0]).unwrap();
    assert!((y[0] - 11.6521).abs() < 1e-4, "primal {} vs 11.6521", y[0]);
    assert!((dy[0] - 5.5).abs() < 1e-12, "tangent is exact: {}", dy[0]);

    // every intermediate tangent matches the derivative-trace column
    let listing = tangent_listing(&tape, &[1.0, 0.0], &names(), 4).unwrap();
    let expected = [1.0, 0.0, 0.5, 5.0, 0.0, 5.5, 5.5, 5.5];
    let got = listing_values(&listing);
    assert_eq!(got.len(), expected.len());
    for (g, e) in got.iter().zip(expected) {
        assert!((g - e).abs() < 1e-4, "trace row {g} vs {e}\n{listing}");
    }
    println!("[PASS] criterion 1: forward trace at (2,5) gives y=11.6521, dy/dx1=5.5, all intermediates match");
}

#[test]
fn criterion_2_reverse_trace_reproduction() {
    let mut tape = canonical_tape();
    let g = gradient(&mut tape, &[2.0, 5.0]).unwrap();
    assert!((g[0] - 5.5).abs() < 1e-4);
    assert!((g[1] - 1.7163).abs() < 1e-4);

    let listing = adjoint_listing(&tape, 0, &names(), 4).unwrap();
    // seed, then the eight edge contributions in sweep order, then
    // the two gradient rows
    let expected = [
        1.0, 1.0, -1.0, 1.0, 1.0, -0.2837, 5.0, 1.7163, 5.5, 5.5, 1.7163,
    ];
    let got = listing_values(&listing);
    assert_eq!(got.len(), expected.len());
    for (g, e) in got.iter().zip(expected) {
        assert!((g - e).abs() < 1e-4, "adjoint row {g} vs {e}\n{listing}");
    }
    // the fan-out accumulation rows are printed incrementally
    assert!(listing.contains("bv0  = bv3 * cos(v0)"));
    assert!(listing.contains("bv0  = bv0 + bv2 * v-1"));
    println!("[PASS] criterion 2: one reverse sweep gives (5.5, 1.7163); adjoint trace intermediates match");
}

#[test]
fn criterion_3_cross_mode_exactness_on_random_corpus() {
    let cases = random_cases(20260309, 120, 3, 6);
    assert!(cases.len() >= 100);
    let mut ops_seen = std::collections::HashSet::new();
    for case in &cases {
        let structure: Tape = trace(&case.ast, &case.point).unwrap();
        for node in structure.nodes() {
            ops_seen.insert(node.op.name());
        }
        let mut tape: Tape = trace(&case.ast, &case.point).unwrap();
        let forward = jacobian_forward(&mut tape, &case.point).unwrap();
        let reverse = gradient(&mut tape, &case.point).unwrap();
        for (f, r) in forward[0].iter().zip(&reverse) {
            assert!(
                rel_err(*f, *r) <= 1e-10,
                "forward {f} vs reverse {r} for {}",
                case.source
            );
        }
        let fd = fd_gradient(
            |x| wengert::eval_scalar(&case.ast, x),
            &case.point,
            &FdConfig::default(),
        )
        .unwrap();
        for (r, f) in reverse.iter().zip(&fd) {
            assert!(
                rel_err(*r, *f) <= 1e-5,
                "reverse {r} vs fd {f} for {} at {:?}",
                case.source,
                case.point
            );
        }
    }
    for op in [
        "Add", "Sub", "Mul", "Div", "Neg", "Pow", "Ln", "Exp", "Sin", "Cos", "Tan", "Sqrt",
    ] {
        assert!(ops_seen.contains(op), "corpus never exercised {op}");
    }
    println!(
        "[PASS] criterion 3: {} random expressions over the full op set agree forward/reverse (1e-10) and vs FD (1e-5)",
        cases.len()
    );
}

#[test]
fn criterion_4_complexity_asymmetry() {
    let sizes = [8usize, 64, 512];
    let mut reverse_ratios = Vec::new();
    let mut forward_ratios = Vec::new();
    for &n in &sizes {
        let f = ChainFunction { n };
        let point: Vec<f64> = (0..n).map(|i| 0.3 + 0.01 * i as f64).collect();

        // one gradient: forward sweep + one reverse sweep
        let mut tape: Tape = f.build(&point).unwrap();
        tape.forward_sweep(&point).unwrap();
        let primal = tape.counter().snapshot().primal_ops;
        wengert::reverse_sweep(&tape, 0, 1.0).unwrap();
        let adjoint = tape.counter().snapshot().adjoint_ops;
        reverse_ratios.push(adjoint as f64 / primal as f64);

        // full gradient by forward mode: n tangent sweeps
        tape.counter().reset();
        tape.forward_sweep(&point).unwrap();
        let primal = tape.counter().snapshot().primal_ops;
        for i in 0..n {
            let mut seed = vec![0.0; n];
            seed[i] = 1.0;
            tape.tangent_sweep(&seed).unwrap();
        }
        let tangent = tape.counter().snapshot().tangent_ops;
        forward_ratios.push(tangent as f64 / primal as f64);
    }

    for r in &reverse_ratios {
        assert!(*r <= 4.0, "reverse ratio {r} exceeds 4");
    }
    let max = reverse_ratios.iter().fold(f64::MIN, |a, &b| a.max(b));
    let min = reverse_ratios.iter().fold(f64::MAX, |a, &b| a.min(b));
    assert!(
        (max - min) / min < 0.10,
        "reverse ratio varies {min}..{max} (>= 10%)"
    );

    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let (_, slope, r2) = linear_fit(&xs, &forward_ratios);
    assert!(slope > 0.0);
    assert!(r2 > 0.99, "forward cost ratio not linear in n: R^2 = {r2}");
    println!(
        "[PASS] criterion 4: reverse adjoint/primal ratio {:.3}..{:.3} (<= 4, < 10% spread); forward ratio linear in n (R^2 = {:.6})",
        min, max, r2
    );
}

#[test]
fn criterion_5_hvp_correctness() {
    let mut r = rng(77002);
    let mut checked = 0;
    for &n in &[2usize, 5, 9, 16] {
        let cases = random_cases(9000 + n as u64, 4, n, 4);
        for case in cases.iter().filter(|c| c.ast.params.len() >= 2) {
            let w = &case.point;
            let h = dense_hessian(&case.ast, w).unwrap();
            let dim = w.len();

            // symmetry
            for i in 0..dim {
                for j in 0..dim {
                    assert!(
                        (h[i][j] - h[j][i]).abs() <= 1e-9 * h[i][j].abs().max(1.0),
                        "H not symmetric for {}: {} vs {}",
                        case.source,
                        h[i][j],
                        h[j][i]
                    );
                }
            }

            // hvp against assembled H*v for a random direction
            let v: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
            let hv = hvp(&case.ast, &HvpRequest::new(w.clone(), v.clone())).unwrap();
            for i in 0..dim {
                let dense: f64 = (0..dim).map(|j| h[i][j] * v[j]).sum();
                assert!(
                    rel_err(hv[i], dense) <= 1e-9,
                    "hvp {} vs dense {} for {}",
                    hv[i],
                    dense,
                    case.source
                );
            }

            // hvp against central differences of the reverse gradient
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let eps = 1e-5 * norm.max(1.0);
            let plus: Vec<f64> = w.iter().zip(&v).map(|(x, d)| x + eps * d).collect();
            let minus: Vec<f64> = w.iter().zip(&v).map(|(x, d)| x - eps * d).collect();
            let g_plus = gradient_of(&case.ast, &plus).unwrap();
            let g_minus = gradient_of(&case.ast, &minus).unwrap();
            for i in 0..dim {
                let fd = (g_plus[i] - g_minus[i]) / (2.0 * eps);
                assert!(
                    rel_err(hv[i], fd) <= 1e-4,
                    "hvp {} vs grad-FD {} for {}",
                    hv[i],
                    fd,
                    case.source
                );
            }
            checked += 1;
        }
    }
    assert!(checked >= 8);
    println!("[PASS] criterion 5: hvp matches dense Hessian (1e-9) and FD of gradient (1e-4) on {checked} functions; Hessians symmetric");
}

#[test]
fn criterion_6_fd_error_tradeoff() {
    let truth = 1.0f64.cos();
    let err = |h: f64| {
        let d = fd_derivative(|x| Ok(x.sin()), 1.0, &FdConfig::central(FdStep::Fixed(h))).unwrap();
        (d - truth).abs()
    };
    let coarse = err(1e-1);
    let sweet = err(1e-8);
    let tiny = err(1e-15);
    assert!(
        coarse >= 10.0 * sweet,
        "truncation side: {coarse} vs {sweet}"
    );
    assert!(tiny >= 10.0 * sweet, "round-off side: {tiny} vs {sweet}");
    println!(
        "[PASS] criterion 6: central-difference error V-curve for sin at 1: e(1e-1)={coarse:.2e}, e(1e-8)={sweet:.2e}, e(1e-15)={tiny:.2e}"
    );
}

#[test]
fn criterion_7_expression_swell() {
    let chain_source = |k: usize| {
        (1..=k)
            .map(|i| format!("sin({i}*x)"))
            .collect::<Vec<_>>()
            .join(" * ")
    };
    let mut sym_per_k = Vec::new();
    let mut tape_sizes = Vec::new();
    for k in 2..=10usize {
        let ast = parse(&chain_source(k)).unwrap();
        let sym = ast.returns[0].to_symbolic().diff("x");
        sym_per_k.push(sym.size() as f64 / k as f64);
        let tape: Tape = trace(&ast, &[0.7]).unwrap();
        tape_sizes.push(tape.len() as i64);
    }
    // superlinear symbolic growth: size/k strictly increasing
    for w in sym_per_k.windows(2) {
        assert!(w[1] > w[0], "symbolic size/k not increasing: {sym_per_k:?}");
    }
    // exactly affine tape growth: constant first differences
    let diffs: Vec<i64> = tape_sizes.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(
        diffs.iter().all(|&d| d == diffs[0]),
        "tape growth not affine: {tape_sizes:?}"
    );
    println!(
        "[PASS] criterion 7: symbolic derivative size/k grows ({:.1} -> {:.1}); tape size exactly affine (+{} per factor)",
        sym_per_k[0],
        sym_per_k.last().unwrap(),
        diffs[0]
    );
}

#[test]
fn criterion_8_control_flow_tracing() {
    let src = "params x\nif x < 0:\n  y = -x\nelse:\n  y = x\nend\nreturn y";
    let ast = parse(src).unwrap();

    let mut pos: Tape = trace(&ast, &[3.0]).unwrap();
    let mut neg: Tape = trace(&ast, &[-3.0]).unwrap();
    assert_eq!(gradient(&mut pos, &[3.0]).unwrap(), vec![1.0]);
    assert_eq!(gradient(&mut neg, &[-3.0]).unwrap(), vec![-1.0]);
    // structurally different tapes: the negative branch records a Neg
    assert_ne!(pos.len(), neg.len());
    assert!(neg.nodes().iter().any(|n| n.op == ElemOp::Neg));
    assert!(!pos.nodes().iter().any(|n| n.op == ElemOp::Neg));

    // repeat-loop tapes are exactly affine in the loop count
    let counts = [1usize, 2, 5, 9, 17];
    let sizes: Vec<i64> = counts
        .iter()
        .map(|k| {
            let src = format!("params x\ns = 1\nrepeat {k}:\n  s = s * x\nend\nreturn s");
            let tape: Tape = trace(&parse(&src).unwrap(), &[2.0]).unwrap();
            tape.len() as i64
        })
        .collect();
    for (i, &k) in counts.iter().enumerate() {
        assert_eq!(sizes[i], 2 + k as i64);
    }
    println!("[PASS] criterion 8: branch program has gradient +1 at 3, -1 at -3 with different tapes; loop tapes affine in count");
}

#[test]
fn criterion_9_optimizer_sanity() {
    // gradient descent on (x-3)^2
    let f = parse("(x - 3)^2").unwrap();
    let traj = gradient_descent_helper(&f);
    assert_eq!(traj.termination, Termination::Converged);
    assert!(traj.iterates.len() <= 201);
    assert!((traj.final_point()[0] - 3.0).abs() < 1e-6);

    // Newton-CG on a random 4-D SPD quadratic vs a direct solve
    let mut r = rng(41);
    let q = QuadraticForm::random_spd(&mut r, 4);
    let expected = solve_dense(&q.a, &q.b);
    let config = NewtonCgConfig {
        max_iters: 5,
        grad_tol: 1e-10,
        ..NewtonCgConfig::default()
    };
    let traj = newton_cg(&q, &[0.0; 4], &config).unwrap();
    assert_eq!(traj.termination, Termination::Converged);
    let outer_steps = traj.iterates.len() - 1;
    assert!(outer_steps <= 5, "took {outer_steps} outer steps");
    for (w, e) in traj.final_point().iter().zip(&expected) {
        assert_close(*w, *e, 1e-8, "newton-cg vs direct solve");
    }
    println!(
        "[PASS] criterion 9: gradient descent reaches 3 +/- 1e-6; Newton-CG matches the direct solve in {outer_steps} outer steps"
    );
}

fn gradient_descent_helper(f: &wengert::lang::ProgramAst) -> wengert::OptTrajectory {
    wengert::gradient_descent(
        f,
        &[0.0],
        &GdConfig {
            step: 0.1,
            max_iters: 200,
            grad_tol: 1e-7,
        },
    )
    .unwrap()
}

#[test]
fn gradient_cross_check_against_symbolic_route() {
    // same value through a third, independent route: the symbolic
    // differentiator evaluated at the point
    let ast = parse("ln(x1) + x1*x2 - sin(x2)").unwrap();
    let sym = ast.returns[0].to_symbolic();
    let mut bindings = HashMap::new();
    bindings.insert("x1".to_string(), 2.0);
    bindings.insert("x2".to_string(), 5.0);
    let d1 = sym.diff("x1").eval(&bindings).unwrap();
    let d2 = sym.diff("x2").eval(&bindings).unwrap();
    let g = gradient_of(&ast, &[2.0, 5.0]).unwrap();
    assert!((d1 - g[0]).abs() < 1e-12);
    assert!((d2 - g[1]).abs() < 1e-12);
    assert!((d1 - 5.5).abs() < 1e-12);
}
