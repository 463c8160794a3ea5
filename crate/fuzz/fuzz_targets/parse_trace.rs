#![no_main]

use libfuzzer_sys::fuzz_target;
use wengert::lang::{ProgramAst, Stmt};

/// Upper bound on the statements a program would execute, with loops
/// unrolled. Keeps the fuzzer away from deliberate `repeat 4000000000`
/// memory bombs; anything under the cap is traced for real.
fn unrolled_weight(stmts: &[Stmt]) -> u64 {
    stmts
        .iter()
        .map(|s| match s {
            Stmt::Assign { .. } => 1,
            Stmt::If {
                then_body,
                else_body,
                ..
            } => 1 + unrolled_weight(then_body).max(unrolled_weight(else_body)),
            Stmt::Repeat { count, body, .. } => {
                1_u64.saturating_add((*count as u64).saturating_mul(unrolled_weight(body)))
            }
        })
        .fold(0_u64, u64::saturating_add)
}

fn bounded(ast: &ProgramAst) -> bool {
    ast.params.len() <= 64 && ast.returns.len() <= 8 && unrolled_weight(&ast.statements) <= 10_000
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ast) = wengert::lang::parse(text) else {
        return;
    };
    if !bounded(&ast) {
        return;
    }
    let inputs = vec![1.25_f64; ast.params.len()];
    // Tracing and sweeping must either succeed or fail with a clean
    // error — domain violations included — but never panic.
    if let Ok(mut tape) = wengert::lang::trace(&ast, &inputs) {
        if tape.forward_sweep(&inputs).is_ok() && tape.num_outputs() == 1 {
            let _ = wengert::reverse_sweep(&tape, 0, 1.0);
        }
    }
});
