#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ast) = wengert::lang::parse(text) else {
        return;
    };
    if !ast.statements.is_empty() || ast.operator_count() > 200 {
        return;
    }
    let Some(var) = ast.params.first() else {
        return;
    };
    // Differentiation is purely structural and must not panic; its
    // printed output must stay inside the expression grammar.
    let derivative = ast.returns[0].to_symbolic().diff(var);
    let printed = derivative.to_string();
    wengert::SymExpr::parse(&printed)
        .unwrap_or_else(|e| panic!("derivative failed to reparse: {e}\n{printed}"));
});
