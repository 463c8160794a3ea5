#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ast) = wengert::lang::parse(text) else {
        return;
    };
    // Anything that parses must pretty-print to a form that reparses
    // to a structurally identical program.
    let printed = ast.to_string();
    let reparsed = wengert::lang::parse(&printed)
        .unwrap_or_else(|e| panic!("printed form failed to reparse: {e}\n{printed}"));
    assert!(
        ast.structural_eq(&reparsed),
        "round trip changed structure:\n{printed}"
    );
});
