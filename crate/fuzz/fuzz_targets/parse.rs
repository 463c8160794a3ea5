#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The parser must be total: any input yields an AST or a spanned
    // error, never a panic.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = wengert::lang::parse(text);
    }
});
