//! Parser for `name=value` binding lists (`x1=2,x2=5`), the format
//! the CLI uses for `--at`, `--dir`, and `--w0`.

use super::ast::SourceSpan;
use super::parser::{ParseError, ParseErrorKind};

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse a comma-separated list of `name=value` pairs. Order is
/// preserved; duplicate names are rejected. An empty string yields an
/// empty list.
pub fn parse_bindings(s: &str) -> Result<Vec<(String, f64)>, ParseError> {
    let mut out: Vec<(String, f64)> = Vec::new();
    if s.trim().is_empty() {
        return Ok(out);
    }
    let mut offset = 0;
    for piece in s.split(',') {
        let span = SourceSpan::new(offset, offset + piece.len());
        offset += piece.len() + 1;
        let trimmed = piece.trim();
        let Some((name, value)) = trimmed.split_once('=') else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("expected name=value, found `{trimmed}`")),
                span,
            });
        };
        let name = name.trim();
        let value = value.trim();
        if !is_ident(name) {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("`{name}` is not a valid variable name")),
                span,
            });
        }
        let parsed: f64 = value.parse().map_err(|_| ParseError {
            kind: ParseErrorKind::Syntax(format!("`{value}` is not a number")),
            span,
        })?;
        if !parsed.is_finite() {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("`{value}` is not finite")),
                span,
            });
        }
        if out.iter().any(|(n, _)| n == name) {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("duplicate binding for `{name}`")),
                span,
            });
        }
        out.push((name.to_string(), parsed));
    }
    Ok(out)
}
