//! Tokenizer for the expression language.

use super::ast::SourceSpan;
use super::parser::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Number(f64),
    Params,
    Return,
    If,
    Else,
    Repeat,
    End,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Assign,
    Colon,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Number(v) => format!("number {v}"),
            TokenKind::Params => "`params`".into(),
            TokenKind::Return => "`return`".into(),
            TokenKind::If => "`if`".into(),
            TokenKind::Else => "`else`".into(),
            TokenKind::Repeat => "`repeat`".into(),
            TokenKind::End => "`end`".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Assign => "`=`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Lt => "`<`".into(),
            TokenKind::Le => "`<=`".into(),
            TokenKind::Gt => "`>`".into(),
            TokenKind::Ge => "`>=`".into(),
            TokenKind::EqEq => "`==`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

fn keyword(word: &str) -> Option<TokenKind> {
    match word {
        "params" => Some(TokenKind::Params),
        "return" => Some(TokenKind::Return),
        "if" => Some(TokenKind::If),
        "else" => Some(TokenKind::Else),
        "repeat" => Some(TokenKind::Repeat),
        "end" => Some(TokenKind::End),
        _ => None,
    }
}

/// Tokenize the whole source. The returned list always ends with an
/// `Eof` token whose span sits at the end of the input.
pub fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' => {
                tokens.push(Token {
                    kind: TokenKind::Plus,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b'-' => {
                tokens.push(Token {
                    kind: TokenKind::Minus,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b'*' => {
                tokens.push(Token {
                    kind: TokenKind::Star,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b'/' => {
                tokens.push(Token {
                    kind: TokenKind::Slash,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b'^' => {
                tokens.push(Token {
                    kind: TokenKind::Caret,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b'(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b',' => {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b':' => {
                tokens.push(Token {
                    kind: TokenKind::Colon,
                    span: SourceSpan::new(start, i + 1),
                });
                i += 1;
            }
            b'=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token {
                        kind: TokenKind::EqEq,
                        span: SourceSpan::new(start, i + 2),
                    });
                    i += 2;
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Assign,
                        span: SourceSpan::new(start, i + 1),
                    });
                    i += 1;
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token {
                        kind: TokenKind::Le,
                        span: SourceSpan::new(start, i + 2),
                    });
                    i += 2;
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Lt,
                        span: SourceSpan::new(start, i + 1),
                    });
                    i += 1;
                }
            }
            b'>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token {
                        kind: TokenKind::Ge,
                        span: SourceSpan::new(start, i + 2),
                    });
                    i += 2;
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Gt,
                        span: SourceSpan::new(start, i + 1),
                    });
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    if i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_digit() {
                        return Err(ParseError {
                            kind: ParseErrorKind::Lex("expected digits after decimal point".into()),
                            span: SourceSpan::new(i, i + 1),
                        });
                    }
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                    // otherwise the `e` is a following identifier, not
                    // part of the number
                }
                let text = &source[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    kind: ParseErrorKind::Lex(format!("malformed number `{text}`")),
                    span: SourceSpan::new(start, i),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        kind: ParseErrorKind::Lex(format!("number `{text}` overflows f64")),
                        span: SourceSpan::new(start, i),
                    });
                }
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    span: SourceSpan::new(start, i),
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &source[start..i];
                let kind = keyword(word).unwrap_or_else(|| TokenKind::Ident(word.to_string()));
                tokens.push(Token {
                    kind,
                    span: SourceSpan::new(start, i),
                });
            }
            _ => {
                // report the whole UTF-8 scalar, not a lone byte
                let ch_len = source[start..].chars().next().map_or(1, |c| c.len_utf8());
                return Err(ParseError {
                    kind: ParseErrorKind::Lex(format!(
                        "unexpected character `{}`",
                        &source[start..start + ch_len]
                    )),
                    span: SourceSpan::new(start, start + ch_len),
                });
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: SourceSpan::new(source.len(), source.len()),
    });
    Ok(tokens)
}
