//! Minimal Solidity lexer. Produces a flat token stream with byte spans;
//! enough for declaration extraction and token-level code embeddings, not
//! for expression parsing.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    Str,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based line of the token's first byte.
    pub line: usize,
    /// Byte span in the lexed source.
    pub start: usize,
    pub end: usize,
}

/// Structural keywords of the supported subset. Built-in value types and
/// builtin functions (`require`, `msg`, ...) lex as identifiers.
const KEYWORDS: &[&str] = &[
    "pragma", "import", "contract", "interface", "library", "function", "modifier", "event",
    "struct", "enum", "mapping", "using", "constructor", "fallback", "receive", "returns",
    "return", "public", "private", "internal", "external", "pure", "view", "payable", "constant",
    "immutable", "virtual", "override", "memory", "storage", "calldata", "indexed", "anonymous",
    "is", "if", "else", "for", "while", "do", "break", "continue", "throw", "emit", "new",
    "delete", "assembly",
];

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b == b'$'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$'
}

/// Lexes source text (ideally comment-stripped; comment punctuation would
/// otherwise come through as `Punct` tokens). Never fails: bytes that fit
/// no rule are skipped.
pub fn lex(src: &str) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\n' {
            line += 1;
            i += 1;
            continue;
        }
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if is_ident_start(b) {
            i += 1;
            while i < bytes.len() && is_ident_continue(bytes[i]) {
                i += 1;
            }
            let text = &src[start..i];
            let kind = if KEYWORDS.contains(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token {
                kind,
                text: text.to_owned(),
                line,
                start,
                end: i,
            });
        } else if b.is_ascii_digit() {
            i += 1;
            if b == b'0' && i < bytes.len() && (bytes[i] | 0x20) == b'x' {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
                    i += 1;
                }
            } else {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                        i += 1;
                    }
                }
                if i < bytes.len()
                    && (bytes[i] | 0x20) == b'e'
                    && i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_digit()
                        || ((bytes[i + 1] == b'+' || bytes[i + 1] == b'-')
                            && i + 2 < bytes.len()
                            && bytes[i + 2].is_ascii_digit()))
                {
                    i += 1;
                    if bytes[i] == b'+' || bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                text: src[start..i].to_owned(),
                line,
                start,
                end: i,
            });
        } else if b == b'"' || b == b'\'' {
            let quote = b;
            i += 1;
            while i < bytes.len() {
                if bytes[i] == b'\\' && i + 1 < bytes.len() {
                    i += 2;
                    continue;
                }
                if bytes[i] == quote {
                    i += 1;
                    break;
                }
                if bytes[i] == b'\n' {
                    // unterminated literal: stop at end of line
                    break;
                }
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Str,
                text: src[start..i].to_owned(),
                line,
                start,
                end: i,
            });
        } else if b.is_ascii_punctuation() {
            i += 1;
            tokens.push(Token {
                kind: TokenKind::Punct,
                text: (b as char).to_string(),
                line,
                start,
                end: i,
            });
        } else {
            // non-ASCII byte outside a string; skip the whole char
            let ch_len = src[i..].chars().next().map_or(1, char::len_utf8);
            i += ch_len;
        }
    }
    tokens
}
