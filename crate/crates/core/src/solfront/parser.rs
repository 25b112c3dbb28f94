//! Declaration extractor: walks the token stream and pulls contract units
//! with functions, events, modifiers and unit-scope state variables.

use crate::diag::Diagnostic;

use super::lexer::{lex, Token, TokenKind};
use super::{
    canonical_type, strip_comments, ContractUnit, EventDecl, FunctionDecl, Mutability, Param,
    StateVarDecl, UnitKind, Visibility,
};

pub struct Extraction {
    pub units: Vec<ContractUnit>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Extracts every `contract`/`interface`/`library` unit from raw source.
/// Comments are stripped internally; declarations the subset grammar cannot
/// parse are skipped with a diagnostic.
pub fn extract_units(source: &str) -> Extraction {
    let (clean, mut diagnostics) = strip_comments(source);
    let tokens = lex(&clean);
    let mut units = Vec::new();
    let mut cursor = Cursor {
        src: &clean,
        tokens: &tokens,
        pos: 0,
        diagnostics: &mut diagnostics,
    };
    while let Some(tok) = cursor.peek() {
        let kind = match tok.text.as_str() {
            "contract" => Some(UnitKind::Contract),
            "interface" => Some(UnitKind::Interface),
            "library" => Some(UnitKind::Library),
            _ => None,
        };
        match kind {
            Some(kind) => {
                if let Some(unit) = cursor.parse_unit(kind) {
                    units.push(unit);
                }
            }
            None => cursor.advance(),
        }
    }
    Extraction { units, diagnostics }
}

struct Cursor<'a> {
    src: &'a str,
    tokens: &'a [Token],
    pos: usize,
    diagnostics: &'a mut Vec<Diagnostic>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_text(&self) -> &str {
        self.tokens.get(self.pos).map_or("", |t| t.text.as_str())
    }

    fn advance(&mut self) {
        self.pos += 1;
    }

    fn take(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn at_punct(&self, p: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == TokenKind::Punct && t.text == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn diag(&mut self, line: usize, msg: impl Into<String>) {
        self.diagnostics.push(Diagnostic::new(None, line, msg));
    }

    /// Skips a balanced `(`/`[`/`{` group; assumes the cursor sits on the
    /// opener. Returns false when the group never closes.
    fn skip_balanced(&mut self) -> bool {
        let (open, close) = match self.peek_text() {
            "(" => ("(", ")"),
            "[" => ("[", "]"),
            "{" => ("{", "}"),
            _ => return true,
        };
        let mut depth = 0usize;
        while let Some(tok) = self.take() {
            if tok.kind == TokenKind::Punct {
                if tok.text == open {
                    depth += 1;
                } else if tok.text == close {
                    depth -= 1;
                    if depth == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Skips forward past the next `;` at the current nesting level.
    fn skip_statement(&mut self) {
        while let Some(tok) = self.peek() {
            match (tok.kind, tok.text.as_str()) {
                (TokenKind::Punct, ";") => {
                    self.advance();
                    return;
                }
                (TokenKind::Punct, "(") | (TokenKind::Punct, "[") | (TokenKind::Punct, "{") => {
                    self.skip_balanced();
                }
                (TokenKind::Punct, "}") => return,
                _ => self.advance(),
            }
        }
    }

    fn parse_unit(&mut self, kind: UnitKind) -> Option<ContractUnit> {
        let kw = self.take().expect("caller checked");
        let kw_line = kw.line;
        let name = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let n = t.text.clone();
                self.advance();
                n
            }
            _ => {
                self.diag(kw_line, "unit declaration without a name; skipped");
                return None;
            }
        };
        let mut bases = Vec::new();
        if self.peek_text() == "is" {
            self.advance();
            loop {
                match self.peek() {
                    Some(t) if t.kind == TokenKind::Identifier => {
                        let mut base = t.text.clone();
                        self.advance();
                        while self.at_punct(".") {
                            self.advance();
                            if let Some(part) = self.peek() {
                                if part.kind == TokenKind::Identifier {
                                    base.push('.');
                                    base.push_str(&part.text);
                                    self.advance();
                                    continue;
                                }
                            }
                            break;
                        }
                        if self.at_punct("(") {
                            self.skip_balanced();
                        }
                        bases.push(base);
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                    _ => break,
                }
            }
        }
        if !self.eat_punct("{") {
            self.diag(kw_line, format!("unit `{name}` has no body; skipped"));
            return None;
        }

        let mut unit = ContractUnit {
            name,
            kind,
            bases,
            functions: Vec::new(),
            events: Vec::new(),
            state_vars: Vec::new(),
            modifier_decls: Vec::new(),
        };

        loop {
            let Some(tok) = self.peek() else {
                self.diag(
                    kw_line,
                    format!("unit `{}` has unbalanced braces; truncated", unit.name),
                );
                break;
            };
            match (tok.kind, tok.text.as_str()) {
                (TokenKind::Punct, "}") => {
                    self.advance();
                    break;
                }
                (TokenKind::Punct, ";") => self.advance(),
                (_, "function") => {
                    if let Some(f) = self.parse_function(None) {
                        unit.functions.push(f);
                    }
                }
                (_, "constructor") | (_, "fallback") | (_, "receive")
                    if self
                        .tokens
                        .get(self.pos + 1)
                        .is_some_and(|t| t.text == "(") =>
                {
                    let pseudo = tok.text.clone();
                    if let Some(f) = self.parse_function(Some(pseudo)) {
                        unit.functions.push(f);
                    }
                }
                (_, "event") => {
                    if let Some(e) = self.parse_event() {
                        unit.events.push(e);
                    }
                }
                (_, "modifier") => {
                    if let Some(name) = self.parse_modifier() {
                        unit.modifier_decls.push(name);
                    }
                }
                (_, "struct") | (_, "enum") => {
                    self.advance();
                    if self
                        .peek()
                        .is_some_and(|t| t.kind == TokenKind::Identifier)
                    {
                        self.advance();
                    }
                    if self.at_punct("{") {
                        self.skip_balanced();
                    }
                }
                (_, "using") | (_, "pragma") | (_, "import") => self.skip_statement(),
                _ => {
                    let line = tok.line;
                    match self.parse_state_var() {
                        Some(v) => unit.state_vars.push(v),
                        None => {
                            self.diag(line, "unparseable declaration; skipped");
                            self.skip_statement();
                        }
                    }
                }
            }
        }
        Some(unit)
    }

    /// Parses one type name into canonical text. Returns None when the
    /// cursor is not at a type.
    fn parse_type(&mut self) -> Option<String> {
        let tok = self.peek()?;
        let mut base = match (tok.kind, tok.text.as_str()) {
            (_, "mapping") => {
                self.advance();
                if !self.at_punct("(") {
                    return None;
                }
                // canonical text form "mapping(K=>V)"
                let mut depth = 0usize;
                let mut inner = String::from("mapping");
                while let Some(t) = self.take() {
                    inner.push_str(&t.text);
                    if t.kind == TokenKind::Punct {
                        if t.text == "(" {
                            depth += 1;
                        } else if t.text == ")" {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                    }
                }
                inner
            }
            (TokenKind::Identifier, _) | (TokenKind::Keyword, "function") => {
                let mut name = tok.text.clone();
                self.advance();
                if name == "function" {
                    // function-type parameter: keep the bare word, skip its shape
                    if self.at_punct("(") {
                        self.skip_balanced();
                    }
                    while matches!(
                        self.peek_text(),
                        "internal" | "external" | "pure" | "view" | "payable"
                    ) {
                        self.advance();
                    }
                    if self.peek_text() == "returns" {
                        self.advance();
                        if self.at_punct("(") {
                            self.skip_balanced();
                        }
                    }
                } else {
                    while self.at_punct(".") {
                        match self.tokens.get(self.pos + 1) {
                            Some(t) if t.kind == TokenKind::Identifier => {
                                name.push('.');
                                name.push_str(&t.text);
                                self.pos += 2;
                            }
                            _ => break,
                        }
                    }
                    if name == "address" && self.peek_text() == "payable" {
                        self.advance();
                        name.push_str(" payable");
                    }
                }
                name
            }
            _ => return None,
        };
        while self.at_punct("[") {
            let start = self.peek().unwrap().start;
            if !self.skip_balanced() {
                return None;
            }
            let end = self.tokens[self.pos - 1].end;
            let suffix: String = self.src[start..end]
                .chars()
                .filter(|c| !c.is_whitespace())
                .collect();
            base.push_str(&suffix);
        }
        Some(canonical_type(&base))
    }

    /// Parses `( [type [indexed|location] [name]],* )`.
    fn parse_params(&mut self, allow_indexed: bool) -> Option<Vec<Param>> {
        if !self.eat_punct("(") {
            return None;
        }
        let mut params = Vec::new();
        if self.eat_punct(")") {
            return Some(params);
        }
        loop {
            let type_name = self.parse_type()?;
            let mut name = None;
            loop {
                match self.peek() {
                    Some(t) if t.kind == TokenKind::Keyword => match t.text.as_str() {
                        "memory" | "storage" | "calldata" => self.advance(),
                        "indexed" if allow_indexed => self.advance(),
                        "payable" => self.advance(),
                        _ => break,
                    },
                    Some(t) if t.kind == TokenKind::Identifier => {
                        name = Some(t.text.clone());
                        self.advance();
                        break;
                    }
                    _ => break,
                }
            }
            params.push(Param { type_name, name });
            if self.eat_punct(",") {
                continue;
            }
            if self.eat_punct(")") {
                return Some(params);
            }
            return None;
        }
    }

    fn parse_function(&mut self, pseudo_name: Option<String>) -> Option<FunctionDecl> {
        let kw = self.take().expect("caller checked");
        let kw_line = kw.line;
        let sig_start = kw.start;
        let name = match pseudo_name {
            Some(n) => n,
            None => match self.peek() {
                // old-style `function constructor()` lexes the name as a keyword
                Some(t)
                    if t.kind == TokenKind::Identifier
                        || matches!(t.text.as_str(), "constructor" | "fallback" | "receive") =>
                {
                    let n = t.text.clone();
                    self.advance();
                    n
                }
                // unnamed fallback: `function() ...`
                _ => String::new(),
            },
        };
        let Some(params) = self.parse_params(false) else {
            self.diag(kw_line, format!("malformed parameter list for function `{name}`; skipped"));
            self.skip_statement();
            return None;
        };

        let mut visibility = Visibility::Default;
        let mut mutability = Mutability::None;
        let mut modifiers = Vec::new();
        let mut modifier_spans: Vec<(usize, usize)> = Vec::new();
        let mut returns = Vec::new();
        let mut has_body = false;
        let mut body_text = String::new();
        let mut sig_end;

        loop {
            let Some(tok) = self.peek() else {
                self.diag(kw_line, format!("unexpected end of file in function `{name}`"));
                sig_end = self.src.len();
                break;
            };
            sig_end = tok.start;
            match (tok.kind, tok.text.as_str()) {
                (TokenKind::Punct, "{") => {
                    let open_end = tok.end;
                    if self.skip_balanced() {
                        let close_start = self.tokens[self.pos - 1].start;
                        body_text = self.src[open_end..close_start].to_owned();
                    } else {
                        self.diag(kw_line, format!("unbalanced body braces in function `{name}`"));
                        body_text = self.src[open_end..].to_owned();
                    }
                    has_body = true;
                    break;
                }
                (TokenKind::Punct, ";") => {
                    self.advance();
                    break;
                }
                (_, "public") => {
                    visibility = Visibility::Public;
                    self.advance();
                }
                (_, "external") => {
                    visibility = Visibility::External;
                    self.advance();
                }
                (_, "internal") => {
                    visibility = Visibility::Internal;
                    self.advance();
                }
                (_, "private") => {
                    visibility = Visibility::Private;
                    self.advance();
                }
                (_, "view") | (_, "pure") | (_, "constant") | (_, "payable") => {
                    if mutability == Mutability::None {
                        mutability = match tok.text.as_str() {
                            "view" => Mutability::View,
                            "pure" => Mutability::Pure,
                            "constant" => Mutability::Constant,
                            _ => Mutability::Payable,
                        };
                    }
                    self.advance();
                }
                (_, "virtual") => self.advance(),
                (_, "override") => {
                    self.advance();
                    if self.at_punct("(") {
                        self.skip_balanced();
                    }
                }
                (_, "returns") => {
                    self.advance();
                    match self.parse_params(false) {
                        Some(r) => returns = r,
                        None => {
                            self.diag(kw_line, format!("malformed returns clause for `{name}`"));
                            self.skip_statement();
                            return None;
                        }
                    }
                }
                (TokenKind::Identifier, _) => {
                    let span_start = tok.start;
                    let mut span_end = tok.end;
                    modifiers.push(tok.text.clone());
                    self.advance();
                    if self.at_punct("(") {
                        self.skip_balanced();
                        span_end = self.tokens[self.pos - 1].end;
                    }
                    modifier_spans.push((span_start, span_end));
                }
                _ => {
                    self.diag(
                        tok.line,
                        format!("unexpected token `{}` in function header `{name}`", tok.text),
                    );
                    self.advance();
                }
            }
        }

        let raw_signature = remove_spans(self.src, sig_start, sig_end, &modifier_spans);
        Some(FunctionDecl {
            name,
            params,
            returns,
            visibility,
            mutability,
            modifiers,
            has_body,
            body_text,
            raw_signature,
        })
    }

    fn parse_event(&mut self) -> Option<EventDecl> {
        let kw = self.take().expect("caller checked");
        let kw_line = kw.line;
        let name = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let n = t.text.clone();
                self.advance();
                n
            }
            _ => {
                self.diag(kw_line, "event without a name; skipped");
                self.skip_statement();
                return None;
            }
        };
        let Some(params) = self.parse_params(true) else {
            self.diag(kw_line, format!("malformed event `{name}`; skipped"));
            self.skip_statement();
            return None;
        };
        if self.peek_text() == "anonymous" {
            self.advance();
        }
        self.eat_punct(";");
        Some(EventDecl { name, params })
    }

    fn parse_modifier(&mut self) -> Option<String> {
        let kw = self.take().expect("caller checked");
        let kw_line = kw.line;
        let name = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let n = t.text.clone();
                self.advance();
                n
            }
            _ => {
                self.diag(kw_line, "modifier without a name; skipped");
                self.skip_statement();
                return None;
            }
        };
        if self.at_punct("(") {
            self.skip_balanced();
        }
        if self.at_punct("{") {
            self.skip_balanced();
        } else {
            self.skip_statement();
        }
        Some(name)
    }

    fn parse_state_var(&mut self) -> Option<StateVarDecl> {
        let save = self.pos;
        let Some(type_name) = self.parse_type() else {
            self.pos = save;
            return None;
        };
        let mut visibility = Visibility::Default;
        let mut name = None;
        loop {
            match self.peek() {
                Some(t)
                    if matches!(
                        t.text.as_str(),
                        "public" | "private" | "internal" | "external"
                    ) =>
                {
                    visibility = match t.text.as_str() {
                        "public" => Visibility::Public,
                        "private" => Visibility::Private,
                        "internal" => Visibility::Internal,
                        _ => Visibility::External,
                    };
                    self.advance();
                }
                Some(t) if matches!(t.text.as_str(), "constant" | "immutable" | "override") => {
                    self.advance();
                }
                Some(t) if t.kind == TokenKind::Identifier => {
                    name = Some(t.text.clone());
                    self.advance();
                    break;
                }
                _ => break,
            }
        }
        let name = match name {
            Some(n) => n,
            None => {
                self.pos = save;
                return None;
            }
        };
        if self.at_punct("=") {
            self.skip_statement();
        } else if !self.eat_punct(";") {
            self.pos = save;
            return None;
        }
        Some(StateVarDecl {
            name,
            type_name,
            visibility,
        })
    }
}

/// Copies `src[start..end]` dropping the given spans, each widened over the
/// whitespace run immediately before it.
fn remove_spans(src: &str, start: usize, end: usize, spans: &[(usize, usize)]) -> String {
    let bytes = src.as_bytes();
    let mut widened: Vec<(usize, usize)> = spans
        .iter()
        .filter(|(s, e)| *s >= start && *e <= end && s < e)
        .map(|&(mut s, e)| {
            while s > start && bytes[s - 1].is_ascii_whitespace() {
                s -= 1;
            }
            (s, e)
        })
        .collect();
    widened.sort_unstable();
    let mut out = String::with_capacity(end - start);
    let mut cur = start;
    for (s, e) in widened {
        if s > cur {
            out.push_str(&src[cur..s]);
        }
        cur = cur.max(e);
    }
    if cur < end {
        out.push_str(&src[cur..end]);
    }
    out
}
