//! A lightweight Solidity-subset front-end.
//!
//! The goal is declaration extraction, not compilation: strip comments,
//! lex, and pull out contract units with their functions, events,
//! modifiers and unit-scope state variables. Function bodies are captured
//! as opaque text by brace matching. Anything the subset grammar cannot
//! digest is skipped with a diagnostic instead of failing the file.

mod lexer;
mod parser;

pub use lexer::{lex, Token, TokenKind};
pub use parser::extract_units;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diag::Diagnostic;
use crate::textprep::FunctionRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Contract,
    Interface,
    Library,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    External,
    Internal,
    Private,
    /// No visibility keyword given (public by 0.4.x compiler default).
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mutability {
    None,
    View,
    Pure,
    Constant,
    Payable,
}

/// A parameter or return slot: canonical type plus optional name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub type_name: String,
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDecl {
    /// Empty string for the unnamed fallback function.
    pub name: String,
    pub params: Vec<Param>,
    pub returns: Vec<Param>,
    pub visibility: Visibility,
    pub mutability: Mutability,
    /// Custom modifier invocations, visibility/mutability keywords excluded.
    pub modifiers: Vec<String>,
    pub has_body: bool,
    /// Raw source between the body braces; empty when `has_body` is false.
    pub body_text: String,
    /// Raw signature slice with modifier invocations removed.
    pub raw_signature: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDecl {
    pub name: String,
    pub params: Vec<Param>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateVarDecl {
    pub name: String,
    pub type_name: String,
    pub visibility: Visibility,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractUnit {
    pub name: String,
    pub kind: UnitKind,
    pub bases: Vec<String>,
    pub functions: Vec<FunctionDecl>,
    pub events: Vec<EventDecl>,
    pub state_vars: Vec<StateVarDecl>,
    pub modifier_decls: Vec<String>,
}

impl FunctionDecl {
    /// Canonical signature text; re-extracting it yields the same
    /// declaration (modulo the raw source slice).
    pub fn signature(&self) -> String {
        let mut out = String::from("function ");
        out.push_str(&self.name);
        out.push('(');
        write_params(&mut out, &self.params);
        out.push(')');
        match self.visibility {
            Visibility::Public => out.push_str(" public"),
            Visibility::External => out.push_str(" external"),
            Visibility::Internal => out.push_str(" internal"),
            Visibility::Private => out.push_str(" private"),
            Visibility::Default => {}
        }
        match self.mutability {
            Mutability::View => out.push_str(" view"),
            Mutability::Pure => out.push_str(" pure"),
            Mutability::Constant => out.push_str(" constant"),
            Mutability::Payable => out.push_str(" payable"),
            Mutability::None => {}
        }
        for m in &self.modifiers {
            out.push(' ');
            out.push_str(m);
        }
        if !self.returns.is_empty() {
            out.push_str(" returns (");
            write_params(&mut out, &self.returns);
            out.push(')');
        }
        out
    }

    /// Parameter types in order, for interface matching.
    pub fn param_types(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.type_name.as_str()).collect()
    }

    pub fn return_types(&self) -> Vec<&str> {
        self.returns.iter().map(|p| p.type_name.as_str()).collect()
    }
}

fn write_params(out: &mut String, params: &[Param]) {
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&p.type_name);
        if let Some(name) = &p.name {
            let _ = write!(out, " {name}");
        }
    }
}

/// Canonicalizes an elementary type name: `uint` -> `uint256`,
/// `int` -> `int256`, `byte` -> `bytes1`. Array suffixes are preserved.
pub fn canonical_type(base: &str) -> String {
    let (head, suffix) = match base.find('[') {
        Some(pos) => base.split_at(pos),
        None => (base, ""),
    };
    let head = match head {
        "uint" => "uint256",
        "int" => "int256",
        "byte" => "bytes1",
        other => other,
    };
    format!("{head}{suffix}")
}

/// Blanks `//` and `/* */` comments with spaces of equal byte length,
/// keeping newlines so that lines and offsets survive. String literals are
/// protected. An unterminated block comment blanks the rest of the file
/// and produces a diagnostic.
pub fn strip_comments(source: &str) -> (String, Vec<Diagnostic>) {
    let bytes = source.as_bytes();
    let mut out = bytes.to_vec();
    let mut diags = Vec::new();
    let mut i = 0;
    let mut line = 1;

    fn blank(out: &mut [u8], from: usize, to: usize) {
        for b in &mut out[from..to] {
            if *b != b'\n' && *b != b'\r' {
                *b = b' ';
            }
        }
    }

    while i < bytes.len() {
        match bytes[i] {
            b'\n' => {
                line += 1;
                i += 1;
            }
            b'"' | b'\'' => {
                let quote = bytes[i];
                i += 1;
                while i < bytes.len() {
                    if bytes[i] == b'\\' && i + 1 < bytes.len() {
                        i += 2;
                        continue;
                    }
                    if bytes[i] == quote || bytes[i] == b'\n' {
                        if bytes[i] == b'\n' {
                            line += 1;
                        }
                        i += 1;
                        break;
                    }
                    i += 1;
                }
            }
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'/' => {
                let start = i;
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                blank(&mut out, start, i);
            }
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'*' => {
                let start = i;
                let open_line = line;
                i += 2;
                let mut closed = false;
                while i < bytes.len() {
                    if bytes[i] == b'\n' {
                        line += 1;
                    }
                    if bytes[i] == b'*' && i + 1 < bytes.len() && bytes[i + 1] == b'/' {
                        i += 2;
                        closed = true;
                        break;
                    }
                    i += 1;
                }
                if !closed {
                    diags.push(Diagnostic::new(
                        None,
                        open_line,
                        "unterminated block comment; rest of file ignored",
                    ));
                    i = bytes.len();
                }
                blank(&mut out, start, i);
            }
            _ => i += 1,
        }
    }
    // only whole comment regions were blanked, so the buffer is still UTF-8
    (String::from_utf8(out).expect("comment stripping preserves UTF-8"), diags)
}

/// Turns the bodied functions of a unit into labeled records: signature
/// with modifiers removed plus the body, and `label` true when at least
/// one modifier survives the deny-list.
pub fn split_functions(
    unit: &ContractUnit,
    contract_address: &str,
    deny_list: &BTreeSet<String>,
) -> Vec<FunctionRecord> {
    unit.functions
        .iter()
        .filter(|f| f.has_body)
        .map(|f| {
            let text = format!("{}{{{}}}", f.raw_signature, f.body_text);
            let label = f
                .modifiers
                .iter()
                .any(|m| !deny_list.contains(m));
            FunctionRecord {
                contract: contract_address.to_owned(),
                name: f.name.clone(),
                text,
                modifiers: f.modifiers.clone(),
                label,
            }
        })
        .collect()
}
