//! The script language: parsing, static checks, evaluation and reports.

pub mod ast;
mod check;
mod eval;
mod parser;

use std::fmt;
use std::path::Path;

use serde::Serialize;

pub use ast::{Pos, Script};
pub use check::check;
pub use eval::{run, Options, Report};
pub use parser::{parse_expr, parse_syntax};

use crate::error::Error;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    Syntax,
    Name,
    Type,
    Engine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub code: String,
    pub line: usize,
    pub col: usize,
    #[serde(skip)]
    pub pos: Pos,
    pub message: String,
    /// Index of the statement that failed, for engine errors.
    pub statement: Option<usize>,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, pos: Pos, message: impl Into<String>) -> Diagnostic {
        let code = match kind {
            DiagnosticKind::Syntax => "SyntaxError",
            DiagnosticKind::Name => "NameError",
            DiagnosticKind::Type => "TypeError",
            DiagnosticKind::Engine => "EngineError",
        };
        Diagnostic {
            kind,
            code: code.into(),
            line: pos.line,
            col: pos.col,
            pos,
            message: message.into(),
            statement: None,
        }
    }

    pub fn engine(e: &Error, pos: Pos, statement: usize) -> Diagnostic {
        Diagnostic {
            code: e.code().into(),
            statement: Some(statement),
            ..Diagnostic::new(DiagnosticKind::Engine, pos, e.to_string())
        }
    }

    /// 2 for static errors, 3 for resource limits, 1 for other engine errors.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            DiagnosticKind::Engine if self.code == "ResourceLimit" => 3,
            DiagnosticKind::Engine => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.code, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Parses, expands `load` statements relative to `dir`, and checks names and
/// types.
pub fn parse(src: &str, dir: Option<&Path>) -> Result<Script, Diagnostic> {
    let script = parse_syntax(src)?;
    let script = check::expand_loads(script, dir)?;
    check(&script)?;
    Ok(script)
}
