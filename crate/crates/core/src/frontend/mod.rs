//! The .qrel workspace language: lexer, parser, printer and resolver.

pub mod diag;
pub mod lexer;
pub mod parser;
pub mod print;
pub mod resolve;
pub mod syntax;

pub use diag::{format_diagnostics, Diagnostic, LineCol, Severity, Source, Span};
pub use parser::{parse_formula, parse_sort, parse_workspace};
pub use resolve::{resolve, AssertItem, NamedFormula, Target, TargetError, VerifyError, VerifyItem, Workspace};
pub use syntax::{VerifyKind, WorkspaceAst};

/// Parses and resolves a workspace.
pub fn load(text: &str) -> Result<(WorkspaceAst, Workspace), Vec<Diagnostic>> {
    let src = Source::new(text);
    let ast = parse_workspace(&src)?;
    let ws = resolve(&src, &ast)?;
    Ok((ast, ws))
}
