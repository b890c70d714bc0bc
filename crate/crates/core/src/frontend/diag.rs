//! Source spans and diagnostics.

use std::fmt;

/// Byte range into the source text. Spans never take part in AST equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// 1-based line and column; columns count characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LineCol {
    pub line: usize,
    pub col: usize,
}

/// Line starts of a text, for offset to line:col conversion.
#[derive(Debug, Clone)]
pub struct Source<'a> {
    pub text: &'a str,
    lines: Vec<usize>,
}

impl<'a> Source<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut lines = vec![0];
        lines.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Source { text, lines }
    }

    pub fn locate(&self, offset: usize) -> LineCol {
        let mut offset = offset.min(self.text.len());
        while !self.text.is_char_boundary(offset) {
            offset -= 1;
        }
        let line = self.lines.partition_point(|&s| s <= offset) - 1;
        let start = self.lines[line];
        let col = self.text[start..offset].chars().count() + 1;
        LineCol { line: line + 1, col }
    }

    pub fn slice(&self, span: Span) -> &'a str {
        &self.text[span.start.min(self.text.len())..span.end.min(self.text.len())]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub start: LineCol,
    pub end: LineCol,
    pub message: String,
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn error(src: &Source, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            start: src.locate(span.start),
            end: src.locate(span.end),
            message: message.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// One line per diagnostic, `path:line:col: severity: message`, ordered by span.
/// A hint is appended to the message after `; hint: `.
pub fn format_diagnostics(path: &str, ds: &[Diagnostic]) -> String {
    let mut sorted: Vec<&Diagnostic> = ds.iter().collect();
    sorted.sort_by(|a, b| {
        (a.span.start, a.span.end, a.severity, &a.message).cmp(&(b.span.start, b.span.end, b.severity, &b.message))
    });
    let mut out = String::new();
    for d in sorted {
        out.push_str(&format!("{path}:{}:{}: {}: {}", d.start.line, d.start.col, d.severity, d.message));
        if let Some(h) = &d.hint {
            out.push_str(&format!("; hint: {h}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_lines_and_columns() {
        let s = Source::new("ab\ncδe\n");
        assert_eq!(s.locate(0), LineCol { line: 1, col: 1 });
        assert_eq!(s.locate(3), LineCol { line: 2, col: 1 });
        assert_eq!(s.locate(6), LineCol { line: 2, col: 3 });
        assert_eq!(s.locate(100), LineCol { line: 3, col: 1 });
    }

    #[test]
    fn formatting() {
        assert_eq!(format_diagnostics("a.qrel", &[]), "");
        let s = Source::new("x\n  y");
        let d = vec![
            Diagnostic::error(&s, Span::new(4, 5), "second"),
            Diagnostic::error(&s, Span::new(0, 1), "first"),
        ];
        assert_eq!(format_diagnostics("a.qrel", &d), "a.qrel:1:1: error: first\na.qrel:2:3: error: second\n");
    }
}
