//! Tokens of the .qrel language.

use super::diag::{Diagnostic, Source, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Numeric literal, kept as written.
    Num(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Define,
    Assign,
    EqEq,
    Dot,
    Star,
    Cross,
    Arrow,
    DArrow,
    Tilde,
    Amp,
    Minus,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Define => ":=",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::Dot => ".",
            Tok::Star => "*",
            Tok::Cross => "><",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Minus => "-",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `src` into tokens. Lexical errors are reported and the offending
/// characters skipped, so the token stream always ends with `Eof`.
pub fn lex(src: &Source) -> (Vec<Token>, Vec<Diagnostic>) {
    let text = src.text;
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut diags = Vec::new();
    let mut i = 0;
    let peek = |k: usize| text[k..].chars().next();
    while i < text.len() {
        let c = peek(i).expect("in bounds");
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c == '#' {
            while i < text.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let punct = |s: &str| text[i..].starts_with(s);
        let two = [
            (":=", Tok::Define),
            ("==", Tok::EqEq),
            ("><", Tok::Cross),
            ("->", Tok::Arrow),
        ];
        if punct("<->") {
            toks.push(Token { tok: Tok::DArrow, span: Span::new(i, i + 3) });
            i += 3;
            continue;
        }
        if let Some((s, t)) = two.iter().find(|(s, _)| punct(s)) {
            toks.push(Token { tok: t.clone(), span: Span::new(i, i + s.len()) });
            i += s.len();
            continue;
        }
        let negative_number = c == '-' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit());
        if c.is_ascii_digit() || negative_number {
            i += 1;
            while i < text.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < text.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < text.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < text.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < text.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < text.len() && bytes[j].is_ascii_digit() {
                    while j < text.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            toks.push(Token { tok: Tok::Num(text[start..i].to_string()), span: Span::new(start, i) });
            continue;
        }
        if is_ident_start(c) {
            while i < text.len() && is_ident_char(bytes[i] as char) {
                i += 1;
            }
            toks.push(Token { tok: Tok::Ident(text[start..i].to_string()), span: Span::new(start, i) });
            continue;
        }
        if c == '"' {
            i += 1;
            let mut s = String::new();
            let mut closed = false;
            while i < text.len() {
                let d = peek(i).expect("in bounds");
                if d == '\n' {
                    break;
                }
                i += d.len_utf8();
                match d {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => {
                        let e = peek(i);
                        match e {
                            Some('"') | Some('\\') => s.push(e.unwrap()),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            _ => {
                                let end = i + e.map_or(0, char::len_utf8);
                                diags.push(Diagnostic::error(src, Span::new(i - 1, end), "unknown escape in string"));
                            }
                        }
                        i += e.map_or(0, char::len_utf8);
                    }
                    _ => s.push(d),
                }
            }
            if !closed {
                diags.push(Diagnostic::error(src, Span::new(start, i), "unterminated string"));
            }
            toks.push(Token { tok: Tok::Str(s), span: Span::new(start, i) });
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Assign),
            '.' => Some(Tok::Dot),
            '*' => Some(Tok::Star),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '-' => Some(Tok::Minus),
            _ => None,
        };
        i += c.len_utf8();
        match single {
            Some(t) => toks.push(Token { tok: t, span: Span::new(start, i) }),
            None => diags.push(Diagnostic::error(src, Span::new(start, i), format!("unexpected character `{c}`"))),
        }
    }
    toks.push(Token { tok: Tok::Eof, span: Span::new(text.len(), text.len()) });
    (toks, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        let src = Source::new(s);
        let (t, d) = lex(&src);
        assert!(d.is_empty(), "{d:?}");
        t.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn tokens() {
        use Tok::*;
        assert_eq!(
            kinds("forall x == xs in X* . R(x,xs) # c\n<-> -1.5e-3 >< := poset-weaver"),
            vec![
                Ident("forall".into()),
                Ident("x".into()),
                EqEq,
                Ident("xs".into()),
                Ident("in".into()),
                Ident("X".into()),
                Star,
                Dot,
                Ident("R".into()),
                LParen,
                Ident("x".into()),
                Comma,
                Ident("xs".into()),
                RParen,
                DArrow,
                Num("-1.5e-3".into()),
                Cross,
                Define,
                Ident("poset".into()),
                Minus,
                Ident("weaver".into()),
                Eof
            ]
        );
        assert_eq!(kinds("\"a\\\"b\""), vec![Str("a\"b".into()), Eof]);
    }

    #[test]
    fn errors_keep_going() {
        let src = Source::new("a $ b \"open");
        let (t, d) = lex(&src);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].start.col, 3);
        assert_eq!(t.len(), 4);
    }
}
