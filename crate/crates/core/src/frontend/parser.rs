//! Recursive-descent parser for .qrel workspaces.
//!
//! Formula precedence, loosest first: `<->`, `->` (both right associative),
//! `or`, `and`, `&` (left associative), then prefix `not`. A quantifier body
//! extends as far right as possible.

use super::diag::{Diagnostic, Source, Span};
use super::lexer::{lex, Tok, Token};
use super::syntax::*;

pub const DECL_KEYWORDS: [&str; 11] = [
    "qset", "rel", "fn", "const", "formula", "assert", "verify", "metric", "family", "graph", "group",
];

pub const RESERVED: [&str; 9] = ["not", "and", "or", "forall", "exists", "in", "true", "false", "is"];

pub fn is_reserved(s: &str) -> bool {
    DECL_KEYWORDS.contains(&s) || RESERVED.contains(&s)
}

struct Parser<'a> {
    src: &'a Source<'a>,
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

type PResult<T> = Result<T, Diagnostic>;

/// Parses a workspace. Any lexical or syntax error yields the full list of diagnostics.
pub fn parse_workspace(src: &Source) -> Result<WorkspaceAst, Vec<Diagnostic>> {
    let (toks, diags) = lex(src);
    let mut p = Parser { src, toks, pos: 0, diags };
    let mut decls = Vec::new();
    while !p.at(&Tok::Eof) {
        match p.decl() {
            Ok(d) => decls.push(d),
            Err(e) => {
                p.diags.push(e);
                p.recover();
            }
        }
    }
    if p.diags.is_empty() {
        Ok(WorkspaceAst { decls })
    } else {
        Err(p.diags)
    }
}

/// Parses a single formula, as used by the command line.
pub fn parse_formula(src: &Source) -> Result<FormulaExpr, Vec<Diagnostic>> {
    let (toks, diags) = lex(src);
    let mut p = Parser { src, toks, pos: 0, diags };
    let f = p.formula().and_then(|f| p.expect(&Tok::Eof).map(|_| f));
    match f {
        Ok(f) if p.diags.is_empty() => Ok(f),
        Ok(_) => Err(p.diags),
        Err(e) => {
            p.diags.push(e);
            Err(p.diags)
        }
    }
}

/// Parses a single sort expression.
pub fn parse_sort(src: &Source) -> Result<SortExpr, Vec<Diagnostic>> {
    let (toks, diags) = lex(src);
    let mut p = Parser { src, toks, pos: 0, diags };
    let s = p.sort().and_then(|s| p.expect(&Tok::Eof).map(|_| s));
    match s {
        Ok(s) if p.diags.is_empty() => Ok(s),
        Ok(_) => Err(p.diags),
        Err(e) => {
            p.diags.push(e);
            Err(p.diags)
        }
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn last_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn err_here(&self, expected: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(self.src, t.span, format!("expected {expected}, found {}", t.tok.describe()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<Span> {
        if self.at(t) {
            Ok(self.bump().span)
        } else {
            Err(self.err_here(&format!("`{}`", if *t == Tok::Eof { "end of input" } else { t.text() })))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.err_here(&format!("`{w}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Ident(s) if !is_reserved(s) => {
                let name = s.clone();
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            Tok::Ident(s) => Err(Diagnostic::error(
                self.src,
                self.peek().span,
                format!("`{s}` is a keyword and cannot be used as {what}"),
            )),
            _ => Err(self.err_here(what)),
        }
    }

    fn index(&mut self) -> PResult<Index> {
        match &self.peek().tok {
            Tok::Num(s) => match s.parse::<usize>() {
                Ok(v) => Ok(Index { value: v, span: self.bump().span }),
                Err(_) => Err(Diagnostic::error(
                    self.src,
                    self.peek().span,
                    format!("expected a nonnegative integer, found `{s}`"),
                )),
            },
            _ => Err(self.err_here("an integer")),
        }
    }

    fn number(&mut self) -> PResult<Number> {
        match &self.peek().tok {
            Tok::Num(s) => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Number { value: v, span: self.bump().span }),
                _ => Err(Diagnostic::error(self.src, self.peek().span, format!("number `{s}` is out of range"))),
            },
            _ => Err(self.err_here("a number")),
        }
    }

    fn string(&mut self) -> PResult<StrLit> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let value = s.clone();
                Ok(StrLit { value, span: self.bump().span })
            }
            _ => Err(self.err_here("a string")),
        }
    }

    /// `open item (, item)* close`, allowing an empty list.
    fn list<T>(&mut self, open: Tok, close: Tok, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<(Vec<T>, Span)> {
        let start = self.expect(&open)?;
        let mut out = Vec::new();
        if !self.at(&close) {
            loop {
                out.push(item(self)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        let end = self.expect(&close)?;
        Ok((out, start.to(end)))
    }

    /// Skips to the next declaration keyword outside braces.
    fn recover(&mut self) {
        let mut depth = 0i32;
        let start = self.pos;
        loop {
            match &self.peek().tok {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                Tok::Ident(s) if depth <= 0 && self.pos > start && DECL_KEYWORDS.contains(&s.as_str()) => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let kw = match &self.peek().tok {
            Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.err_here("a declaration (qset, rel, fn, const, formula, assert, verify, metric, family, graph, group)")),
        };
        let kw_span = self.bump().span;
        match kw.as_str() {
            "qset" => self.qset_decl(),
            "rel" => self.rel_decl(),
            "fn" => {
                let name = self.ident("a function name")?;
                self.expect(&Tok::Colon)?;
                let dom = self.sort()?;
                self.expect(&Tok::Arrow)?;
                let cod = self.sort()?;
                let blocks = self.blocks()?;
                Ok(Decl::Fn { name, dom, cod, blocks })
            }
            "const" => {
                let name = self.ident("a constant name")?;
                self.expect(&Tok::Colon)?;
                let sort = self.sort()?;
                let blocks = self.blocks()?;
                Ok(Decl::Const { name, sort, blocks })
            }
            "formula" => {
                let name = self.ident("a formula name")?;
                self.expect(&Tok::Define)?;
                let body = self.formula()?;
                Ok(Decl::Formula { name, body })
            }
            "assert" => {
                let name = self.ident("a formula name")?;
                let mut expect = true;
                if self.eat(&Tok::Ident("is".into())) {
                    if self.eat(&Tok::Ident("true".into())) {
                    } else if self.eat(&Tok::Ident("false".into())) {
                        expect = false;
                    } else {
                        return Err(self.err_here("`true` or `false`"));
                    }
                }
                Ok(Decl::Assert { name, expect, span: kw_span.to(self.last_span()) })
            }
            "verify" => self.verify_decl(),
            "metric" => self.metric_decl(),
            "family" => self.family_decl(),
            "graph" => self.graph_decl(),
            "group" => self.group_decl(),
            _ => unreachable!("keyword list"),
        }
    }

    fn qset_decl(&mut self) -> PResult<Decl> {
        let name = self.ident("a quantum set name")?;
        self.expect(&Tok::LBrace)?;
        let body = if self.eat(&Tok::Ident("atoms".into())) {
            self.expect(&Tok::Assign)?;
            QSetBody::Atoms(self.list(Tok::LBrack, Tok::RBrack, Self::index)?.0)
        } else if self.eat(&Tok::Ident("classical".into())) {
            self.expect(&Tok::Assign)?;
            QSetBody::Classical(self.list(Tok::LBrack, Tok::RBrack, Self::string)?.0)
        } else {
            return Err(self.err_here("`atoms` or `classical`"));
        };
        self.expect(&Tok::RBrace)?;
        Ok(Decl::QSet { name, body })
    }

    fn rel_decl(&mut self) -> PResult<Decl> {
        let name = self.ident("a relation name")?;
        self.expect(&Tok::Colon)?;
        if self.at(&Tok::LParen) {
            let (sorts, span) = self.list(Tok::LParen, Tok::RParen, Self::sort)?;
            let continues = matches!(self.peek().tok, Tok::Star | Tok::Cross | Tok::Arrow);
            if !continues {
                let blocks = self.blocks()?;
                return Ok(Decl::Rel { name, sorts, blocks });
            }
            if sorts.len() != 1 {
                return Err(Diagnostic::error(self.src, span, "a relation `A -> B` needs a single domain sort"));
            }
            let first = sorts.into_iter().next().expect("one sort");
            let dom = self.sort_rest(first)?;
            return self.bin_rel_tail(name, dom);
        }
        let dom = self.sort()?;
        self.bin_rel_tail(name, dom)
    }

    fn bin_rel_tail(&mut self, name: Ident, dom: SortExpr) -> PResult<Decl> {
        self.expect(&Tok::Arrow)?;
        let cod = self.sort()?;
        let blocks = self.blocks()?;
        Ok(Decl::BinRel { name, dom, cod, blocks })
    }

    fn verify_decl(&mut self) -> PResult<Decl> {
        let first = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.err_here("a structure kind")),
        };
        let mut span = self.bump().span;
        let mut text = first;
        while self.at(&Tok::Minus) && self.peek().span.start == span.end {
            self.bump();
            match &self.peek().tok {
                Tok::Ident(s) => {
                    text.push('-');
                    text.push_str(s);
                    span = span.to(self.bump().span);
                }
                _ => return Err(self.err_here("a structure kind")),
            }
        }
        let kind = VerifyKind::parse(&text).ok_or_else(|| {
            let all: Vec<&str> = VerifyKind::ALL.iter().map(|k| k.name()).collect();
            Diagnostic::error(self.src, span, format!("unknown structure kind `{text}`"))
                .with_hint(format!("known kinds: {}", all.join(", ")))
        })?;
        let mut names = vec![self.ident("a declared name")?];
        while matches!(&self.peek().tok, Tok::Ident(s) if !is_reserved(s)) {
            names.push(self.ident("a declared name")?);
        }
        Ok(Decl::Verify { kind, kind_span: span, names })
    }

    fn metric_decl(&mut self) -> PResult<Decl> {
        let name = self.ident("a metric name")?;
        self.expect(&Tok::Colon)?;
        let sort = self.sort()?;
        self.expect(&Tok::LBrace)?;
        let mut entries = Vec::new();
        while !self.at(&Tok::RBrace) {
            let value = self.number()?;
            self.expect(&Tok::Assign)?;
            let rel = self.ident("a relation name")?;
            entries.push(MetricEntry { value, rel });
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Metric { name, sort, entries })
    }

    fn family_decl(&mut self) -> PResult<Decl> {
        let name = self.ident("a family name")?;
        self.expect(&Tok::Colon)?;
        let dim = self.index()?;
        self.expect(&Tok::LBrace)?;
        self.expect_word("rows")?;
        self.expect(&Tok::Assign)?;
        let rows = self.list(Tok::LBrack, Tok::RBrack, Self::string)?.0;
        self.expect_word("cols")?;
        self.expect(&Tok::Assign)?;
        let cols = self.list(Tok::LBrack, Tok::RBrack, Self::string)?.0;
        let mut entries = Vec::new();
        while self.eat(&Tok::Ident("entry".into())) {
            self.expect(&Tok::LParen)?;
            let row = self.index()?;
            self.expect(&Tok::Comma)?;
            let col = self.index()?;
            self.expect(&Tok::RParen)?;
            self.expect(&Tok::Assign)?;
            let mat = self.matrix()?;
            entries.push(FamilyEntry { row, col, mat });
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Family { name, dim, rows, cols, entries })
    }

    fn graph_decl(&mut self) -> PResult<Decl> {
        let name = self.ident("a graph name")?;
        self.expect(&Tok::LBrace)?;
        self.expect_word("vertices")?;
        self.expect(&Tok::Assign)?;
        let vertices = self.list(Tok::LBrack, Tok::RBrack, Self::string)?.0;
        self.expect_word("edges")?;
        self.expect(&Tok::Assign)?;
        let edges = self
            .list(Tok::LBrack, Tok::RBrack, |p| {
                p.expect(&Tok::LBrack)?;
                let a = p.index()?;
                p.expect(&Tok::Comma)?;
                let b = p.index()?;
                p.expect(&Tok::RBrack)?;
                Ok((a, b))
            })?
            .0;
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Graph { name, vertices, edges })
    }

    fn group_decl(&mut self) -> PResult<Decl> {
        let name = self.ident("a group name")?;
        self.expect(&Tok::LBrace)?;
        self.expect_word("elements")?;
        self.expect(&Tok::Assign)?;
        let elements = self.list(Tok::LBrack, Tok::RBrack, Self::string)?.0;
        let body = if self.eat(&Tok::Ident("table".into())) {
            self.expect(&Tok::Assign)?;
            let table = self
                .list(Tok::LBrack, Tok::RBrack, |p| Ok(p.list(Tok::LBrack, Tok::RBrack, Self::index)?.0))?
                .0;
            self.expect_word("unit")?;
            self.expect(&Tok::Assign)?;
            let unit = self.index()?;
            GroupBody::Table { table, unit }
        } else if self.at_word("irrep") {
            let mut irreps = Vec::new();
            while self.eat(&Tok::Ident("irrep".into())) {
                self.expect(&Tok::Assign)?;
                irreps.push(self.list(Tok::LBrack, Tok::RBrack, Self::matrix)?);
            }
            GroupBody::Irreps(irreps)
        } else {
            return Err(self.err_here("`table` or `irrep`"));
        };
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Group { name, elements, body })
    }

    fn blocks(&mut self) -> PResult<Vec<BlockEntry>> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.at(&Tok::RBrace) {
            let start = self.expect_word("block")?;
            let index = self.list(Tok::LParen, Tok::RParen, Self::index)?.0;
            self.expect(&Tok::Assign)?;
            let (mats, span) = self.list(Tok::LBrack, Tok::RBrack, Self::matrix)?;
            out.push(BlockEntry { index, mats, span: start.to(span) });
        }
        self.expect(&Tok::RBrace)?;
        Ok(out)
    }

    fn matrix(&mut self) -> PResult<MatrixLit> {
        let (rows, span) = self.list(Tok::LBrack, Tok::RBrack, |p| {
            Ok(p.list(Tok::LBrack, Tok::RBrack, |q| {
                q.expect(&Tok::LBrack)?;
                let re = q.number()?;
                q.expect(&Tok::Comma)?;
                let im = q.number()?;
                q.expect(&Tok::RBrack)?;
                Ok((re.value, im.value))
            })?)
        })?;
        let rows: Vec<Vec<(f64, f64)>> = rows.into_iter().map(|(r, _)| r).collect();
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Diagnostic::error(self.src, span, "matrix rows must be nonempty and of equal length"));
        }
        Ok(MatrixLit { rows, span })
    }

    pub fn sort(&mut self) -> PResult<SortExpr> {
        let first = self.sort_atom()?;
        self.sort_rest(first)
    }

    /// Continues a sort expression after its first operand.
    fn sort_rest(&mut self, mut left: SortExpr) -> PResult<SortExpr> {
        left = self.sort_postfix(left);
        while self.eat(&Tok::Cross) {
            let a = self.sort_atom()?;
            let right = self.sort_postfix(a);
            left = SortExpr::Product(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn sort_postfix(&mut self, mut s: SortExpr) -> SortExpr {
        while self.at(&Tok::Star) {
            let end = self.bump().span;
            let span = s.span().to(end);
            s = SortExpr::Dual(Box::new(s), span);
        }
        s
    }

    fn sort_atom(&mut self) -> PResult<SortExpr> {
        match &self.peek().tok {
            Tok::Num(n) if n == "1" => Ok(SortExpr::Unit(self.bump().span)),
            Tok::LParen => {
                self.bump();
                let s = self.sort()?;
                self.expect(&Tok::RParen)?;
                Ok(s)
            }
            _ => Ok(SortExpr::Name(self.ident("a sort")?)),
        }
    }

    pub fn formula(&mut self) -> PResult<FormulaExpr> {
        let left = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let right = self.formula()?;
            return Ok(FormulaExpr::Bin(BinOp::Iff, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn implication(&mut self) -> PResult<FormulaExpr> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            return Ok(FormulaExpr::Bin(BinOp::Implies, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> PResult<FormulaExpr> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Ident("or".into())) {
            let right = self.conjunction()?;
            left = FormulaExpr::Bin(BinOp::Or, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> PResult<FormulaExpr> {
        let mut left = self.sasaki()?;
        while self.eat(&Tok::Ident("and".into())) {
            let right = self.sasaki()?;
            left = FormulaExpr::Bin(BinOp::And, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn sasaki(&mut self) -> PResult<FormulaExpr> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            let right = self.unary()?;
            left = FormulaExpr::Bin(BinOp::Sasaki, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<FormulaExpr> {
        let start = self.peek().span;
        if self.eat(&Tok::Ident("not".into())) {
            let body = self.unary()?;
            let span = start.to(body.span());
            return Ok(FormulaExpr::Not(Box::new(body), span));
        }
        for (w, q) in [("forall", Quant::Forall), ("exists", Quant::Exists)] {
            if self.eat(&Tok::Ident(w.into())) {
                let var = self.ident("a variable")?;
                let dvar = if self.eat(&Tok::EqEq) { Some(self.ident("a dual variable")?) } else { None };
                self.expect_word("in")?;
                let sort = self.sort()?;
                self.expect(&Tok::Dot)?;
                let body = self.formula()?;
                let span = start.to(body.span());
                return Ok(FormulaExpr::Quant { q, var, dvar, sort, body: Box::new(body), span });
            }
        }
        if self.eat(&Tok::Ident("true".into())) {
            return Ok(FormulaExpr::Const(true, start));
        }
        if self.eat(&Tok::Ident("false".into())) {
            return Ok(FormulaExpr::Const(false, start));
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<FormulaExpr> {
        let start = self.peek().span;
        let conj = self.eat(&Tok::Tilde);
        let is_eq = matches!(&self.peek().tok, Tok::Ident(s) if s == "E") && *self.peek_at(1) == Tok::LBrack;
        let pred = if is_eq {
            self.bump();
            self.expect(&Tok::LBrack)?;
            let s = self.sort()?;
            self.expect(&Tok::RBrack)?;
            PredRef::Eq(s)
        } else {
            PredRef::Named(self.ident("a formula")?)
        };
        let (args, end) = self.list(Tok::LParen, Tok::RParen, Self::term)?;
        Ok(FormulaExpr::Atom { conj, pred, args, span: start.to(end) })
    }

    fn term(&mut self) -> PResult<TermExpr> {
        let start = self.peek().span;
        if self.eat(&Tok::Tilde) {
            let t = self.term()?;
            let span = start.to(t.span());
            return Ok(TermExpr::Conj(Box::new(t), span));
        }
        let head = self.ident("a term")?;
        if self.at(&Tok::LParen) {
            let (args, end) = self.list(Tok::LParen, Tok::RParen, Self::term)?;
            return Ok(TermExpr::App { span: head.span.to(end), head, args });
        }
        Ok(TermExpr::Name(head))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<WorkspaceAst, Vec<Diagnostic>> {
        parse_workspace(&Source::new(s))
    }

    #[test]
    fn qset_and_formula() {
        let w = parse("qset X { atoms = [2] }\nformula refl := forall x == xs in X . R(x, xs)").unwrap();
        assert_eq!(w.decls.len(), 2);
        match &w.decls[1] {
            Decl::Formula { body: FormulaExpr::Quant { q: Quant::Forall, dvar: Some(d), .. }, .. } => {
                assert_eq!(d.name, "xs")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let f = parse_formula(&Source::new("A() and B() or C() -> D() & E() <-> F()")).unwrap();
        let FormulaExpr::Bin(BinOp::Iff, l, _) = f else { panic!() };
        let FormulaExpr::Bin(BinOp::Implies, l, r) = *l else { panic!() };
        assert!(matches!(*l, FormulaExpr::Bin(BinOp::Or, _, _)));
        assert!(matches!(*r, FormulaExpr::Bin(BinOp::Sasaki, _, _)));
        let q = parse_formula(&Source::new("forall x in X . A(x) and B(x)")).unwrap();
        assert!(matches!(q, FormulaExpr::Quant { .. }));
    }

    #[test]
    fn sorts() {
        let s = parse_sort(&Source::new("X >< Y* >< (Z >< W)*")).unwrap();
        assert_eq!(s.factors().len(), 3);
        let w = parse("rel F : (X >< Y)* -> Z { }").unwrap();
        assert!(matches!(&w.decls[0], Decl::BinRel { dom: SortExpr::Dual(..), .. }));
        let w = parse("rel R : (X, X*) { } rel S : (X) -> X { }").unwrap();
        assert!(matches!(&w.decls[0], Decl::Rel { .. }));
        assert!(matches!(&w.decls[1], Decl::BinRel { .. }));
    }

    #[test]
    fn verify_kinds() {
        let w = parse("verify poset-weaver R verify hom-witness P G H").unwrap();
        match &w.decls[1] {
            Decl::Verify { kind, names, .. } => {
                assert_eq!(*kind, VerifyKind::HomWitness);
                assert_eq!(names.len(), 3);
            }
            other => panic!("{other:?}"),
        }
        let e = parse("verify posetweaver R").unwrap_err();
        assert!(e[0].message.contains("unknown structure kind"));
    }

    #[test]
    fn errors_recover_per_declaration() {
        let e = parse("qset X { atoms = [2 }\nqset Y { atoms = [1] }\nformula f := and").unwrap_err();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].start.line, e[1].start.line), (1, 3));
    }

    #[test]
    fn ragged_matrix() {
        let e = parse("rel R : (X) { block (0) = [[[[1,0]],[[1,0],[0,0]]]] }").unwrap_err();
        assert!(e[0].message.contains("equal length"));
    }
}
