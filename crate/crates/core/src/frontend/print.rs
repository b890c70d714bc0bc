//! Canonical text for workspace ASTs. Reparsing the output gives back the same AST.

use std::fmt::Write;

use super::syntax::*;

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn strings(v: &[StrLit]) -> String {
    let items: Vec<String> = v.iter().map(|s| quoted(&s.value)).collect();
    format!("[{}]", items.join(", "))
}

fn indices(v: &[Index]) -> String {
    let items: Vec<String> = v.iter().map(|i| i.value.to_string()).collect();
    items.join(", ")
}

pub fn sort(s: &SortExpr) -> String {
    match s {
        SortExpr::Name(i) => i.name.clone(),
        SortExpr::Unit(_) => "1".to_string(),
        SortExpr::Dual(inner, _) => match **inner {
            SortExpr::Product(..) => format!("({})*", sort(inner)),
            _ => format!("{}*", sort(inner)),
        },
        SortExpr::Product(a, b) => match **b {
            SortExpr::Product(..) => format!("{} >< ({})", sort(a), sort(b)),
            _ => format!("{} >< {}", sort(a), sort(b)),
        },
    }
}

pub fn matrix(m: &MatrixLit) -> String {
    let rows: Vec<String> = m
        .rows
        .iter()
        .map(|r| {
            let cs: Vec<String> = r.iter().map(|&(re, im)| format!("[{}, {}]", num(re), num(im))).collect();
            format!("[{}]", cs.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn matrices(ms: &[MatrixLit]) -> String {
    let items: Vec<String> = ms.iter().map(matrix).collect();
    format!("[{}]", items.join(", "))
}

fn blocks(out: &mut String, bs: &[BlockEntry]) {
    if bs.is_empty() {
        out.push_str(" { }\n");
        return;
    }
    out.push_str(" {\n");
    for b in bs {
        let _ = writeln!(out, "  block ({}) = {}", indices(&b.index), matrices(&b.mats));
    }
    out.push_str("}\n");
}

pub fn term(t: &TermExpr) -> String {
    match t {
        TermExpr::Name(i) => i.name.clone(),
        TermExpr::App { head, args, .. } => {
            let a: Vec<String> = args.iter().map(term).collect();
            format!("{}({})", head.name, a.join(", "))
        }
        TermExpr::Conj(inner, _) => format!("~{}", term(inner)),
    }
}

fn operand(f: &FormulaExpr) -> String {
    match f {
        FormulaExpr::Const(..) | FormulaExpr::Atom { .. } => formula(f),
        _ => format!("({})", formula(f)),
    }
}

pub fn formula(f: &FormulaExpr) -> String {
    match f {
        FormulaExpr::Const(b, _) => b.to_string(),
        FormulaExpr::Atom { conj, pred, args, .. } => {
            let head = match pred {
                PredRef::Named(i) => i.name.clone(),
                PredRef::Eq(s) => format!("E[{}]", sort(s)),
            };
            let a: Vec<String> = args.iter().map(term).collect();
            format!("{}{head}({})", if *conj { "~" } else { "" }, a.join(", "))
        }
        FormulaExpr::Not(a, _) => format!("not {}", operand(a)),
        FormulaExpr::Bin(op, a, b) => format!("{} {} {}", operand(a), op.text(), operand(b)),
        FormulaExpr::Quant { q, var, dvar, sort: s, body, .. } => {
            let word = match q {
                Quant::Forall => "forall",
                Quant::Exists => "exists",
            };
            let pair = match dvar {
                Some(d) => format!("{} == {}", var.name, d.name),
                None => var.name.clone(),
            };
            format!("{word} {pair} in {} . {}", sort(s), formula(body))
        }
    }
}

pub fn decl(d: &Decl) -> String {
    let mut out = String::new();
    match d {
        Decl::QSet { name, body } => {
            let b = match body {
                QSetBody::Atoms(a) => format!("atoms = [{}]", indices(a)),
                QSetBody::Classical(l) => format!("classical = {}", strings(l)),
            };
            let _ = writeln!(out, "qset {} {{ {b} }}", name.name);
        }
        Decl::Rel { name, sorts, blocks: bs } => {
            let s: Vec<String> = sorts.iter().map(sort).collect();
            let _ = write!(out, "rel {} : ({})", name.name, s.join(", "));
            blocks(&mut out, bs);
        }
        Decl::BinRel { name, dom, cod, blocks: bs } => {
            // a leading parenthesis would read as an arity list
            let d = sort(dom);
            let d = if d.starts_with('(') { format!("({d})") } else { d };
            let _ = write!(out, "rel {} : {d} -> {}", name.name, sort(cod));
            blocks(&mut out, bs);
        }
        Decl::Fn { name, dom, cod, blocks: bs } => {
            let _ = write!(out, "fn {} : {} -> {}", name.name, sort(dom), sort(cod));
            blocks(&mut out, bs);
        }
        Decl::Const { name, sort: s, blocks: bs } => {
            let _ = write!(out, "const {} : {}", name.name, sort(s));
            blocks(&mut out, bs);
        }
        Decl::Formula { name, body } => {
            let _ = writeln!(out, "formula {} := {}", name.name, formula(body));
        }
        Decl::Assert { name, expect, .. } => {
            let _ = writeln!(out, "assert {} is {expect}", name.name);
        }
        Decl::Verify { kind, names, .. } => {
            let n: Vec<&str> = names.iter().map(|i| i.name.as_str()).collect();
            let _ = writeln!(out, "verify {} {}", kind.name(), n.join(" "));
        }
        Decl::Metric { name, sort: s, entries } => {
            let _ = writeln!(out, "metric {} : {} {{", name.name, sort(s));
            for e in entries {
                let _ = writeln!(out, "  {} = {}", num(e.value.value), e.rel.name);
            }
            out.push_str("}\n");
        }
        Decl::Family { name, dim, rows, cols, entries } => {
            let _ = writeln!(out, "family {} : {} {{", name.name, dim.value);
            let _ = writeln!(out, "  rows = {}", strings(rows));
            let _ = writeln!(out, "  cols = {}", strings(cols));
            for e in entries {
                let _ = writeln!(out, "  entry ({}, {}) = {}", e.row.value, e.col.value, matrix(&e.mat));
            }
            out.push_str("}\n");
        }
        Decl::Graph { name, vertices, edges } => {
            let e: Vec<String> = edges.iter().map(|(a, b)| format!("[{}, {}]", a.value, b.value)).collect();
            let _ = writeln!(out, "graph {} {{", name.name);
            let _ = writeln!(out, "  vertices = {}", strings(vertices));
            let _ = writeln!(out, "  edges = [{}]", e.join(", "));
            out.push_str("}\n");
        }
        Decl::Group { name, elements, body } => {
            let _ = writeln!(out, "group {} {{", name.name);
            let _ = writeln!(out, "  elements = {}", strings(elements));
            match body {
                GroupBody::Table { table, unit } => {
                    let rows: Vec<String> = table.iter().map(|r| format!("[{}]", indices(r))).collect();
                    let _ = writeln!(out, "  table = [{}]", rows.join(", "));
                    let _ = writeln!(out, "  unit = {}", unit.value);
                }
                GroupBody::Irreps(irreps) => {
                    for (ms, _) in irreps {
                        let _ = writeln!(out, "  irrep = {}", matrices(ms));
                    }
                }
            }
            out.push_str("}\n");
        }
    }
    out
}

pub fn workspace(w: &WorkspaceAst) -> String {
    w.decls.iter().map(decl).collect()
}

#[cfg(test)]
mod tests {
    use super::super::diag::Source;
    use super::super::parser::parse_workspace;
    use super::*;

    #[test]
    fn roundtrip_sample() {
        let text = r#"
qset X { atoms = [2, 1] }
qset A { classical = ["a", "b\"c"] }
rel R : (X, X*) { block (0, 0) = [[[[1, 0], [0, 0], [0, 0], [0.5, -1e-3]]]] }
rel S : (X >< X)* -> X { }
fn F : X >< X -> 1 { block (0, 0) = [] }
const c : X { block (1) = [[[[1, 0]]]] }
formula f := forall x == xs in X . exists y in (X >< A)* . not R(x, xs) & ~S(F(~c, y), x) <-> E[X*](xs, x)
assert f is false
verify quantum-group F c
metric M : X { 0 = R 1.5 = S }
family P : 1 { rows = ["0"] cols = ["0"] entry (0, 0) = [[[1, 0]]] }
graph G { vertices = ["0", "1"] edges = [[0, 1]] }
group Z2 { elements = ["e", "g"] table = [[0, 1], [1, 0]] unit = 0 }
group D { elements = ["e"] irrep = [[[[1, 0]]]] }
"#;
        let a = parse_workspace(&Source::new(text)).unwrap();
        let printed = workspace(&a);
        let b = parse_workspace(&Source::new(&printed)).unwrap_or_else(|e| panic!("{e:?}\n{printed}"));
        assert_eq!(a, b);
        assert_eq!(printed, workspace(&b));
    }
}
