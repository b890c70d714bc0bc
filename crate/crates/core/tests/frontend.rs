use proptest::prelude::*;
use qrel_core::frontend::diag::Span;
use qrel_core::frontend::syntax::*;
use qrel_core::frontend::{format_diagnostics, load, parse_workspace, print, Source};

const NAMES: [&str; 7] = ["X", "Y", "a", "b1", "R", "F_2", "E"];

fn ident() -> impl Strategy<Value = Ident> {
    prop::sample::select(&NAMES[..]).prop_map(Ident::new)
}

fn index() -> impl Strategy<Value = Index> {
    (0usize..20).prop_map(|value| Index { value, span: Span::default() })
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), (-3i32..3).prop_map(f64::from)]
}

fn strlit() -> impl Strategy<Value = StrLit> {
    "[a-z\"\\\\\t\n ä]{0,6}".prop_map(|value| StrLit { value, span: Span::default() })
}

fn sort() -> impl Strategy<Value = SortExpr> {
    let leaf = prop_oneof![ident().prop_map(SortExpr::Name), Just(SortExpr::Unit(Span::default()))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| SortExpr::Dual(Box::new(s), Span::default())),
            (inner.clone(), inner).prop_map(|(a, b)| SortExpr::Product(Box::new(a), Box::new(b))),
        ]
    })
}

fn term() -> impl Strategy<Value = TermExpr> {
    ident().prop_map(TermExpr::Name).prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (ident(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(head, args)| TermExpr::App { head, args, span: Span::default() }),
            inner.prop_map(|t| TermExpr::Conj(Box::new(t), Span::default())),
        ]
    })
}

fn formula() -> impl Strategy<Value = FormulaExpr> {
    let pred = prop_oneof![ident().prop_map(PredRef::Named), sort().prop_map(PredRef::Eq)];
    let atom = (any::<bool>(), pred, prop::collection::vec(term(), 0..3))
        .prop_map(|(conj, pred, args)| FormulaExpr::Atom { conj, pred, args, span: Span::default() });
    let leaf = prop_oneof![atom, any::<bool>().prop_map(|b| FormulaExpr::Const(b, Span::default()))];
    let op = prop::sample::select(vec![BinOp::And, BinOp::Or, BinOp::Implies, BinOp::Iff, BinOp::Sasaki]);
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| FormulaExpr::Not(Box::new(f), Span::default())),
            (op.clone(), inner.clone(), inner.clone()).prop_map(|(o, a, b)| FormulaExpr::Bin(o, Box::new(a), Box::new(b))),
            (any::<bool>(), ident(), prop::option::of(ident()), sort(), inner).prop_map(|(e, var, dvar, sort, body)| {
                FormulaExpr::Quant {
                    q: if e { Quant::Exists } else { Quant::Forall },
                    var,
                    dvar,
                    sort,
                    body: Box::new(body),
                    span: Span::default(),
                }
            }),
        ]
    })
}

fn matrix() -> impl Strategy<Value = MatrixLit> {
    (1usize..3, 1usize..3).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((number(), number()), c), r)
            .prop_map(|rows| MatrixLit { rows, span: Span::default() })
    })
}

fn blocks() -> impl Strategy<Value = Vec<BlockEntry>> {
    prop::collection::vec(
        (prop::collection::vec(index(), 0..3), prop::collection::vec(matrix(), 0..2))
            .prop_map(|(index, mats)| BlockEntry { index, mats, span: Span::default() }),
        0..3,
    )
}

fn decl() -> impl Strategy<Value = Decl> {
    let kind = prop::sample::select(VerifyKind::ALL.to_vec());
    prop_oneof![
        (ident(), prop::collection::vec(index(), 0..3)).prop_map(|(name, a)| Decl::QSet { name, body: QSetBody::Atoms(a) }),
        (ident(), prop::collection::vec(strlit(), 0..3))
            .prop_map(|(name, l)| Decl::QSet { name, body: QSetBody::Classical(l) }),
        (ident(), prop::collection::vec(sort(), 0..3), blocks()).prop_map(|(name, sorts, blocks)| Decl::Rel { name, sorts, blocks }),
        (ident(), sort(), sort(), blocks()).prop_map(|(name, dom, cod, blocks)| Decl::BinRel { name, dom, cod, blocks }),
        (ident(), sort(), sort(), blocks()).prop_map(|(name, dom, cod, blocks)| Decl::Fn { name, dom, cod, blocks }),
        (ident(), sort(), blocks()).prop_map(|(name, sort, blocks)| Decl::Const { name, sort, blocks }),
        (ident(), formula()).prop_map(|(name, body)| Decl::Formula { name, body }),
        (ident(), any::<bool>()).prop_map(|(name, expect)| Decl::Assert { name, expect, span: Span::default() }),
        (kind, prop::collection::vec(ident(), 1..4))
            .prop_map(|(kind, names)| Decl::Verify { kind, kind_span: Span::default(), names }),
        (ident(), sort(), prop::collection::vec((number(), ident()), 0..3)).prop_map(|(name, sort, es)| Decl::Metric {
            name,
            sort,
            entries: es
                .into_iter()
                .map(|(v, rel)| MetricEntry { value: Number { value: v, span: Span::default() }, rel })
                .collect()
        }),
        (
            ident(),
            index(),
            prop::collection::vec(strlit(), 0..3),
            prop::collection::vec(strlit(), 0..3),
            prop::collection::vec((index(), index(), matrix()), 0..3)
        )
            .prop_map(|(name, dim, rows, cols, es)| Decl::Family {
                name,
                dim,
                rows,
                cols,
                entries: es.into_iter().map(|(row, col, mat)| FamilyEntry { row, col, mat }).collect()
            }),
        (ident(), prop::collection::vec(strlit(), 0..3), prop::collection::vec((index(), index()), 0..3))
            .prop_map(|(name, vertices, edges)| Decl::Graph { name, vertices, edges }),
        (ident(), prop::collection::vec(strlit(), 0..3), prop::collection::vec(prop::collection::vec(index(), 0..3), 0..3), index())
            .prop_map(|(name, elements, table, unit)| Decl::Group { name, elements, body: GroupBody::Table { table, unit } }),
        (ident(), prop::collection::vec(strlit(), 0..3), prop::collection::vec(prop::collection::vec(matrix(), 0..2), 1..3))
            .prop_map(|(name, elements, irreps)| Decl::Group {
                name,
                elements,
                body: GroupBody::Irreps(irreps.into_iter().map(|m| (m, Span::default())).collect())
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_fixpoint(decls in prop::collection::vec(decl(), 0..6)) {
        let ast = WorkspaceAst { decls };
        let text = print::workspace(&ast);
        let back = parse_workspace(&Source::new(&text));
        prop_assert!(back.is_ok(), "{:?}\n{}", back.err(), text);
        let back = back.unwrap();
        prop_assert_eq!(&back, &ast);
        prop_assert_eq!(print::workspace(&back), text);
    }

    #[test]
    fn diagnostic_spans_lie_in_the_text(cut in 0usize..400, junk in "[ -~\n]{0,4}") {
        let mut text = EXAMPLE.to_string();
        let mut at = cut.min(text.len());
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        text.insert_str(at, &junk);
        if let Err(ds) = load(&text) {
            for d in &ds {
                prop_assert!(d.span.start <= d.span.end && d.span.end <= text.len(), "{:?}", d);
                prop_assert!(d.start.line >= 1 && d.start.col >= 1);
            }
            let out = format_diagnostics("t.qrel", &ds);
            prop_assert_eq!(out.lines().count(), ds.len());
        }
    }
}

const EXAMPLE: &str = r#"# two-atom example
qset X { atoms = [1, 2] }
rel R : X -> X {
  block (0, 0) = [[[[1, 0]]]]
  block (1, 1) = [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]
}
formula refl := forall x == xs in X . R(x, xs)
formula sym := forall x in X . forall y in X* . R(x, y) -> ~R(y, x)
assert refl is true
verify graph R
"#;

#[test]
fn example_loads_and_checks() {
    let (ast, ws) = load(EXAMPLE).unwrap();
    assert_eq!(ast.decls.len(), 6);
    assert_eq!(ws.formulas.len(), 2);
    let rep = ws.verify(VerifyKind::Graph, &["R".to_string()]).unwrap();
    assert!(rep.passed);
}

#[test]
fn one_parse_error_gives_one_line() {
    let ds = load("qset X { atoms = [2] }\nformula f := forall x in X R(x)").unwrap_err();
    let out = format_diagnostics("w.qrel", &ds);
    assert_eq!(out, "w.qrel:2:28: error: expected `.`, found `R`\n");
}

#[test]
fn nonduplication_cites_variable() {
    let ds = load("qset X { atoms = [2] }\nrel P : (X, X) { }\nformula f := exists y in X . P(y, y)").unwrap_err();
    let out = format_diagnostics("w.qrel", &ds);
    assert!(out.starts_with("w.qrel:3:30: error: variable `y` occurs more than once"), "{out}");
}
