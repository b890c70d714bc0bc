//! Surface syntax of .qrel workspaces, as parsed and before name resolution.

use super::diag::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: &str) -> Self {
        Ident {
            name: name.to_string(),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortExpr {
    Name(Ident),
    Unit(Span),
    Dual(Box<SortExpr>, Span),
    Product(Box<SortExpr>, Box<SortExpr>),
}

impl SortExpr {
    pub fn span(&self) -> Span {
        match self {
            SortExpr::Name(i) => i.span,
            SortExpr::Unit(s) | SortExpr::Dual(_, s) => *s,
            SortExpr::Product(a, b) => a.span().to(b.span()),
        }
    }

    /// Product factors, flattened: `X >< (Y >< Z)` has three.
    pub fn factors(&self) -> Vec<&SortExpr> {
        match self {
            SortExpr::Product(a, b) => {
                let mut v = a.factors();
                v.extend(b.factors());
                v
            }
            SortExpr::Unit(_) => Vec::new(),
            other => vec![other],
        }
    }
}

/// A number as written plus its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Number {
    pub value: f64,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Index {
    pub value: usize,
    pub span: Span,
}

/// Row-major matrix of `[re, im]` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixLit {
    pub rows: Vec<Vec<(f64, f64)>>,
    pub span: Span,
}

impl MatrixLit {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.rows.first().map_or(0, Vec::len))
    }
}

/// `block (i, j, ..) = [M, ..]`: the block spanned by the listed matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntry {
    pub index: Vec<Index>,
    pub mats: Vec<MatrixLit>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrLit {
    pub value: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QSetBody {
    Atoms(Vec<Index>),
    Classical(Vec<StrLit>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermExpr {
    Name(Ident),
    App { head: Ident, args: Vec<TermExpr>, span: Span },
    Conj(Box<TermExpr>, Span),
}

impl TermExpr {
    pub fn span(&self) -> Span {
        match self {
            TermExpr::Name(i) => i.span,
            TermExpr::App { span, .. } | TermExpr::Conj(_, span) => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredRef {
    Named(Ident),
    Eq(SortExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Iff,
    Sasaki,
}

impl BinOp {
    pub fn text(self) -> &'static str {
        match self {
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Implies => "->",
            BinOp::Iff => "<->",
            BinOp::Sasaki => "&",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaExpr {
    Const(bool, Span),
    Atom {
        conj: bool,
        pred: PredRef,
        args: Vec<TermExpr>,
        span: Span,
    },
    Not(Box<FormulaExpr>, Span),
    Bin(BinOp, Box<FormulaExpr>, Box<FormulaExpr>),
    Quant {
        q: Quant,
        var: Ident,
        /// Second name of a diagonal pair `x == xs`; it ranges over the dual sort.
        dvar: Option<Ident>,
        sort: SortExpr,
        body: Box<FormulaExpr>,
        span: Span,
    },
}

impl FormulaExpr {
    pub fn span(&self) -> Span {
        match self {
            FormulaExpr::Const(_, s) | FormulaExpr::Not(_, s) => *s,
            FormulaExpr::Atom { span, .. } | FormulaExpr::Quant { span, .. } => *span,
            FormulaExpr::Bin(_, a, b) => a.span().to(b.span()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerifyKind {
    Graph,
    Preorder,
    PosetWeaver,
    PosetNilpotent,
    Function,
    Injective,
    Surjective,
    Metric,
    Pseudometric,
    MagicUnitary,
    HomWitness,
    IsoWitness,
    QuantumGroup,
}

impl VerifyKind {
    pub const ALL: [VerifyKind; 13] = [
        VerifyKind::Graph,
        VerifyKind::Preorder,
        VerifyKind::PosetWeaver,
        VerifyKind::PosetNilpotent,
        VerifyKind::Function,
        VerifyKind::Injective,
        VerifyKind::Surjective,
        VerifyKind::Metric,
        VerifyKind::Pseudometric,
        VerifyKind::MagicUnitary,
        VerifyKind::HomWitness,
        VerifyKind::IsoWitness,
        VerifyKind::QuantumGroup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerifyKind::Graph => "graph",
            VerifyKind::Preorder => "preorder",
            VerifyKind::PosetWeaver => "poset-weaver",
            VerifyKind::PosetNilpotent => "poset-nilpotent",
            VerifyKind::Function => "function",
            VerifyKind::Injective => "injective",
            VerifyKind::Surjective => "surjective",
            VerifyKind::Metric => "metric",
            VerifyKind::Pseudometric => "pseudometric",
            VerifyKind::MagicUnitary => "magic-unitary",
            VerifyKind::HomWitness => "hom-witness",
            VerifyKind::IsoWitness => "iso-witness",
            VerifyKind::QuantumGroup => "quantum-group",
        }
    }

    pub fn parse(s: &str) -> Option<VerifyKind> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }
}

/// `metric M : X { value = R .. }` entry.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEntry {
    pub value: Number,
    pub rel: Ident,
}

/// `entry (a, b) = M` of a projection family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    pub row: Index,
    pub col: Index,
    pub mat: MatrixLit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupBody {
    /// Classical group or monoid from its multiplication table.
    Table { table: Vec<Vec<Index>>, unit: Index },
    /// Dual of a finite group given by its irreducible representations,
    /// one matrix per element in element order.
    Irreps(Vec<(Vec<MatrixLit>, Span)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    QSet {
        name: Ident,
        body: QSetBody,
    },
    /// Relation of arity `sorts`.
    Rel {
        name: Ident,
        sorts: Vec<SortExpr>,
        blocks: Vec<BlockEntry>,
    },
    /// Binary relation `dom -> cod`, stored as its bend of arity (dom, cod*).
    BinRel {
        name: Ident,
        dom: SortExpr,
        cod: SortExpr,
        blocks: Vec<BlockEntry>,
    },
    Fn {
        name: Ident,
        dom: SortExpr,
        cod: SortExpr,
        blocks: Vec<BlockEntry>,
    },
    /// Nullary function `1 -> sort`.
    Const {
        name: Ident,
        sort: SortExpr,
        blocks: Vec<BlockEntry>,
    },
    Formula {
        name: Ident,
        body: FormulaExpr,
    },
    Assert {
        name: Ident,
        expect: bool,
        span: Span,
    },
    Verify {
        kind: VerifyKind,
        kind_span: Span,
        names: Vec<Ident>,
    },
    Metric {
        name: Ident,
        sort: SortExpr,
        entries: Vec<MetricEntry>,
    },
    Family {
        name: Ident,
        dim: Index,
        rows: Vec<StrLit>,
        cols: Vec<StrLit>,
        entries: Vec<FamilyEntry>,
    },
    Graph {
        name: Ident,
        vertices: Vec<StrLit>,
        edges: Vec<(Index, Index)>,
    },
    Group {
        name: Ident,
        elements: Vec<StrLit>,
        body: GroupBody,
    },
}

impl Decl {
    pub fn keyword(&self) -> &'static str {
        match self {
            Decl::QSet { .. } => "qset",
            Decl::Rel { .. } | Decl::BinRel { .. } => "rel",
            Decl::Fn { .. } => "fn",
            Decl::Const { .. } => "const",
            Decl::Formula { .. } => "formula",
            Decl::Assert { .. } => "assert",
            Decl::Verify { .. } => "verify",
            Decl::Metric { .. } => "metric",
            Decl::Family { .. } => "family",
            Decl::Graph { .. } => "graph",
            Decl::Group { .. } => "group",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WorkspaceAst {
    pub decls: Vec<Decl>,
}
