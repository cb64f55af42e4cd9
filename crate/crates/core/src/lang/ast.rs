//! Syntax tree of `.nd` source files.
//!
//! Every node remembers where it came from, but spans never take part in
//! equality: two trees are equal when they say the same thing.

use std::fmt;

use crate::graph::Kind;

/// A region of the source text. `start`/`end` are byte offsets; `line` and
/// `col` are 1-based and point at `start` (columns count chars).
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Span {
    /// Smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        if other.end <= self.end {
            return self;
        }
        Span {
            end: other.end,
            ..self
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Values(ValuesDecl),
    Graph(GraphDecl),
    Diagram(DiagramDecl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuesDecl {
    pub name: Ident,
    pub cases: Vec<CaseDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseDecl {
    pub name: Ident,
    pub style: Vec<Attr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attr {
    pub key: Ident,
    pub value: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDecl {
    pub name: Ident,
    pub over: Option<Ident>,
    pub neurons: Vec<NeuronDecl>,
    pub outputs: Vec<Ident>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeuronDecl {
    pub name: Ident,
    pub desc: Desc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Desc {
    Input(Span),
    /// A registry builder: `name(args)` or `name(k; args)`.
    Call {
        builder: Ident,
        threshold: Option<u32>,
        args: Vec<Ident>,
        span: Span,
    },
    Or(Box<Desc>, Box<Desc>),
    And(Box<Desc>, Box<Desc>),
    /// `inhib(names)`, or its alias `unless(names)`.
    Inhib {
        base: Box<Desc>,
        keyword: Ident,
        names: Vec<Ident>,
    },
    Kind {
        base: Box<Desc>,
        kind: Kind,
        span: Span,
    },
}

impl Desc {
    pub fn span(&self) -> Span {
        match self {
            Desc::Input(s) => *s,
            Desc::Call { span, .. } => *span,
            Desc::Or(l, r) | Desc::And(l, r) => l.span().to(r.span()),
            Desc::Inhib { base, names, .. } => {
                let end = names.last().map_or(base.span(), |n| n.span);
                base.span().to(end)
            }
            Desc::Kind { base, span, .. } => base.span().to(*span),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramDecl {
    pub name: Ident,
    pub graph: Ident,
    pub values: Vec<Ident>,
}
