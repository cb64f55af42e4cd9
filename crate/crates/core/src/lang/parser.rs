use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::Diagnostic;
use crate::graph::Kind;

/// Words that cannot name a domain, graph, diagram or neuron.
pub const RESERVED: &[&str] = &[
    "values", "graph", "diagram", "over", "outputs", "input", "inhib", "unless", "kind",
];

const MAX_NESTING: usize = 128;
/// Most syntax nodes in one description; bounds the tree depth as well.
const MAX_NODES: usize = 1024;

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    nodes: usize,
}

/// Parse a whole file. On failure every item that could not be parsed
/// contributes one error.
pub fn parse(text: &str) -> Result<SourceFile, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
        nodes: 0,
    };
    let mut items = Vec::new();
    let mut errors = Vec::new();
    while !p.at(&Tok::Eof) {
        match p.item() {
            Ok(item) => items.push(item),
            Err(d) => {
                errors.push(d);
                p.recover();
            }
        }
    }
    if errors.is_empty() {
        Ok(SourceFile { items })
    } else {
        Err(errors)
    }
}

fn is_item_keyword(t: &Tok) -> bool {
    matches!(t, Tok::Ident(s) if s == "values" || s == "graph" || s == "diagram")
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(
            format!("expected {wanted}, found {}", t.tok.describe()),
            t.span,
        )
    }

    fn expect(&mut self, t: Tok) -> PResult<Token> {
        if self.at(&t) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    /// Any identifier, reserved or not.
    fn word(&mut self, what: &str) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let name = s.clone();
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// An identifier that is not a reserved word.
    fn name(&mut self, what: &str) -> PResult<Ident> {
        let id = self.word(what)?;
        if RESERVED.contains(&id.name.as_str()) {
            return Err(Diagnostic::error(
                format!(
                    "`{}` is a reserved word and cannot be used as {what}",
                    id.name
                ),
                id.span,
            ));
        }
        Ok(id)
    }

    fn names(&mut self, what: &str) -> PResult<Vec<Ident>> {
        let mut out = vec![self.name(what)?];
        while self.eat(&Tok::Comma) {
            out.push(self.name(what)?);
        }
        Ok(out)
    }

    /// Skip to the start of the next item.
    fn recover(&mut self) {
        self.bump();
        while !self.at(&Tok::Eof) && !is_item_keyword(&self.peek().tok) {
            self.bump();
        }
    }

    fn item(&mut self) -> PResult<Item> {
        if self.at_word("values") {
            self.values_decl().map(Item::Values)
        } else if self.at_word("graph") {
            self.graph_decl().map(Item::Graph)
        } else if self.at_word("diagram") {
            self.diagram_decl().map(Item::Diagram)
        } else {
            Err(self.unexpected("`values`, `graph` or `diagram`"))
        }
    }

    fn values_decl(&mut self) -> PResult<ValuesDecl> {
        self.expect_word("values")?;
        let name = self.name("a domain name")?;
        self.expect(Tok::LBrace)?;
        let mut cases = vec![self.case()?];
        while self.eat(&Tok::Comma) {
            cases.push(self.case()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(ValuesDecl { name, cases })
    }

    fn case(&mut self) -> PResult<CaseDecl> {
        let name = self.name("a case name")?;
        let mut style = Vec::new();
        if self.eat(&Tok::LBracket) {
            style.push(self.attr()?);
            while self.eat(&Tok::Comma) {
                style.push(self.attr()?);
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(CaseDecl { name, style })
    }

    fn attr(&mut self) -> PResult<Attr> {
        let key = self.word("an attribute name")?;
        self.expect(Tok::Eq)?;
        match &self.peek().tok {
            Tok::Str(s) => {
                let value = s.clone();
                let span = key.span.to(self.bump().span);
                Ok(Attr { key, value, span })
            }
            _ => Err(self.unexpected("a string")),
        }
    }

    fn graph_decl(&mut self) -> PResult<GraphDecl> {
        self.expect_word("graph")?;
        let name = self.name("a graph name")?;
        let over = if self.at_word("over") {
            self.bump();
            Some(self.name("a domain name")?)
        } else {
            None
        };
        self.expect(Tok::LBrace)?;
        let mut neurons = Vec::new();
        while !self.at_word("outputs") {
            if self.at(&Tok::RBrace) || self.at(&Tok::Eof) {
                return Err(self.unexpected("`outputs`"));
            }
            neurons.push(self.neuron()?);
        }
        self.bump();
        self.expect(Tok::Colon)?;
        let outputs = self.names("an output neuron")?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;
        Ok(GraphDecl {
            name,
            over,
            neurons,
            outputs,
        })
    }

    fn neuron(&mut self) -> PResult<NeuronDecl> {
        let name = self.name("a neuron name")?;
        self.expect(Tok::Colon)?;
        self.nodes = 0;
        self.depth = 0;
        let desc = self.desc()?;
        self.expect(Tok::Semi)?;
        Ok(NeuronDecl { name, desc })
    }

    fn node(&mut self) -> PResult<()> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return Err(Diagnostic::error(
                "description is too large",
                self.peek().span,
            ));
        }
        Ok(())
    }

    fn desc(&mut self) -> PResult<Desc> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(Diagnostic::error(
                "descriptions nested too deeply",
                self.peek().span,
            ));
        }
        let mut l = self.term()?;
        while self.eat(&Tok::OrOr) {
            self.node()?;
            let r = self.term()?;
            l = Desc::Or(Box::new(l), Box::new(r));
        }
        self.depth -= 1;
        Ok(l)
    }

    fn term(&mut self) -> PResult<Desc> {
        let mut l = self.atom()?;
        while self.eat(&Tok::AndAnd) {
            self.node()?;
            let r = self.atom()?;
            l = Desc::And(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn atom(&mut self) -> PResult<Desc> {
        let mut d = self.primary()?;
        loop {
            if self.at_word("inhib") || self.at_word("unless") || self.at_word("kind") {
                self.node()?;
            }
            if self.at_word("inhib") || self.at_word("unless") {
                let keyword = self.word("a modifier")?;
                self.expect(Tok::LParen)?;
                let names = self.names("a neuron name")?;
                self.expect(Tok::RParen)?;
                d = Desc::Inhib {
                    base: Box::new(d),
                    keyword,
                    names,
                };
            } else if self.at_word("kind") {
                let kw = self.bump().span;
                let k = self.word("`action` or `law`")?;
                let kind = match k.name.as_str() {
                    "action" => Kind::Action,
                    "law" => Kind::Law,
                    _ => {
                        return Err(Diagnostic::error(
                            format!("expected `action` or `law`, found `{}`", k.name),
                            k.span,
                        ))
                    }
                };
                d = Desc::Kind {
                    base: Box::new(d),
                    kind,
                    span: kw.to(k.span),
                };
            } else {
                return Ok(d);
            }
        }
    }

    fn primary(&mut self) -> PResult<Desc> {
        self.node()?;
        if self.at(&Tok::LParen) {
            self.bump();
            let d = self.desc()?;
            self.expect(Tok::RParen)?;
            return Ok(d);
        }
        if self.at_word("input") {
            return Ok(Desc::Input(self.bump().span));
        }
        if self.at_word("inhib") || self.at_word("unless") || self.at_word("kind") {
            let t = self.peek();
            return Err(Diagnostic::error(
                format!(
                    "{} is a modifier and must follow a description",
                    t.tok.describe()
                ),
                t.span,
            ));
        }
        let builder = self.name("a description")?;
        self.expect(Tok::LParen)?;
        let threshold = match self.peek().tok {
            Tok::Nat(k) => {
                self.bump();
                self.expect(Tok::Semi)?;
                Some(k)
            }
            _ => None,
        };
        let args = self.names("an argument")?;
        let close = self.expect(Tok::RParen)?.span;
        let span = builder.span.to(close);
        Ok(Desc::Call {
            builder,
            threshold,
            args,
            span,
        })
    }

    fn diagram_decl(&mut self) -> PResult<DiagramDecl> {
        self.expect_word("diagram")?;
        let name = self.name("a diagram name")?;
        self.expect(Tok::Eq)?;
        let graph = self.name("a graph name")?;
        self.expect(Tok::LParen)?;
        let values = if self.at(&Tok::RParen) {
            Vec::new()
        } else {
            self.names("a value")?
        };
        self.expect(Tok::RParen)?;
        self.expect(Tok::Semi)?;
        Ok(DiagramDecl {
            name,
            graph,
            values,
        })
    }
}
