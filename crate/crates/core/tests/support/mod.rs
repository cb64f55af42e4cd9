//! Shared test helpers: random graph generators and a small DOT checker.
#![allow(dead_code)]

use std::sync::Arc;

use ncause_core::desc::{self, Description, FiringFunction, Identity};
use ncause_core::style::Style;
use ncause_core::{Diagram, Graph, GraphBuilder, Kind, NeuronName, Value, ValueDomain};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn tri() -> Arc<ValueDomain> {
    Arc::new(
        ValueDomain::declare(
            "Tri",
            [
                ("Zero", Style::new()),
                ("One", ncause_core::style::fill_with("yellow")),
                ("Two", ncause_core::style::fill_with("blue")),
            ],
        )
        .unwrap(),
    )
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// An arbitrary total function over `domain`, fixed by `seed`.
pub fn table_fire(domain: &ValueDomain, arity: usize, seed: u64) -> FiringFunction {
    let size = domain.size();
    let values: Vec<Value> = domain.enumerate().collect();
    FiringFunction::new(arity, move |vs| {
        let key = vs
            .iter()
            .fold(seed, |acc, v| splitmix(acc ^ v.index() as u64));
        values[(key % size as u64) as usize]
    })
}

pub fn table_desc(domain: &ValueDomain, ns: &[NeuronName], seed: u64) -> Description {
    Description::new(
        Kind::Law,
        Some(table_fire(domain, ns.len(), seed)),
        Style::new(),
        desc::plain(ns),
        Identity::new("table").param(seed),
    )
    .unwrap()
    .over(domain)
}

/// A description over `ns` for local-cause checks: a builder chosen by
/// `choice`, falling back to a random table.
pub fn local_desc(domain: &ValueDomain, ns: &[NeuronName], choice: u8, seed: u64) -> Description {
    let k = ns.len() as u32;
    let built = match (choice, domain.is_bool()) {
        (0, _) => desc::stim_by(domain, ns),
        (1, true) => desc::thick(domain, (seed % k as u64) as u32 + 1, ns),
        (2, true) => desc::xor(domain, ns),
        (3, true) => desc::unstim_by(domain, ns),
        (1..=3, false) => desc::by_rank(domain, ns),
        (4, _) if k > 1 => {
            desc::inhib_by(desc::stim_by(domain, &ns[..1]).unwrap(), domain, &ns[1..])
        }
        _ => Ok(table_desc(domain, ns, seed)),
    };
    built.unwrap()
}

#[derive(Clone, Debug)]
pub struct NeuronSpec {
    pub op: u8,
    pub preds: Vec<Index>,
    pub action: bool,
    pub k: u32,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct GraphSpec {
    pub tri: bool,
    pub inputs: usize,
    pub neurons: Vec<NeuronSpec>,
    pub extra_terminal: Option<Index>,
}

pub fn graph_spec() -> impl Strategy<Value = GraphSpec> {
    let neuron = (
        0u8..9,
        prop::collection::vec(any::<Index>(), 1..=3),
        prop::bool::weighted(0.2),
        1u32..=3,
        any::<u64>(),
    )
        .prop_map(|(op, preds, action, k, seed)| NeuronSpec {
            op,
            preds,
            action,
            k,
            seed,
        });
    (
        any::<bool>(),
        1usize..=3,
        prop::collection::vec(neuron, 1..=5),
        prop::option::of(any::<Index>()),
    )
        .prop_map(|(tri, inputs, neurons, extra_terminal)| GraphSpec {
            tri,
            inputs,
            neurons,
            extra_terminal,
        })
}

pub fn nm(s: &str) -> NeuronName {
    NeuronName::new(s).unwrap()
}

impl GraphSpec {
    pub fn domain(&self) -> Arc<ValueDomain> {
        if self.tri {
            tri()
        } else {
            ValueDomain::boolean()
        }
    }

    fn name(&self, i: usize) -> NeuronName {
        if i < self.inputs {
            nm(&format!("I{i}"))
        } else {
            nm(&format!("N{}", i - self.inputs))
        }
    }

    fn describe(&self, pos: usize, n: &NeuronSpec, d: &ValueDomain) -> Description {
        let ns: Vec<NeuronName> = n.preds.iter().map(|ix| self.name(ix.index(pos))).collect();
        let head = &ns[..1];
        let tail = &ns[1..];
        let stim = || desc::stim_by(d, &ns).unwrap();
        let base = match (n.op, d.is_bool()) {
            (0, _) => stim(),
            (1, true) => desc::unstim_by(d, &ns).unwrap(),
            (2, true) => desc::xor(d, &ns).unwrap(),
            (3, true) => desc::thick(d, n.k.min(ns.len() as u32), &ns).unwrap(),
            (4, _) if !tail.is_empty() => {
                desc::inhib_by(desc::stim_by(d, head).unwrap(), d, tail).unwrap()
            }
            (5, true) if !tail.is_empty() => desc::or(
                desc::stim_by(d, head).unwrap(),
                desc::unstim_by(d, tail).unwrap(),
            )
            .unwrap(),
            (5, false) => desc::by_rank(d, &ns).unwrap(),
            (6, _) => desc::constant(d, d.value(n.k as usize % d.size())).unwrap(),
            (7, true) if !tail.is_empty() => {
                desc::and(desc::xor(d, head).unwrap(), desc::stim_by(d, tail).unwrap()).unwrap()
            }
            (8, _) => table_desc(d, &ns, n.seed),
            _ => stim(),
        };
        if n.action {
            desc::is_kind(base, Kind::Action)
        } else {
            base
        }
    }

    pub fn build(&self) -> Arc<Graph> {
        let d = self.domain();
        let mut b = GraphBuilder::new(d.clone());
        for i in 0..self.inputs {
            b.add(self.name(i), desc::input());
        }
        for (j, n) in self.neurons.iter().enumerate() {
            let pos = self.inputs + j;
            b.add(self.name(pos), self.describe(pos, n, &d));
        }
        let last = self.inputs + self.neurons.len() - 1;
        b.add_terminal(self.name(last));
        if let Some(ix) = &self.extra_terminal {
            let t = ix.index(last);
            b.add_terminal(self.name(t));
        }
        Arc::new(b.build().expect("generated graphs are valid"))
    }
}

/// A graph plus a valid input vector for it.
pub fn graph_and_inputs() -> impl Strategy<Value = (Arc<Graph>, Vec<Value>)> {
    graph_spec().prop_flat_map(|spec| {
        let g = spec.build();
        let size = g.domain().size();
        let n = g.input_order().len();
        (Just(g), prop::collection::vec(0..size, n..=n)).prop_map(|(g, idx)| {
            let vals = idx.into_iter().map(|i| g.domain().value(i)).collect();
            (g, vals)
        })
    })
}

pub fn diagram() -> impl Strategy<Value = Diagram> {
    graph_and_inputs().prop_map(|(g, v)| Diagram::new(g, v).unwrap())
}

/// Parsed DOT digraph: node ids with attributes, edges with attributes.
#[derive(Debug, Default)]
pub struct DotGraph {
    pub nodes: Vec<(String, Attrs)>,
    pub edges: Vec<(String, String, Attrs)>,
}

pub type Attrs = Vec<(String, String)>;

impl DotGraph {
    pub fn node_attr(&self, node: &str, key: &str) -> Option<&str> {
        self.nodes
            .iter()
            .filter(|(n, _)| n == node)
            .flat_map(|(_, a)| a.iter())
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .next_back()
    }
}

/// Checks the DOT subset GraphViz accepts for `digraph [ID] { stmt* }` with
/// node, edge, attribute and `ID=ID` statements. Returns the parsed graph or
/// a description of the first problem.
pub fn check_dot(text: &str) -> Result<DotGraph, String> {
    let toks = dot_lex(text)?;
    let mut p = DotParser { toks, pos: 0 };
    let g = p.graph()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq)]
enum DTok {
    Id(String),
    Punct(&'static str),
}

fn dot_lex(text: &str) -> Result<Vec<DTok>, String> {
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match cs.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') if cs.get(i + 1) == Some(&'"') => {
                        s.push('"');
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(DTok::Id(s));
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push(DTok::Punct("->"));
            i += 2;
        } else if let Some(p) = ["{", "}", "[", "]", ";", ",", "="]
            .into_iter()
            .find(|p| p.starts_with(c))
        {
            out.push(DTok::Punct(p));
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                i += 1;
            }
            let s: String = cs[start..i].iter().collect();
            let numeral = s.chars().all(|c| c.is_ascii_digit() || c == '.');
            let ident = !s.starts_with(|c: char| c.is_ascii_digit()) && !s.contains('.');
            if !numeral && !ident {
                return Err(format!("bad identifier `{s}`"));
            }
            out.push(DTok::Id(s));
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct DotParser {
    toks: Vec<DTok>,
    pos: usize,
}

impl DotParser {
    fn peek(&self) -> Option<&DTok> {
        self.toks.get(self.pos)
    }

    fn punct(&mut self, p: &str) -> Result<(), String> {
        match self.peek() {
            Some(DTok::Punct(q)) if *q == p => {
                self.pos += 1;
                Ok(())
            }
            other => Err(format!("expected `{p}`, found {other:?}")),
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(DTok::Punct(q)) if *q == p)
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(DTok::Id(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => Err(format!("expected an ID, found {other:?}")),
        }
    }

    fn graph(&mut self) -> Result<DotGraph, String> {
        let kw = self.id()?;
        if kw != "digraph" {
            return Err(format!("expected `digraph`, found `{kw}`"));
        }
        if !self.is_punct("{") {
            self.id()?;
        }
        self.punct("{")?;
        let mut g = DotGraph::default();
        while !self.is_punct("}") {
            self.stmt(&mut g)?;
            if self.is_punct(";") {
                self.pos += 1;
            }
        }
        self.punct("}").map(|_| g)
    }

    fn attrs(&mut self) -> Result<Attrs, String> {
        let mut out = Vec::new();
        while self.is_punct("[") {
            self.pos += 1;
            while !self.is_punct("]") {
                let k = self.id()?;
                self.punct("=")?;
                let v = self.id()?;
                out.push((k, v));
                if self.is_punct(",") || self.is_punct(";") {
                    self.pos += 1;
                }
            }
            self.punct("]")?;
        }
        Ok(out)
    }

    fn stmt(&mut self, g: &mut DotGraph) -> Result<(), String> {
        let first = self.id()?;
        if ["graph", "node", "edge"].contains(&first.as_str()) && self.is_punct("[") {
            self.attrs()?;
            return Ok(());
        }
        if self.is_punct("=") {
            self.pos += 1;
            self.id()?;
            return Ok(());
        }
        let mut chain = vec![first];
        while self.is_punct("->") {
            self.pos += 1;
            chain.push(self.id()?);
        }
        let attrs = self.attrs()?;
        if chain.len() == 1 {
            g.nodes.push((chain.remove(0), attrs));
        } else {
            for w in chain.windows(2) {
                g.edges.push((w[0].clone(), w[1].clone(), attrs.clone()));
            }
        }
        Ok(())
    }
}
