//! Neurons, graphs and diagrams, with the structural queries over them.
//!
//! A [`Graph`] is identified by its terminal neurons; every neuron reachable
//! upstream from a terminal belongs to it. Building a graph validates it
//! (unique names, resolvable edges, no cycles) and precomputes the orders the
//! rest of the crate relies on:
//!
//! * topological order, ties broken by declaration order;
//! * traversal order, a pre-order depth-first walk from the terminals in list
//!   order visiting predecessors in edge order, deduplicated on first
//!   encounter;
//! * input order, the input neurons in traversal order. Diagram input vectors
//!   bind to neurons in this order.

use std::borrow::Borrow;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::desc::Description;
use crate::style::Style;
use crate::values::{Value, ValueDomain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("`{0}` is not a valid neuron name")]
    InvalidName(String),
    #[error("a graph needs at least one terminal neuron")]
    EmptyTerminals,
    #[error("neuron `{0}` is declared more than once")]
    DuplicateName(NeuronName),
    #[error("unknown neuron `{name}` referenced by `{referenced_by}`")]
    UnknownNeuron { name: String, referenced_by: String },
    #[error("cycle through {}", display_cycle(.0))]
    Cycle(Vec<NeuronName>),
    #[error(
        "neuron `{neuron}` is described over domain `{found}` but the graph is over `{expected}`"
    )]
    DomainMismatch {
        neuron: NeuronName,
        expected: String,
        found: String,
    },
    #[error("neuron `{neuron}` has {edges} edges but its firing function takes {arity} values")]
    InconsistentArity {
        neuron: NeuronName,
        edges: usize,
        arity: usize,
    },
    #[error("no neuron named `{0}` in the graph")]
    NameNotFound(String),
    #[error("expected {expected} input values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("input value {position} does not belong to domain `{domain}`")]
    Domain { position: usize, domain: String },
}

fn display_cycle(names: &[NeuronName]) -> String {
    let mut parts: Vec<&str> = names.iter().map(NeuronName::as_str).collect();
    if let Some(first) = names.first() {
        parts.push(first.as_str());
    }
    parts.join(" -> ")
}

/// A neuron identifier: `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronName(String);

impl NeuronName {
    pub fn new(name: impl Into<String>) -> Result<Self, GraphError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(NeuronName(name))
        } else {
            Err(GraphError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for NeuronName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for NeuronName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for NeuronName {
    type Error = GraphError;

    fn try_from(s: &str) -> Result<Self, GraphError> {
        NeuronName::new(s)
    }
}

/// Actions are potential causes and stop causal-chain expansion; laws are
/// hard-wired relationships.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Action,
    Law,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Action => "action",
            Kind::Law => "law",
        })
    }
}

/// An incoming edge. The destination is the neuron owning the description.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub source: NeuronName,
    pub style: Style,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Neuron {
    name: NeuronName,
    desc: Description,
}

impl Neuron {
    pub fn new(name: NeuronName, desc: Description) -> Self {
        Neuron { name, desc }
    }

    pub fn name(&self) -> &NeuronName {
        &self.name
    }

    pub fn desc(&self) -> &Description {
        &self.desc
    }

    pub fn kind(&self) -> Kind {
        self.desc.kind()
    }

    /// No firing function: the value comes from the diagram's input vector.
    pub fn is_input(&self) -> bool {
        self.desc.fire().is_none()
    }

    pub fn is_exo(&self) -> bool {
        self.desc.edges().is_empty()
    }

    pub fn is_endo(&self) -> bool {
        !self.is_exo()
    }
}

/// Index of a neuron inside one particular [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronId(usize);

impl NeuronId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct GraphBuilder {
    domain: Arc<ValueDomain>,
    neurons: Vec<Neuron>,
    terminals: Vec<NeuronName>,
}

impl GraphBuilder {
    pub fn new(domain: Arc<ValueDomain>) -> Self {
        GraphBuilder {
            domain,
            neurons: Vec::new(),
            terminals: Vec::new(),
        }
    }

    pub fn boolean() -> Self {
        Self::new(ValueDomain::boolean())
    }

    pub fn neuron(mut self, name: NeuronName, desc: Description) -> Self {
        self.neurons.push(Neuron::new(name, desc));
        self
    }

    pub fn terminal(mut self, name: NeuronName) -> Self {
        self.terminals.push(name);
        self
    }

    pub fn add(&mut self, name: NeuronName, desc: Description) {
        self.neurons.push(Neuron::new(name, desc));
    }

    pub fn add_terminal(&mut self, name: NeuronName) {
        self.terminals.push(name);
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        Graph::validate(self.domain, self.neurons, self.terminals)
    }
}

/// A validated, immutable neuron graph.
#[derive(Clone, Debug)]
pub struct Graph {
    domain: Arc<ValueDomain>,
    neurons: Vec<Neuron>,
    by_name: HashMap<NeuronName, NeuronId>,
    preds: Vec<Vec<NeuronId>>,
    terminals: Vec<NeuronId>,
    topo: Vec<NeuronId>,
    traversal: Vec<NeuronId>,
    rank: Vec<usize>,
    inputs: Vec<NeuronId>,
    excluded: Vec<NeuronName>,
}

impl Graph {
    /// Check a candidate graph and attach its derived orders. Declared neurons
    /// not reachable from any terminal are dropped and reported by
    /// [`Graph::excluded`].
    pub fn validate(
        domain: Arc<ValueDomain>,
        declared: Vec<Neuron>,
        terminals: Vec<NeuronName>,
    ) -> Result<Graph, GraphError> {
        if terminals.is_empty() {
            return Err(GraphError::EmptyTerminals);
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, n) in declared.iter().enumerate() {
            if index.insert(n.name.as_str(), i).is_some() {
                return Err(GraphError::DuplicateName(n.name.clone()));
            }
        }
        for (i, t) in terminals.iter().enumerate() {
            if terminals[..i].contains(t) {
                return Err(GraphError::DuplicateName(t.clone()));
            }
        }
        for n in &declared {
            if let Some(d) = n.desc.domain() {
                if d != domain.id() {
                    return Err(GraphError::DomainMismatch {
                        neuron: n.name.clone(),
                        expected: domain.name().to_string(),
                        found: n.desc.domain_name().unwrap_or("?").to_string(),
                    });
                }
            }
            if let Some(f) = n.desc.fire() {
                if f.arity() != n.desc.edges().len() {
                    return Err(GraphError::InconsistentArity {
                        neuron: n.name.clone(),
                        edges: n.desc.edges().len(),
                        arity: f.arity(),
                    });
                }
            }
            for e in n.desc.edges() {
                if !index.contains_key(e.source.as_str()) {
                    return Err(GraphError::UnknownNeuron {
                        name: e.source.to_string(),
                        referenced_by: n.name.to_string(),
                    });
                }
            }
        }
        let mut term_idx = Vec::with_capacity(terminals.len());
        for t in &terminals {
            match index.get(t.as_str()) {
                Some(&i) => term_idx.push(i),
                None => {
                    return Err(GraphError::UnknownNeuron {
                        name: t.to_string(),
                        referenced_by: "outputs".into(),
                    })
                }
            }
        }
        let decl_preds: Vec<Vec<usize>> = declared
            .iter()
            .map(|n| {
                n.desc
                    .edges()
                    .iter()
                    .map(|e| index[e.source.as_str()])
                    .collect()
            })
            .collect();

        if let Some(cycle) = find_cycle(&decl_preds) {
            return Err(GraphError::Cycle(
                cycle
                    .into_iter()
                    .map(|i| declared[i].name.clone())
                    .collect(),
            ));
        }

        // Pre-order walk from the terminals over declaration indices.
        let mut seen = vec![false; declared.len()];
        let mut walk = Vec::new();
        for &t in &term_idx {
            preorder(t, &decl_preds, &mut seen, &mut walk);
        }

        // Keep reachable neurons, in declaration order.
        let mut remap = vec![usize::MAX; declared.len()];
        let mut neurons = Vec::new();
        let mut excluded = Vec::new();
        for (i, n) in declared.into_iter().enumerate() {
            if seen[i] {
                remap[i] = neurons.len();
                neurons.push(n);
            } else {
                excluded.push(n.name);
            }
        }
        let preds: Vec<Vec<NeuronId>> = decl_preds
            .iter()
            .enumerate()
            .filter(|(i, _)| seen[*i])
            .map(|(_, ps)| ps.iter().map(|&p| NeuronId(remap[p])).collect())
            .collect();
        let traversal: Vec<NeuronId> = walk.iter().map(|&i| NeuronId(remap[i])).collect();
        let mut rank = vec![0; neurons.len()];
        for (r, id) in traversal.iter().enumerate() {
            rank[id.0] = r;
        }
        let inputs = traversal
            .iter()
            .copied()
            .filter(|id| neurons[id.0].is_input())
            .collect();
        let topo = topo_sort(&preds);
        let by_name = neurons
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.clone(), NeuronId(i)))
            .collect();
        let terminals = term_idx.into_iter().map(|i| NeuronId(remap[i])).collect();

        Ok(Graph {
            domain,
            neurons,
            by_name,
            preds,
            terminals,
            topo,
            traversal,
            rank,
            inputs,
            excluded,
        })
    }

    pub fn domain(&self) -> &Arc<ValueDomain> {
        &self.domain
    }

    /// All neurons, in declaration order.
    pub fn neurons(&self) -> &[Neuron] {
        &self.neurons
    }

    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = NeuronId> {
        (0..self.neurons.len()).map(NeuronId)
    }

    pub fn neuron(&self, id: NeuronId) -> &Neuron {
        &self.neurons[id.0]
    }

    pub fn name(&self, id: NeuronId) -> &NeuronName {
        &self.neurons[id.0].name
    }

    pub fn id_of(&self, name: &str) -> Option<NeuronId> {
        self.by_name.get(name).copied()
    }

    pub fn neuron_in(&self, name: &str) -> Result<&Neuron, GraphError> {
        self.id_of(name)
            .map(|id| self.neuron(id))
            .ok_or_else(|| GraphError::NameNotFound(name.to_string()))
    }

    pub fn terminals(&self) -> &[NeuronId] {
        &self.terminals
    }

    /// Immediate predecessors in edge order, duplicates preserved.
    pub fn preds(&self, id: NeuronId) -> &[NeuronId] {
        &self.preds[id.0]
    }

    /// Every recursive predecessor of `id`, each once, in first-encounter
    /// pre-order. Excludes `id` itself.
    pub fn upstream(&self, id: NeuronId) -> Vec<NeuronId> {
        let mut seen = vec![false; self.neurons.len()];
        seen[id.0] = true;
        let mut out = Vec::new();
        let mut stack: Vec<NeuronId> = self.preds[id.0].iter().rev().copied().collect();
        while let Some(n) = stack.pop() {
            if seen[n.0] {
                continue;
            }
            seen[n.0] = true;
            out.push(n);
            stack.extend(self.preds[n.0].iter().rev());
        }
        out
    }

    pub fn topo_order(&self) -> &[NeuronId] {
        &self.topo
    }

    pub fn traversal_order(&self) -> &[NeuronId] {
        &self.traversal
    }

    /// Position of `id` in [`Graph::traversal_order`].
    pub fn rank(&self, id: NeuronId) -> usize {
        self.rank[id.0]
    }

    pub fn input_order(&self) -> &[NeuronId] {
        &self.inputs
    }

    /// Declared neurons dropped because no terminal reaches them.
    pub fn excluded(&self) -> &[NeuronName] {
        &self.excluded
    }

    /// Check an input vector against this graph's arity and domain.
    pub fn check_inputs(&self, inputs: &[Value]) -> Result<(), GraphError> {
        if inputs.len() != self.inputs.len() {
            return Err(GraphError::Arity {
                expected: self.inputs.len(),
                got: inputs.len(),
            });
        }
        if let Some(position) = inputs.iter().position(|v| !self.domain.contains(*v)) {
            return Err(GraphError::Domain {
                position,
                domain: self.domain.name().to_string(),
            });
        }
        Ok(())
    }
}

/// Structural equality: same domain, same terminal names, and identical
/// descriptions per name. Firing functions are compared through the
/// description identities that produced them.
impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.domain.id() == other.domain.id()
            && self.neurons.len() == other.neurons.len()
            && self
                .terminals
                .iter()
                .map(|&t| self.name(t))
                .eq(other.terminals.iter().map(|&t| other.name(t)))
            && self.neurons.iter().all(|n| {
                other
                    .neuron_in(n.name.as_str())
                    .is_ok_and(|m| m.desc == n.desc)
            })
    }
}

fn preorder(start: usize, preds: &[Vec<usize>], seen: &mut [bool], out: &mut Vec<usize>) {
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        if seen[n] {
            continue;
        }
        seen[n] = true;
        out.push(n);
        stack.extend(preds[n].iter().rev());
    }
}

/// Kahn's algorithm, always releasing the ready neuron declared first.
fn topo_sort(preds: &[Vec<NeuronId>]) -> Vec<NeuronId> {
    let n = preds.len();
    let mut succs = vec![Vec::new(); n];
    let mut pending = vec![0usize; n];
    for (i, ps) in preds.iter().enumerate() {
        for p in ps {
            succs[p.0].push(i);
            pending[i] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| pending[i] == 0).map(Reverse).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        out.push(NeuronId(i));
        for &s in &succs[i] {
            pending[s] -= 1;
            if pending[s] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    out
}

/// Some cycle along predecessor edges, listed in predecessor order.
fn find_cycle(preds: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; preds.len()];
    for root in 0..preds.len() {
        if mark[root] != Mark::New {
            continue;
        }
        // (node, next predecessor position)
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Open;
        while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
            if let Some(&p) = preds[node].get(*pos) {
                *pos += 1;
                match mark[p] {
                    Mark::New => {
                        mark[p] = Mark::Open;
                        stack.push((p, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(n, _)| n == p).unwrap();
                        return Some(stack[start..].iter().map(|&(n, _)| n).collect());
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// A graph together with values for its input neurons, bound in
/// [`Graph::input_order`].
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    graph: Arc<Graph>,
    inputs: Vec<Value>,
}

impl Diagram {
    pub fn new(graph: Arc<Graph>, inputs: Vec<Value>) -> Result<Diagram, GraphError> {
        graph.check_inputs(&inputs)?;
        Ok(Diagram { graph, inputs })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn inputs(&self) -> &[Value] {
        &self.inputs
    }

    /// Same graph, new input vector.
    pub fn change_inputs(&self, inputs: Vec<Value>) -> Result<Diagram, GraphError> {
        Diagram::new(self.graph.clone(), inputs)
    }

    pub fn input_of(&self, id: NeuronId) -> Option<Value> {
        self.graph
            .input_order()
            .iter()
            .position(|&i| i == id)
            .map(|p| self.inputs[p])
    }
}
