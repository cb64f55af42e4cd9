//! Firing semantics: evaluating diagrams and tabulating what a graph computes.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Diagram, Graph, GraphError, NeuronId, NeuronName};
use crate::values::{Value, ValueDomain};

/// Enumerating more input tuples than this requires an explicit override.
pub const ENUMERATION_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {inputs} inputs over {domain_size} values: more than {limit} diagrams")]
    TooManyDiagrams {
        inputs: usize,
        domain_size: usize,
        limit: usize,
    },
}

/// A value for every neuron of a graph, indexed by [`NeuronId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    values: Vec<Value>,
}

impl Valuation {
    pub fn get(&self, id: NeuronId) -> Value {
        self.values[id.index()]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }
}

/// Evaluate every neuron once, in topological order.
pub fn evaluate(d: &Diagram) -> Valuation {
    evaluate_in(d.graph(), d.inputs(), d.graph().topo_order())
}

/// Evaluate following `order`, which must list every neuron after all of
/// its predecessors. Panics otherwise.
pub fn evaluate_in_order(d: &Diagram, order: &[NeuronId]) -> Valuation {
    evaluate_in(d.graph(), d.inputs(), order)
}

fn evaluate_in(g: &Graph, inputs: &[Value], order: &[NeuronId]) -> Valuation {
    let mut slots: Vec<Option<Value>> = vec![None; g.len()];
    for (id, v) in g.input_order().iter().zip(inputs) {
        slots[id.index()] = Some(*v);
    }
    let mut args = Vec::new();
    for &id in order {
        let Some(fire) = g.neuron(id).desc().fire() else {
            continue;
        };
        args.clear();
        args.extend(
            g.preds(id)
                .iter()
                .map(|p| slots[p.index()].expect("predecessor evaluated before its successor")),
        );
        slots[id.index()] = Some(fire.call(&args));
    }
    Valuation {
        values: slots
            .into_iter()
            .map(|v| v.expect("every neuron evaluated"))
            .collect(),
    }
}

/// Value of the named neuron in `d`.
pub fn state_in(name: &str, d: &Diagram) -> Result<Value, GraphError> {
    let id = d
        .graph()
        .id_of(name)
        .ok_or_else(|| GraphError::NameNotFound(name.to_string()))?;
    Ok(evaluate(d).get(id))
}

/// Terminal values for one input vector, in terminal order.
pub fn as_function(g: &Graph, inputs: &[Value]) -> Result<Vec<Value>, GraphError> {
    g.check_inputs(inputs)?;
    let val = evaluate_in(g, inputs, g.topo_order());
    Ok(g.terminals().iter().map(|&t| val.get(t)).collect())
}

/// A neuron paired with a value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub neuron: NeuronName,
    pub value: Value,
}

impl Literal {
    /// `Name:Case`
    pub fn show(&self, domain: &ValueDomain) -> String {
        format!("{}:{}", self.neuron, domain.show(self.value))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectRow {
    pub inputs: Vec<Literal>,
    pub outputs: Vec<Literal>,
}

/// The firing semantics of a graph: one row per input tuple, in canonical
/// order (lexicographic, last input varying fastest).
#[derive(Clone, Debug)]
pub struct Effects {
    domain: Arc<ValueDomain>,
    rows: Vec<EffectRow>,
}

impl Effects {
    pub fn rows(&self) -> &[EffectRow] {
        &self.rows
    }

    pub fn domain(&self) -> &Arc<ValueDomain> {
        &self.domain
    }
}

impl PartialEq for Effects {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

fn write_literals(f: &mut fmt::Formatter<'_>, d: &ValueDomain, lits: &[Literal]) -> fmt::Result {
    f.write_str("[")?;
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(&l.show(d))?;
    }
    f.write_str("]")
}

/// One row per line: `[Gen:False,Maj:True] -> [Pvt:True]`.
impl fmt::Display for Effects {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write_literals(f, &self.domain, &row.inputs)?;
            f.write_str(" -> ")?;
            write_literals(f, &self.domain, &row.outputs)?;
        }
        Ok(())
    }
}

/// Number of diagrams `g` generates, refusing anything over `limit`.
pub fn diagram_count(g: &Graph, limit: usize) -> Result<usize, EvalError> {
    let inputs = g.input_order().len();
    let domain_size = g.domain().size();
    match g.domain().tuple_count(inputs) {
        Some(n) if n <= limit => Ok(n),
        _ => Err(EvalError::TooManyDiagrams {
            inputs,
            domain_size,
            limit,
        }),
    }
}

pub fn effects(g: &Graph) -> Result<Effects, EvalError> {
    effects_with_limit(g, ENUMERATION_LIMIT)
}

pub fn effects_with_limit(g: &Graph, limit: usize) -> Result<Effects, EvalError> {
    diagram_count(g, limit)?;
    let name = |id: NeuronId| g.name(id).clone();
    let rows = g
        .domain()
        .tuples(g.input_order().len())
        .map(|tuple| {
            let val = evaluate_in(g, &tuple, g.topo_order());
            EffectRow {
                inputs: g
                    .input_order()
                    .iter()
                    .zip(&tuple)
                    .map(|(&id, &value)| Literal {
                        neuron: name(id),
                        value,
                    })
                    .collect(),
                outputs: g
                    .terminals()
                    .iter()
                    .map(|&t| Literal {
                        neuron: name(t),
                        value: val.get(t),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(Effects {
        domain: g.domain().clone(),
        rows,
    })
}

/// Every diagram generable from `g`, in the same order as [`effects`] rows.
pub fn all_diagrams(g: &Arc<Graph>) -> Result<Vec<Diagram>, EvalError> {
    all_diagrams_with_limit(g, ENUMERATION_LIMIT)
}

pub fn all_diagrams_with_limit(g: &Arc<Graph>, limit: usize) -> Result<Vec<Diagram>, EvalError> {
    diagram_count(g, limit)?;
    g.domain()
        .tuples(g.input_order().len())
        .map(|t| Diagram::new(g.clone(), t).map_err(EvalError::from))
        .collect()
}
