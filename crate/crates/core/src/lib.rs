//! Neuron diagrams as a small language: build or parse neuron graphs,
//! evaluate their firing semantics, infer the causes of terminal values by
//! local counterfactual reasoning, and render GraphViz DOT.

pub mod cause;
pub mod desc;
pub mod dot;
pub mod eval;
pub mod graph;
pub mod lang;
pub mod style;
pub mod values;

pub use cause::{Causes, Dnf};
pub use desc::{Description, FiringFunction, Registry};
pub use eval::{Effects, Literal, Valuation};
pub use graph::{
    Diagram, EdgeRef, Graph, GraphBuilder, GraphError, Kind, Neuron, NeuronId, NeuronName,
};
pub use lang::{load, Diagnostic};
pub use style::Style;
pub use values::{Value, ValueDomain, ValueError};
