//! GraphViz output. Diagrams are filled by value; graphs are drawn dashed
//! and never filled. Law neurons get a ` §` label suffix.

use std::fmt::Write;

use crate::eval;
use crate::graph::{Diagram, Graph, Kind, NeuronId};
use crate::style::{quote, Style};

fn attr_list(attrs: &[(&str, &str)]) -> String {
    attrs
        .iter()
        .map(|(k, v)| format!("{k}={}", quote(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn label(g: &Graph, id: NeuronId) -> String {
    let n = g.neuron(id);
    match n.kind() {
        Kind::Law => format!("{} §", n.name()),
        Kind::Action => n.name().to_string(),
    }
}

fn render(g: &Graph, node_style: impl Fn(NeuronId) -> Style) -> String {
    let mut out = String::from("digraph {\n  rankdir=LR;\n");
    for &id in g.topo_order() {
        let style = node_style(id);
        let mut attrs: Vec<(&str, &str)> = Vec::new();
        let l = label(g, id);
        attrs.push(("label", &l));
        attrs.extend(style.resolved().into_iter().filter(|(k, _)| *k != "label"));
        let _ = writeln!(
            out,
            "  {} [{}];",
            quote(g.name(id).as_str()),
            attr_list(&attrs)
        );
    }
    for &id in g.topo_order() {
        for e in g.neuron(id).desc().edges() {
            let _ = write!(
                out,
                "  {} -> {}",
                quote(e.source.as_str()),
                quote(g.name(id).as_str())
            );
            if !e.style.is_empty() {
                let _ = write!(out, " [{}]", attr_list(&e.style.resolved()));
            }
            out.push_str(";\n");
        }
    }
    out.push_str("}\n");
    out
}

/// DOT for a diagram: each node carries its description style plus the
/// fill of its value.
pub fn dot_diagram(d: &Diagram) -> String {
    let g = d.graph();
    let val = eval::evaluate(d);
    render(g, |id| {
        g.neuron(id)
            .desc()
            .style()
            .merged(&g.domain().fill_style(val.get(id)))
    })
}

/// DOT for a bare graph: dashed, unfilled nodes.
pub fn dot_graph(g: &Graph) -> String {
    render(g, |id| {
        let s = g
            .neuron(id)
            .desc()
            .style()
            .merged(&Style::attr("style", "dashed"));
        Style::from_pairs(s.pairs().iter().filter(|(k, _)| k != "fillcolor").cloned())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{corpus_file, load};

    fn diagram(file: &str, name: &str) -> Diagram {
        load(corpus_file(file).unwrap()).unwrap().diagrams[name].clone()
    }

    fn node_line<'a>(dot: &'a str, name: &str) -> &'a str {
        let prefix = format!("  \"{name}\" [");
        dot.lines().find(|l| l.starts_with(&prefix)).unwrap()
    }

    #[test]
    fn major_orders() {
        let dot = dot_diagram(&diagram("orders.nd", "majorOrders"));
        assert_eq!(
            dot,
            "digraph {\n  rankdir=LR;\n  \
             \"Gen\" [label=\"Gen\"];\n  \
             \"Maj\" [label=\"Maj\", style=\"filled\", fillcolor=\"gray\"];\n  \
             \"Pvt\" [label=\"Pvt §\", style=\"filled\", fillcolor=\"gray\"];\n  \
             \"Gen\" -> \"Pvt\";\n  \
             \"Maj\" -> \"Pvt\";\n}\n"
        );
    }

    #[test]
    fn trump_inhibiting_edge() {
        let dot = dot_diagram(&diagram("trump.nd", "trump"));
        assert!(dot.contains("\"Gen\" -> \"MajE\" [arrowhead=\"dot\"];"));
        assert!(dot.contains("\"Maj\" -> \"MajE\";"));
        assert!(!node_line(&dot, "MajE").contains("fillcolor"));
    }

    #[test]
    fn order_fills() {
        let dot = dot_diagram(&diagram("order.nd", "trumpOrder"));
        assert!(node_line(&dot, "Pvt").contains("fillcolor=\"palegreen\""));
        assert!(node_line(&dot, "Maj").contains("fillcolor=\"orangered\""));
    }

    #[test]
    fn graphs_are_dashed_and_unfilled() {
        let l = load(corpus_file("gallery.nd").unwrap()).unwrap();
        let dot = dot_graph(&l.graphs["gallery"]);
        let nodes: Vec<&str> = dot.lines().filter(|l| l.contains(" [label=")).collect();
        assert_eq!(nodes.len(), 8);
        for n in nodes {
            assert!(n.contains("style=\"dashed\""), "{n}");
            assert!(!n.contains("fillcolor"), "{n}");
        }
        assert!(node_line(&dot, "Both").contains("penwidth=\"3\""));
        assert!(node_line(&dot, "Odd").contains("shape=\"diamond\""));
        assert!(dot.contains("\"C\" -> \"Quiet\" [arrowhead=\"empty\"];"));
        assert!(node_line(&dot, "Any").contains("label=\"Any\""));
        assert!(node_line(&dot, "On").contains("label=\"On §\""));
    }

    #[test]
    fn deterministic() {
        let d = diagram("party.nd", "johnGoes");
        assert_eq!(dot_diagram(&d), dot_diagram(&d));
    }
}
