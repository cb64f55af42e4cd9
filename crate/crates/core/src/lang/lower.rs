use std::sync::Arc;

use indexmap::IndexMap;

use super::ast::*;
use super::Diagnostic;
use crate::desc::{self, BuildRequest, DescError, Description, Registry};
use crate::graph::{Diagram, Graph, GraphBuilder, GraphError, NeuronName};
use crate::style::Style;
use crate::values::{ValueDomain, BOOL_DOMAIN};

/// Everything a source file defines, by name in declaration order.
#[derive(Debug, Default)]
pub struct Lowered {
    pub domains: IndexMap<String, Arc<ValueDomain>>,
    pub graphs: IndexMap<String, Arc<Graph>>,
    pub diagrams: IndexMap<String, Diagram>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Lowered {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Resolve builders, build and validate every declaration. Declarations
/// that fail are left out and reported; the rest are still lowered.
/// Domains are lowered first, then graphs, then diagrams, so declaration
/// order does not matter.
pub fn lower(sf: &SourceFile, registry: &Registry) -> Lowered {
    let mut out = Lowered::default();
    out.domains
        .insert(BOOL_DOMAIN.to_string(), ValueDomain::boolean());
    for item in &sf.items {
        if let Item::Values(v) = item {
            if out.domains.contains_key(&v.name.name) {
                out.diagnostics.push(Diagnostic::error(
                    format!("value domain `{}` is already defined", v.name),
                    v.name.span,
                ));
                continue;
            }
            match lower_values(v) {
                Ok(d) => {
                    out.domains.insert(v.name.name.clone(), Arc::new(d));
                }
                Err(e) => out.diagnostics.push(e),
            }
        }
    }
    for item in &sf.items {
        if let Item::Graph(g) = item {
            if out.graphs.contains_key(&g.name.name) {
                out.diagnostics.push(Diagnostic::error(
                    format!("graph `{}` is already defined", g.name),
                    g.name.span,
                ));
                continue;
            }
            match lower_graph(g, &out.domains, registry) {
                Ok((graph, warnings)) => {
                    out.diagnostics.extend(warnings);
                    out.graphs.insert(g.name.name.clone(), Arc::new(graph));
                }
                Err(e) => out.diagnostics.push(e),
            }
        }
    }
    let declared_graphs: Vec<&str> = sf
        .items
        .iter()
        .filter_map(|i| match i {
            Item::Graph(g) => Some(g.name.name.as_str()),
            _ => None,
        })
        .collect();
    for item in &sf.items {
        if let Item::Diagram(d) = item {
            if out.diagrams.contains_key(&d.name.name) {
                out.diagnostics.push(Diagnostic::error(
                    format!("diagram `{}` is already defined", d.name),
                    d.name.span,
                ));
                continue;
            }
            let Some(graph) = out.graphs.get(&d.graph.name) else {
                // A declared graph that failed to lower was already reported.
                if !declared_graphs.contains(&d.graph.name.as_str()) {
                    out.diagnostics.push(Diagnostic::error(
                        format!("unknown graph `{}`", d.graph),
                        d.graph.span,
                    ));
                }
                continue;
            };
            match lower_diagram(d, graph) {
                Ok(diagram) => {
                    out.diagrams.insert(d.name.name.clone(), diagram);
                }
                Err(e) => out.diagnostics.push(e),
            }
        }
    }
    out
}

fn lower_values(v: &ValuesDecl) -> Result<ValueDomain, Diagnostic> {
    let cases = v.cases.iter().map(|c| {
        let style = Style::from_pairs(
            c.style
                .iter()
                .map(|a| (a.key.name.clone(), a.value.clone())),
        );
        (c.name.name.clone(), style)
    });
    ValueDomain::declare(v.name.name.clone(), cases).map_err(|e| {
        let span = match &e {
            crate::values::ValueError::DuplicateCase { case, .. } => v
                .cases
                .iter()
                .filter(|c| &c.name.name == case)
                .nth(1)
                .map_or(v.name.span, |c| c.name.span),
            _ => v.name.span,
        };
        Diagnostic::error(e.to_string(), span)
    })
}

fn neuron_name(id: &Ident) -> NeuronName {
    NeuronName::new(id.name.as_str()).expect("the lexer only produces identifiers")
}

fn names(ids: &[Ident]) -> Vec<NeuronName> {
    ids.iter().map(neuron_name).collect()
}

fn lower_desc(
    d: &Desc,
    domain: &ValueDomain,
    registry: &Registry,
) -> Result<Description, Diagnostic> {
    let at = |span: Span| move |e: DescError| Diagnostic::error(e.to_string(), span);
    match d {
        Desc::Input(_) => Ok(desc::input()),
        Desc::Call {
            builder,
            threshold,
            args,
            span,
        } => {
            let args: Vec<String> = args.iter().map(|a| a.name.clone()).collect();
            let req = BuildRequest {
                domain,
                threshold: *threshold,
                args: &args,
            };
            registry.build(&builder.name, &req).map_err(|e| match e {
                DescError::UnknownBuilder(_) => Diagnostic::error(e.to_string(), builder.span),
                _ => Diagnostic::error(e.to_string(), *span),
            })
        }
        Desc::Or(l, r) => desc::or(
            lower_desc(l, domain, registry)?,
            lower_desc(r, domain, registry)?,
        )
        .map_err(at(d.span())),
        Desc::And(l, r) => desc::and(
            lower_desc(l, domain, registry)?,
            lower_desc(r, domain, registry)?,
        )
        .map_err(at(d.span())),
        Desc::Inhib {
            base,
            keyword,
            names: ns,
        } => desc::inhib_by(lower_desc(base, domain, registry)?, domain, &names(ns))
            .map_err(at(keyword.span)),
        Desc::Kind { base, kind, .. } => {
            Ok(desc::is_kind(lower_desc(base, domain, registry)?, *kind))
        }
    }
}

/// Identifiers in `d` naming `target`.
fn references<'a>(d: &'a Desc, target: &str, out: &mut Vec<&'a Ident>) {
    match d {
        Desc::Input(_) => {}
        Desc::Call { args, .. } => out.extend(args.iter().filter(|a| a.name == target)),
        Desc::Or(l, r) | Desc::And(l, r) => {
            references(l, target, out);
            references(r, target, out);
        }
        Desc::Inhib { base, names, .. } => {
            references(base, target, out);
            out.extend(names.iter().filter(|a| a.name == target));
        }
        Desc::Kind { base, .. } => references(base, target, out),
    }
}

fn graph_error_span(e: &GraphError, g: &GraphDecl) -> Span {
    let decl = |name: &str| g.neurons.iter().find(|n| n.name.name == name);
    match e {
        GraphError::DuplicateName(n) => {
            let dups: Vec<&Ident> = g
                .neurons
                .iter()
                .map(|d| &d.name)
                .filter(|i| i.name == n.as_str())
                .collect();
            let outs: Vec<&Ident> = g.outputs.iter().filter(|i| i.name == n.as_str()).collect();
            dups.get(1).or(outs.get(1)).map_or(g.name.span, |i| i.span)
        }
        GraphError::UnknownNeuron {
            name,
            referenced_by,
        } => {
            if let Some(n) = decl(referenced_by) {
                let mut refs = Vec::new();
                references(&n.desc, name, &mut refs);
                refs.first().map_or(n.name.span, |i| i.span)
            } else {
                g.outputs
                    .iter()
                    .find(|o| &o.name == name)
                    .map_or(g.name.span, |o| o.span)
            }
        }
        GraphError::Cycle(ns) => ns
            .first()
            .and_then(|n| decl(n.as_str()))
            .map_or(g.name.span, |n| n.name.span),
        GraphError::DomainMismatch { neuron, .. }
        | GraphError::InconsistentArity { neuron, .. } => {
            decl(neuron.as_str()).map_or(g.name.span, |n| n.desc.span())
        }
        _ => g.name.span,
    }
}

fn lower_graph(
    g: &GraphDecl,
    domains: &IndexMap<String, Arc<ValueDomain>>,
    registry: &Registry,
) -> Result<(Graph, Vec<Diagnostic>), Diagnostic> {
    let domain = match &g.over {
        None => ValueDomain::boolean(),
        Some(d) => domains
            .get(&d.name)
            .cloned()
            .ok_or_else(|| Diagnostic::error(format!("unknown value domain `{d}`"), d.span))?,
    };
    let mut b = GraphBuilder::new(domain.clone());
    for n in &g.neurons {
        b.add(
            neuron_name(&n.name),
            lower_desc(&n.desc, &domain, registry)?,
        );
    }
    for o in &g.outputs {
        b.add_terminal(neuron_name(o));
    }
    let graph = b.build().map_err(|e| {
        Diagnostic::error(
            format!("in graph `{}`: {e}", g.name),
            graph_error_span(&e, g),
        )
    })?;
    let warnings = graph
        .excluded()
        .iter()
        .map(|x| {
            let span = g
                .neurons
                .iter()
                .find(|n| n.name.name == x.as_str())
                .map_or(g.name.span, |n| n.name.span);
            Diagnostic::warning(
                format!("neuron `{x}` does not lead to any output and is ignored"),
                span,
            )
        })
        .collect();
    Ok((graph, warnings))
}

fn lower_diagram(d: &DiagramDecl, graph: &Arc<Graph>) -> Result<Diagram, Diagnostic> {
    let domain = graph.domain();
    let values = d
        .values
        .iter()
        .map(|v| {
            domain
                .parse_value(&v.name)
                .map_err(|e| Diagnostic::error(e.to_string(), v.span))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Diagram::new(graph.clone(), values).map_err(|e| {
        let inputs: Vec<&str> = graph
            .input_order()
            .iter()
            .map(|&i| graph.name(i).as_str())
            .collect();
        Diagnostic::error(
            format!(
                "diagram `{}`: {e} (inputs of `{}` are: {})",
                d.name,
                d.graph,
                inputs.join(", ")
            ),
            d.graph.span,
        )
    })
}
