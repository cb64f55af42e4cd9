use std::fmt::Write;

use super::ast::*;
use crate::graph::Kind;

/// Render `sf` as canonical source text. Parsing the result gives back an
/// equal tree.
pub fn pretty(sf: &SourceFile) -> String {
    let mut out = String::new();
    for (i, item) in sf.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match item {
            Item::Values(v) => values(&mut out, v),
            Item::Graph(g) => graph(&mut out, g),
            Item::Diagram(d) => {
                let _ = writeln!(
                    out,
                    "diagram {} = {}({});",
                    d.name,
                    d.graph,
                    joined(&d.values)
                );
            }
        }
    }
    out
}

fn joined(ids: &[Ident]) -> String {
    ids.iter()
        .map(|i| i.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn values(out: &mut String, v: &ValuesDecl) {
    let _ = writeln!(out, "values {} {{", v.name);
    for (i, c) in v.cases.iter().enumerate() {
        out.push_str("  ");
        out.push_str(&c.name.name);
        if !c.style.is_empty() {
            let attrs: Vec<String> = c
                .style
                .iter()
                .map(|a| format!("{}=\"{}\"", a.key, escape(&a.value)))
                .collect();
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        if i + 1 < v.cases.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("}\n");
}

fn graph(out: &mut String, g: &GraphDecl) {
    let _ = write!(out, "graph {}", g.name);
    if let Some(d) = &g.over {
        let _ = write!(out, " over {d}");
    }
    out.push_str(" {\n");
    for n in &g.neurons {
        let _ = writeln!(out, "  {} : {};", n.name, desc(&n.desc));
    }
    let _ = writeln!(out, "  outputs: {};", joined(&g.outputs));
    out.push_str("}\n");
}

/// Binding strength: `||` < `&&` < modified atom.
fn level(d: &Desc) -> u8 {
    match d {
        Desc::Or(..) => 0,
        Desc::And(..) => 1,
        _ => 2,
    }
}

fn wrap(d: &Desc, min: u8) -> String {
    if level(d) < min {
        format!("({})", desc(d))
    } else {
        desc(d)
    }
}

pub fn desc(d: &Desc) -> String {
    match d {
        Desc::Input(_) => "input".into(),
        Desc::Call {
            builder,
            threshold,
            args,
            ..
        } => match threshold {
            Some(k) => format!("{builder}({k}; {})", joined(args)),
            None => format!("{builder}({})", joined(args)),
        },
        // Both operators associate to the left.
        Desc::Or(l, r) => format!("{} || {}", wrap(l, 0), wrap(r, 1)),
        Desc::And(l, r) => format!("{} && {}", wrap(l, 1), wrap(r, 2)),
        Desc::Inhib {
            base,
            keyword,
            names,
        } => format!("{} {keyword}({})", wrap(base, 2), joined(names)),
        Desc::Kind { base, kind, .. } => {
            let k = match kind {
                Kind::Action => "action",
                Kind::Law => "law",
            };
            format!("{} kind {k}", wrap(base, 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn parenthesizes_only_where_needed() {
        let src = "graph g {\n  X : (stim(a) || stim(b)) && (stim(c) && stim(d)) inhib(e);\n  Y : stim(a) && stim(b) || stim(c);\n  outputs: X;\n}\n";
        let sf = parse(src).unwrap();
        let text = pretty(&sf);
        assert_eq!(
            text,
            "graph g {\n  X : (stim(a) || stim(b)) && (stim(c) && stim(d)) inhib(e);\n  Y : stim(a) && stim(b) || stim(c);\n  outputs: X;\n}\n"
        );
        assert_eq!(parse(&text).unwrap(), sf);
    }

    #[test]
    fn right_nested_or_keeps_parens() {
        let sf = parse("graph g { X : stim(a) || (stim(b) || stim(c)); outputs: X; }").unwrap();
        let text = pretty(&sf);
        assert!(text.contains("stim(a) || (stim(b) || stim(c))"));
        assert_eq!(parse(&text).unwrap(), sf);
    }

    #[test]
    fn values_and_diagrams() {
        let src = "values V { A, B [fillcolor=\"a\\\"b\", style=\"x\"] }\ndiagram d = g(A, B);";
        let sf = parse(src).unwrap();
        let text = pretty(&sf);
        assert_eq!(
            text,
            "values V {\n  A,\n  B [fillcolor=\"a\\\"b\", style=\"x\"]\n}\n\ndiagram d = g(A, B);\n"
        );
        assert_eq!(parse(&text).unwrap(), sf);
    }
}
