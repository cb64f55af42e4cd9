//! GraphViz attribute lists attached to neurons, edges and values.

use std::fmt;

/// An ordered list of GraphViz attributes. When a key appears more than once
/// the last occurrence wins at render time.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Style {
    attrs: Vec<(String, String)>,
}

impl Style {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn attr(key: impl Into<String>, value: impl Into<String>) -> Self {
        Self {
            attrs: vec![(key.into(), value.into())],
        }
    }

    pub fn from_pairs<K, V, I>(pairs: I) -> Self
    where
        K: Into<String>,
        V: Into<String>,
        I: IntoIterator<Item = (K, V)>,
    {
        Self {
            attrs: pairs
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.attrs.push((key.into(), value.into()));
    }

    /// Concatenation; attributes of `other` override ours on key clash.
    pub fn merged(&self, other: &Style) -> Style {
        let mut attrs = self.attrs.clone();
        attrs.extend(other.attrs.iter().cloned());
        Style { attrs }
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    /// Raw pairs in insertion order, duplicates included.
    pub fn pairs(&self) -> &[(String, String)] {
        &self.attrs
    }

    /// Effective value of `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// One entry per key, in first-appearance order, carrying the last value.
    pub fn resolved(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = Vec::new();
        for (k, v) in &self.attrs {
            match out.iter_mut().find(|(ok, _)| *ok == k) {
                Some(slot) => slot.1 = v,
                None => out.push((k, v)),
            }
        }
        out
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.resolved().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={}", quote(v))?;
        }
        Ok(())
    }
}

/// Double-quote a string for DOT or DSL output.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn fill_with(color: &str) -> Style {
    Style::attr("fillcolor", color)
}

pub fn penwidth(width: u32) -> Style {
    Style::attr("penwidth", width.to_string())
}

pub fn shape(name: &str) -> Style {
    Style::attr("shape", name)
}

pub fn arrowhead(name: &str) -> Style {
    Style::attr("arrowhead", name)
}
