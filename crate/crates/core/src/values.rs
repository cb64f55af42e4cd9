//! Finite, ordered value domains. Booleans are built in; other domains are
//! declared as enumerations whose first case plays the non-firing role.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::style::{fill_with, Style};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("value domain `{0}` has no cases")]
    EmptyDomain(String),
    #[error("value domain `{0}` needs at least two cases")]
    TooFewCases(String),
    #[error("duplicate case `{case}` in value domain `{domain}`")]
    DuplicateCase { domain: String, case: String },
    #[error("`{case}` is not a case of value domain `{domain}`")]
    UnknownCase { domain: String, case: String },
    #[error("value domain `{0}` has too many cases")]
    TooManyCases(String),
}

/// Content-derived identity of a domain: two declarations with the same name
/// and case names denote the same domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainId(u64);

/// A single value: a case index tagged with the domain it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Value {
    domain: DomainId,
    index: u16,
}

impl Value {
    pub fn domain(self) -> DomainId {
        self.domain
    }

    /// 0-based case index in declaration order.
    pub fn index(self) -> usize {
        self.index as usize
    }

    /// Case 0 is the neutral ("not firing") case of every domain.
    pub fn is_neutral(self) -> bool {
        self.index == 0
    }

    /// Boolean reading: anything but the neutral case fires.
    pub fn fires(self) -> bool {
        self.index != 0
    }

    /// Another case of the same domain. The caller guarantees `index` is in
    /// range.
    pub(crate) fn with_index(self, index: usize) -> Value {
        Value {
            domain: self.domain,
            index: index as u16,
        }
    }

    pub fn from_bool(b: bool) -> Value {
        Value {
            domain: bool_id(),
            index: b as u16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    pub fill: Style,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDomain {
    id: DomainId,
    name: String,
    cases: Vec<Case>,
}

fn domain_id(name: &str, cases: &[Case]) -> DomainId {
    let mut h = DefaultHasher::new();
    name.hash(&mut h);
    for c in cases {
        c.name.hash(&mut h);
    }
    DomainId(h.finish())
}

fn bool_id() -> DomainId {
    ValueDomain::boolean().id
}

pub const BOOL_DOMAIN: &str = "Bool";

impl ValueDomain {
    /// The built-in `Bool` domain: `[False, True]`, with firing neurons filled gray.
    pub fn boolean() -> Arc<ValueDomain> {
        static BOOL: OnceLock<Arc<ValueDomain>> = OnceLock::new();
        BOOL.get_or_init(|| {
            let cases = vec![
                Case {
                    name: "False".into(),
                    fill: Style::new(),
                },
                Case {
                    name: "True".into(),
                    fill: fill_with("gray"),
                },
            ];
            Arc::new(ValueDomain {
                id: domain_id(BOOL_DOMAIN, &cases),
                name: BOOL_DOMAIN.into(),
                cases,
            })
        })
        .clone()
    }

    pub fn declare<S: Into<String>>(
        name: impl Into<String>,
        cases: impl IntoIterator<Item = (S, Style)>,
    ) -> Result<ValueDomain, ValueError> {
        let name = name.into();
        let cases: Vec<Case> = cases
            .into_iter()
            .map(|(n, fill)| Case {
                name: n.into(),
                fill,
            })
            .collect();
        match cases.len() {
            0 => return Err(ValueError::EmptyDomain(name)),
            1 => return Err(ValueError::TooFewCases(name)),
            n if n > u16::MAX as usize => return Err(ValueError::TooManyCases(name)),
            _ => {}
        }
        for (i, c) in cases.iter().enumerate() {
            if cases[..i].iter().any(|p| p.name == c.name) {
                return Err(ValueError::DuplicateCase {
                    domain: name,
                    case: c.name.clone(),
                });
            }
        }
        Ok(ValueDomain {
            id: domain_id(&name, &cases),
            name,
            cases,
        })
    }

    pub fn id(&self) -> DomainId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn size(&self) -> usize {
        self.cases.len()
    }

    pub fn is_bool(&self) -> bool {
        self.id == bool_id()
    }

    pub fn contains(&self, v: Value) -> bool {
        v.domain == self.id && v.index() < self.cases.len()
    }

    /// Case `index`; panics when out of range.
    pub fn value(&self, index: usize) -> Value {
        assert!(index < self.cases.len(), "case index out of range");
        Value {
            domain: self.id,
            index: index as u16,
        }
    }

    pub fn neutral(&self) -> Value {
        self.value(0)
    }

    /// All values in declaration order.
    pub fn enumerate(&self) -> impl ExactSizeIterator<Item = Value> + '_ {
        (0..self.cases.len()).map(|i| self.value(i))
    }

    /// Look up a case by name. Boolean domains also accept `true`/`false` in
    /// any letter case.
    pub fn parse_value(&self, text: &str) -> Result<Value, ValueError> {
        if let Some(i) = self.cases.iter().position(|c| c.name == text) {
            return Ok(self.value(i));
        }
        if self.is_bool() {
            if text.eq_ignore_ascii_case("true") {
                return Ok(self.value(1));
            }
            if text.eq_ignore_ascii_case("false") {
                return Ok(self.value(0));
            }
        }
        Err(ValueError::UnknownCase {
            domain: self.name.clone(),
            case: text.to_string(),
        })
    }

    /// Case name of `v`. Panics if `v` is from another domain.
    pub fn show(&self, v: Value) -> &str {
        assert!(self.contains(v), "value from a foreign domain");
        &self.cases[v.index()].name
    }

    /// Node style for a neuron holding `v`: the declared fill attributes,
    /// plus `style=filled` whenever there are any.
    pub fn fill_style(&self, v: Value) -> Style {
        let fill = &self.cases[v.index()].fill;
        if fill.is_empty() {
            return Style::new();
        }
        let mut s = Style::attr("style", "filled");
        s = s.merged(fill);
        s
    }

    /// Number of tuples of length `arity`, or `None` on overflow.
    pub fn tuple_count(&self, arity: usize) -> Option<usize> {
        let mut n: usize = 1;
        for _ in 0..arity {
            n = n.checked_mul(self.size())?;
        }
        Some(n)
    }

    /// Every tuple of length `arity`, lexicographic with the last position
    /// varying fastest.
    pub fn tuples(&self, arity: usize) -> Tuples<'_> {
        Tuples {
            domain: self,
            next: Some(vec![0; arity]),
        }
    }
}

impl fmt::Display for ValueDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Odometer over value tuples; see [`ValueDomain::tuples`].
pub struct Tuples<'a> {
    domain: &'a ValueDomain,
    next: Option<Vec<usize>>,
}

impl Iterator for Tuples<'_> {
    type Item = Vec<Value>;

    fn next(&mut self) -> Option<Vec<Value>> {
        let current = self.next.take()?;
        let out = current.iter().map(|&i| self.domain.value(i)).collect();
        let mut digits = current;
        let size = self.domain.size();
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < size {
                self.next = Some(digits);
                break;
            }
            digits[pos] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order() -> ValueDomain {
        ValueDomain::declare(
            "Order",
            [
                ("None", Style::new()),
                ("Charge", fill_with("palegreen")),
                ("Retreat", fill_with("orangered")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bool_domain_cases() {
        let b = ValueDomain::boolean();
        let names: Vec<_> = b.enumerate().map(|v| b.show(v).to_string()).collect();
        assert_eq!(names, ["False", "True"]);
        assert!(b.fill_style(b.value(0)).is_empty());
        let t = b.fill_style(b.value(1));
        assert_eq!(t.get("fillcolor"), Some("gray"));
        assert_eq!(t.get("style"), Some("filled"));
        assert_eq!(Value::from_bool(true), b.value(1));
        assert!(b.is_bool());
    }

    #[test]
    fn order_domain() {
        let o = order();
        let names: Vec<_> = o.enumerate().map(|v| o.show(v)).collect();
        assert_eq!(names, ["None", "Charge", "Retreat"]);
        assert_eq!(o.fill_style(o.value(1)).get("fillcolor"), Some("palegreen"));
        assert_eq!(o.fill_style(o.value(2)).get("fillcolor"), Some("orangered"));
        assert!(!o.is_bool());
        assert_eq!(o.id(), order().id());
    }

    #[test]
    fn declaration_errors() {
        let none: [(&str, Style); 0] = [];
        assert_eq!(
            ValueDomain::declare("X", none),
            Err(ValueError::EmptyDomain("X".into()))
        );
        assert!(matches!(
            ValueDomain::declare("X", [("A", Style::new()), ("A", Style::new())]),
            Err(ValueError::DuplicateCase { .. })
        ));
        assert!(matches!(
            ValueDomain::declare("X", [("A", Style::new())]),
            Err(ValueError::TooFewCases(_))
        ));
    }

    #[test]
    fn two_case_domain_enumerates_like_bool() {
        let d =
            ValueDomain::declare("Light", [("Off", Style::new()), ("On", Style::new())]).unwrap();
        let idx: Vec<_> = d.enumerate().map(Value::index).collect();
        assert_eq!(idx, [0, 1]);
        assert_ne!(d.id(), ValueDomain::boolean().id());
    }

    #[test]
    fn parse_values() {
        let b = ValueDomain::boolean();
        assert_eq!(b.parse_value("true"), Ok(b.value(1)));
        assert_eq!(b.parse_value("FALSE"), Ok(b.value(0)));
        assert_eq!(b.parse_value("True"), Ok(b.value(1)));
        let o = order();
        assert!(matches!(
            o.parse_value("Flee"),
            Err(ValueError::UnknownCase { .. })
        ));
        assert!(o.parse_value("charge").is_err());
        for v in o.enumerate() {
            assert_eq!(o.parse_value(o.show(v)), Ok(v));
        }
    }

    #[test]
    fn tuples_last_fastest() {
        let b = ValueDomain::boolean();
        let rows: Vec<Vec<usize>> = b
            .tuples(2)
            .map(|t| t.into_iter().map(Value::index).collect())
            .collect();
        assert_eq!(rows, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(b.tuples(0).count(), 1);
        assert_eq!(order().tuples(3).count(), 27);
        assert_eq!(order().tuple_count(3), Some(27));
    }
}
