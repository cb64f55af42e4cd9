//! Neuron descriptions: what a neuron computes, how it is drawn, and where
//! its incoming edges come from.
//!
//! A [`Description`] exposes four facets (kind, firing function, style,
//! edges). Core builders such as [`stim_by`] or [`thick`] produce fresh
//! descriptions; decorators such as [`inhib_by`] and [`is_kind`] wrap an
//! existing one and override some facets while deferring the rest; [`or`]
//! and [`and`] compose two descriptions side by side.
//!
//! Builders are also reachable by keyword through a [`Registry`], which is how
//! the DSL resolves `stim(...)`, `thick(2; ...)` and friends. New builders
//! can be registered at runtime.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::graph::{EdgeRef, GraphError, Kind, NeuronName};
use crate::style::{arrowhead, penwidth, shape, Style};
use crate::values::{DomainId, Value, ValueDomain, ValueError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescError {
    #[error("`{0}` needs at least one predecessor")]
    NoPredecessors(String),
    #[error("threshold {k} is out of range for {n} predecessors")]
    BadThreshold { k: u32, n: usize },
    #[error("`{0}` cannot decorate an input description")]
    UndecoratableInput(String),
    #[error("`{builder}` is not defined over value domain `{domain}`")]
    DomainMismatch { builder: String, domain: String },
    #[error("firing function takes {arity} values but there are {edges} edges")]
    InconsistentArity { arity: usize, edges: usize },
    #[error("unknown builder `{0}`")]
    UnknownBuilder(String),
    #[error("`{builder}`: {message}")]
    BadArguments { builder: String, message: String },
    #[error(transparent)]
    Name(#[from] GraphError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

type FireFn = dyn Fn(&[Value]) -> Value + Send + Sync;

/// A total function from predecessor values (one per edge, in edge order) to
/// the neuron's value.
#[derive(Clone)]
pub struct FiringFunction {
    arity: usize,
    f: Arc<FireFn>,
}

impl FiringFunction {
    pub fn new(arity: usize, f: impl Fn(&[Value]) -> Value + Send + Sync + 'static) -> Self {
        FiringFunction {
            arity,
            f: Arc::new(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn call(&self, args: &[Value]) -> Value {
        debug_assert_eq!(args.len(), self.arity, "firing function arity");
        (self.f)(args)
    }
}

impl fmt::Debug for FiringFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiringFunction/{}", self.arity)
    }
}

/// The builder name and parameters a description was made from. Two
/// descriptions with equal identities compute the same function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub builder: String,
    pub params: Vec<String>,
    pub parts: Vec<Identity>,
}

impl Identity {
    pub fn new(builder: impl Into<String>) -> Self {
        Identity {
            builder: builder.into(),
            params: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn param(mut self, p: impl ToString) -> Self {
        self.params.push(p.to_string());
        self
    }

    pub fn part(mut self, id: Identity) -> Self {
        self.parts.push(id);
        self
    }
}

#[derive(Clone, Debug)]
pub struct Description {
    kind: Kind,
    fire: Option<FiringFunction>,
    style: Style,
    edges: Vec<EdgeRef>,
    identity: Identity,
    domain: Option<(DomainId, String)>,
}

impl PartialEq for Description {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.style == other.style
            && self.edges == other.edges
            && self.identity == other.identity
            && self.domain.as_ref().map(|d| d.0) == other.domain.as_ref().map(|d| d.0)
    }
}

impl Description {
    /// Assemble a description from its facets. Inputs (no firing function)
    /// must have no edges; otherwise the arity must match the edge count.
    pub fn new(
        kind: Kind,
        fire: Option<FiringFunction>,
        style: Style,
        edges: Vec<EdgeRef>,
        identity: Identity,
    ) -> Result<Self, DescError> {
        let arity = fire.as_ref().map_or(0, FiringFunction::arity);
        if arity != edges.len() {
            return Err(DescError::InconsistentArity {
                arity,
                edges: edges.len(),
            });
        }
        Ok(Description {
            kind,
            fire,
            style,
            edges,
            identity,
            domain: None,
        })
    }

    /// Tie the description to a value domain; graphs over another domain
    /// reject it.
    pub fn over(mut self, domain: &ValueDomain) -> Self {
        self.domain = Some((domain.id(), domain.name().to_string()));
        self
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn fire(&self) -> Option<&FiringFunction> {
        self.fire.as_ref()
    }

    pub fn style(&self) -> &Style {
        &self.style
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn identity(&self) -> &Identity {
        &self.identity
    }

    pub fn domain(&self) -> Option<DomainId> {
        self.domain.as_ref().map(|d| d.0)
    }

    pub fn domain_name(&self) -> Option<&str> {
        self.domain.as_ref().map(|d| d.1.as_str())
    }
}

/// Edges with the default (triangular arrowhead) style.
pub fn plain(ns: &[NeuronName]) -> Vec<EdgeRef> {
    styled(&Style::new(), ns)
}

pub fn styled(style: &Style, ns: &[NeuronName]) -> Vec<EdgeRef> {
    ns.iter()
        .map(|n| EdgeRef {
            source: n.clone(),
            style: style.clone(),
        })
        .collect()
}

fn names_param(ns: &[NeuronName]) -> String {
    ns.iter()
        .map(NeuronName::as_str)
        .collect::<Vec<_>>()
        .join(",")
}

fn require_preds(builder: &str, ns: &[NeuronName]) -> Result<(), DescError> {
    if ns.is_empty() {
        Err(DescError::NoPredecessors(builder.into()))
    } else {
        Ok(())
    }
}

fn require_bool(builder: &str, domain: &ValueDomain) -> Result<(), DescError> {
    if domain.is_bool() {
        Ok(())
    } else {
        Err(DescError::DomainMismatch {
            builder: builder.into(),
            domain: domain.name().into(),
        })
    }
}

fn count_firing(vs: &[Value]) -> usize {
    vs.iter().filter(|v| v.fires()).count()
}

/// An input neuron: an action with no firing function and no edges.
pub fn input() -> Description {
    Description {
        kind: Kind::Action,
        fire: None,
        style: Style::new(),
        edges: Vec::new(),
        identity: Identity::new("input"),
        domain: None,
    }
}

/// An exogenous law neuron that always holds `v`.
pub fn constant(domain: &ValueDomain, v: Value) -> Result<Description, DescError> {
    if !domain.contains(v) {
        return Err(DescError::DomainMismatch {
            builder: "const".into(),
            domain: domain.name().into(),
        });
    }
    let d = Description::new(
        Kind::Law,
        Some(FiringFunction::new(0, move |_| v)),
        Style::new(),
        Vec::new(),
        Identity::new("const").param(domain.show(v)),
    )?;
    Ok(d.over(domain))
}

/// Stimulating edges. Over booleans the neuron fires when any predecessor
/// fires; over other domains the predecessors' values are [`resolve`]d.
pub fn stim_by(domain: &ValueDomain, ns: &[NeuronName]) -> Result<Description, DescError> {
    require_preds("stim", ns)?;
    let fire = if domain.is_bool() {
        FiringFunction::new(ns.len(), |vs| {
            Value::from_bool(vs.iter().any(|v| v.fires()))
        })
    } else {
        let neutral = domain.neutral();
        let size = domain.size();
        FiringFunction::new(ns.len(), move |vs| resolve(neutral, size, vs))
    };
    let d = Description::new(
        Kind::Law,
        Some(fire),
        Style::new(),
        plain(ns),
        Identity::new("stim").param(names_param(ns)),
    )?;
    Ok(d.over(domain))
}

/// Plurality vote among the non-neutral values; the neutral case on a tie
/// (including when nothing fires).
pub fn resolve(neutral: Value, domain_size: usize, vs: &[Value]) -> Value {
    let mut counts = vec![0usize; domain_size];
    for v in vs {
        counts[v.index()] += 1;
    }
    let mut best: Option<usize> = None;
    let mut tied = false;
    for i in 1..domain_size {
        match best {
            _ if counts[i] == 0 => {}
            None => best = Some(i),
            Some(b) if counts[i] > counts[b] => {
                best = Some(i);
                tied = false;
            }
            Some(b) if counts[i] == counts[b] => tied = true,
            Some(_) => {}
        }
    }
    match best {
        Some(i) if !tied => neutral.with_index(i),
        _ => neutral,
    }
}

/// Unstimulating (hollow arrowhead) edges: fires when some predecessor does
/// not.
pub fn unstim_by(domain: &ValueDomain, ns: &[NeuronName]) -> Result<Description, DescError> {
    require_preds("unstim", ns)?;
    require_bool("unstim", domain)?;
    let d = Description::new(
        Kind::Law,
        Some(FiringFunction::new(ns.len(), |vs| {
            Value::from_bool(vs.iter().any(|v| !v.fires()))
        })),
        Style::new(),
        styled(&arrowhead("empty"), ns),
        Identity::new("unstim").param(names_param(ns)),
    )?;
    Ok(d.over(domain))
}

/// Thick-bordered neuron: fires when at least `k` predecessors fire.
pub fn thick(domain: &ValueDomain, k: u32, ns: &[NeuronName]) -> Result<Description, DescError> {
    require_preds("thick", ns)?;
    require_bool("thick", domain)?;
    if k == 0 || k as usize > ns.len() {
        return Err(DescError::BadThreshold { k, n: ns.len() });
    }
    let d = Description::new(
        Kind::Law,
        Some(FiringFunction::new(ns.len(), move |vs| {
            Value::from_bool(count_firing(vs) >= k as usize)
        })),
        penwidth(3),
        plain(ns),
        Identity::new("thick").param(k).param(names_param(ns)),
    )?;
    Ok(d.over(domain))
}

/// Diamond-shaped neuron firing when exactly one predecessor fires.
pub fn xor(domain: &ValueDomain, ns: &[NeuronName]) -> Result<Description, DescError> {
    require_preds("xor", ns)?;
    require_bool("xor", domain)?;
    let d = Description::new(
        Kind::Law,
        Some(FiringFunction::new(ns.len(), |vs| {
            Value::from_bool(count_firing(vs) == 1)
        })),
        shape("diamond"),
        plain(ns),
        Identity::new("xor").param(names_param(ns)),
    )?;
    Ok(d.over(domain))
}

/// Pentagon-shaped neuron taking the first non-neutral predecessor value;
/// predecessors are listed in decreasing rank.
pub fn by_rank(domain: &ValueDomain, ns: &[NeuronName]) -> Result<Description, DescError> {
    require_preds("byrank", ns)?;
    let neutral = domain.neutral();
    let d = Description::new(
        Kind::Law,
        Some(FiringFunction::new(ns.len(), move |vs| {
            vs.iter()
                .copied()
                .find(|v| !v.is_neutral())
                .unwrap_or(neutral)
        })),
        shape("pentagon"),
        plain(ns),
        Identity::new("byrank").param(names_param(ns)),
    )?;
    Ok(d.over(domain))
}

/// Build a firing function that runs `d`'s own function on the first
/// `|d.edges|` values, summarizes the remaining `extra` values, and combines
/// the two results.
pub fn extend<T: 'static>(
    d: &Description,
    extra: usize,
    combine: impl Fn(Value, T) -> Value + Send + Sync + 'static,
    summarize: impl Fn(&[Value]) -> T + Send + Sync + 'static,
) -> Option<FiringFunction> {
    let inner = d.fire.clone()?;
    let split = d.edges.len();
    Some(FiringFunction::new(split + extra, move |vs| {
        let (front, back) = vs.split_at(split);
        combine(inner.call(front), summarize(back))
    }))
}

/// Add inhibiting (dot arrowhead) edges. Over booleans the neuron fires when
/// `d` would and no inhibitor fires; over other domains any non-neutral
/// inhibitor forces the neutral case.
pub fn inhib_by(
    d: Description,
    domain: &ValueDomain,
    ns: &[NeuronName],
) -> Result<Description, DescError> {
    require_preds("inhib", ns)?;
    let fire = if domain.is_bool() {
        extend(
            &d,
            ns.len(),
            |v, quiet: bool| Value::from_bool(v.fires() && quiet),
            |inh| inh.iter().all(|v| !v.fires()),
        )
    } else {
        let neutral = domain.neutral();
        extend(
            &d,
            ns.len(),
            move |v, blocked: bool| if blocked { neutral } else { v },
            |inh| inh.iter().any(|v| !v.is_neutral()),
        )
    }
    .ok_or_else(|| DescError::UndecoratableInput("inhib".into()))?;
    let mut edges = d.edges.clone();
    edges.extend(styled(&arrowhead("dot"), ns));
    let out = Description::new(
        d.kind,
        Some(fire),
        d.style.clone(),
        edges,
        Identity::new("inhib")
            .param(names_param(ns))
            .part(d.identity.clone()),
    )?;
    Ok(out.over(domain))
}

/// Override the kind; every other facet is deferred to `d`.
pub fn is_kind(d: Description, kind: Kind) -> Description {
    let identity = Identity::new("kind").param(kind).part(d.identity.clone());
    Description {
        kind,
        identity,
        ..d
    }
}

fn compose(
    name: &str,
    l: Description,
    r: Description,
    op: fn(bool, bool) -> bool,
) -> Result<Description, DescError> {
    for side in [&l, &r] {
        if side.fire.is_none() {
            return Err(DescError::UndecoratableInput(name.into()));
        }
        if let Some((id, dname)) = &side.domain {
            if *id != ValueDomain::boolean().id() {
                return Err(DescError::DomainMismatch {
                    builder: name.into(),
                    domain: dname.clone(),
                });
            }
        }
    }
    let right = r.fire.clone().expect("checked above");
    let fire = extend(
        &l,
        r.edges.len(),
        move |v, b: bool| Value::from_bool(op(v.fires(), b)),
        move |vs| right.call(vs).fires(),
    )
    .expect("checked above");
    let mut edges = l.edges.clone();
    edges.extend(r.edges.iter().cloned());
    let d = Description::new(
        r.kind,
        Some(fire),
        l.style.merged(&r.style),
        edges,
        Identity::new(name)
            .part(l.identity.clone())
            .part(r.identity.clone()),
    )?;
    Ok(d.over(&ValueDomain::boolean()))
}

/// Disjunction of two boolean descriptions. Kind comes from `r`; on style
/// clashes `r` wins.
pub fn or(l: Description, r: Description) -> Result<Description, DescError> {
    compose("or", l, r, |a, b| a || b)
}

/// Conjunction of two boolean descriptions; see [`or`].
pub fn and(l: Description, r: Description) -> Result<Description, DescError> {
    compose("and", l, r, |a, b| a && b)
}

/// What the identifier list of a builder call means.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    /// Predecessor neuron names.
    Names,
    /// A single case name of the graph's domain.
    Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    /// Whether the call takes a leading `k;` threshold.
    pub threshold: bool,
    pub args: ArgKind,
}

/// Arguments of one builder call.
#[derive(Debug)]
pub struct BuildRequest<'a> {
    pub domain: &'a ValueDomain,
    pub threshold: Option<u32>,
    pub args: &'a [String],
}

impl BuildRequest<'_> {
    pub fn names(&self) -> Result<Vec<NeuronName>, DescError> {
        self.args
            .iter()
            .map(|a| NeuronName::new(a.as_str()).map_err(DescError::from))
            .collect()
    }
}

type BuilderFn = dyn Fn(&BuildRequest<'_>) -> Result<Description, DescError> + Send + Sync;

#[derive(Clone)]
pub struct Builder {
    pub signature: Signature,
    build: Arc<BuilderFn>,
}

impl Builder {
    pub fn build(&self, req: &BuildRequest<'_>) -> Result<Description, DescError> {
        (self.build)(req)
    }
}

impl fmt::Debug for Builder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Builder")
            .field("signature", &self.signature)
            .finish()
    }
}

/// Keyword table for description builders.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    builders: IndexMap<String, Builder>,
}

const NAMES: Signature = Signature {
    threshold: false,
    args: ArgKind::Names,
};

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The built-in builders plus the conditional-logic aliases
    /// `if_`/`ifAny` (stim), `ifNot` (unstim) and `ifAll` (thick with every
    /// predecessor required).
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(
            "const",
            Signature {
                threshold: false,
                args: ArgKind::Value,
            },
            |req| {
                let [case] = req.args else {
                    return Err(DescError::BadArguments {
                        builder: "const".into(),
                        message: "expects exactly one value".into(),
                    });
                };
                constant(req.domain, req.domain.parse_value(case)?)
            },
        );
        for alias in ["stim", "if_", "ifAny"] {
            r.register(alias, NAMES, |req| stim_by(req.domain, &req.names()?));
        }
        for alias in ["unstim", "ifNot"] {
            r.register(alias, NAMES, |req| unstim_by(req.domain, &req.names()?));
        }
        r.register(
            "thick",
            Signature {
                threshold: true,
                args: ArgKind::Names,
            },
            |req| {
                let k = req.threshold.ok_or_else(|| DescError::BadArguments {
                    builder: "thick".into(),
                    message: "missing threshold".into(),
                })?;
                thick(req.domain, k, &req.names()?)
            },
        );
        r.register("ifAll", NAMES, |req| {
            let ns = req.names()?;
            thick(req.domain, ns.len() as u32, &ns)
        });
        r.register("xor", NAMES, |req| xor(req.domain, &req.names()?));
        r.register("byrank", NAMES, |req| by_rank(req.domain, &req.names()?));
        r
    }

    pub fn register(
        &mut self,
        name: impl Into<String>,
        signature: Signature,
        build: impl Fn(&BuildRequest<'_>) -> Result<Description, DescError> + Send + Sync + 'static,
    ) {
        self.builders.insert(
            name.into(),
            Builder {
                signature,
                build: Arc::new(build),
            },
        );
    }

    pub fn get(&self, name: &str) -> Option<&Builder> {
        self.builders.get(name)
    }

    pub fn build(&self, name: &str, req: &BuildRequest<'_>) -> Result<Description, DescError> {
        let b = self
            .get(name)
            .ok_or_else(|| DescError::UnknownBuilder(name.into()))?;
        if req.threshold.is_some() != b.signature.threshold {
            return Err(DescError::BadArguments {
                builder: name.into(),
                message: if b.signature.threshold {
                    "expects a threshold `k;` before its arguments".into()
                } else {
                    "does not take a threshold".into()
                },
            });
        }
        b.build(req)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }
}
