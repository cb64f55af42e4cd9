//! Cause inference.
//!
//! Causes are found by counterfactual reasoning that stays local to one
//! neuron at a time. For a neuron `n` we look for the minimal sets of its
//! immediate predecessors that, held at their actual values, force `n`'s
//! actual value no matter what the remaining predecessors take (every value
//! of the domain is tried). Those sets form a disjunction of conjunctions.
//!
//! Starting from a terminal, every literal in that disjunction that names an
//! endogenous law neuron is replaced by the same analysis of that neuron,
//! distributing conjunction over disjunction. Expansion stops at actions and
//! at input neurons. Constant neurons expand to the always-true conjunction,
//! so they never show up as causes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::desc::FiringFunction;
use crate::eval::{self, EvalError, Literal, Valuation};
use crate::graph::{Diagram, Graph, Kind, NeuronId};
use crate::values::{Value, ValueDomain};

/// Most distinct predecessors a neuron may have for local analysis.
pub const MAX_LOCAL_ARITY: usize = 16;
/// Most positions [`prime_implicant_oracle`] accepts.
pub const ORACLE_MAX_ARITY: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CauseError {
    #[error("neuron `{neuron}` has {arity} distinct predecessors; cause inference supports at most {max}")]
    ArityTooLarge {
        neuron: String,
        arity: usize,
        max: usize,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A literal over a neuron of one fixed graph. Ordered by the neuron's
/// traversal rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub rank: usize,
    pub id: NeuronId,
    pub value: Value,
}

impl Lit {
    pub fn new(g: &Graph, id: NeuronId, value: Value) -> Lit {
        Lit {
            rank: g.rank(id),
            id,
            value,
        }
    }

    pub fn to_literal(self, g: &Graph) -> Literal {
        Literal {
            neuron: g.name(self.id).clone(),
            value: self.value,
        }
    }
}

/// Disjunction of conjunctions of literals, kept in normal form: no repeated
/// literal, no neuron twice in a conjunction, no conjunction containing
/// another, conjunctions sorted. The empty conjunction is "true"; the empty
/// disjunction is "false".
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Dnf {
    conjs: Vec<Vec<Lit>>,
}

fn is_subset(small: &[Lit], big: &[Lit]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

impl Dnf {
    pub fn falsum() -> Dnf {
        Dnf { conjs: Vec::new() }
    }

    pub fn unit() -> Dnf {
        Dnf {
            conjs: vec![Vec::new()],
        }
    }

    pub fn literal(l: Lit) -> Dnf {
        Dnf {
            conjs: vec![vec![l]],
        }
    }

    /// Build from arbitrary conjunctions, normalizing.
    pub fn from_conjunctions(conjs: Vec<Vec<Lit>>) -> Dnf {
        Dnf { conjs }.normalized()
    }

    pub fn conjunctions(&self) -> &[Vec<Lit>] {
        &self.conjs
    }

    pub fn is_unit(&self) -> bool {
        self.conjs.len() == 1 && self.conjs[0].is_empty()
    }

    pub fn is_false(&self) -> bool {
        self.conjs.is_empty()
    }

    pub fn normalized(self) -> Dnf {
        let mut conjs: Vec<Vec<Lit>> = self
            .conjs
            .into_iter()
            .filter_map(|mut c| {
                c.sort();
                c.dedup();
                // Same neuron twice means two different values: contradictory.
                let clash = c.windows(2).any(|w| w[0].id == w[1].id);
                (!clash).then_some(c)
            })
            .collect();
        conjs.sort();
        conjs.dedup();
        let keep: Vec<bool> = conjs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                !conjs
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != i && o.len() < c.len() && is_subset(o, c))
            })
            .collect();
        let conjs = conjs
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect();
        Dnf { conjs }
    }

    pub fn is_normalized(&self) -> bool {
        self.clone().normalized() == *self
    }

    pub fn or(&self, other: &Dnf) -> Dnf {
        let mut conjs = self.conjs.clone();
        conjs.extend(other.conjs.iter().cloned());
        Dnf { conjs }.normalized()
    }

    pub fn and(&self, other: &Dnf) -> Dnf {
        let mut conjs = Vec::with_capacity(self.conjs.len() * other.conjs.len());
        for a in &self.conjs {
            for b in &other.conjs {
                let mut c = a.clone();
                c.extend(b.iter().copied());
                conjs.push(c);
            }
        }
        Dnf { conjs }.normalized()
    }

    /// `A:x & B:y | C:z`; `True` for the unit, `False` for the empty
    /// disjunction.
    pub fn show(&self, g: &Graph) -> String {
        if self.conjs.is_empty() {
            return "False".into();
        }
        self.conjs
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "True".to_string()
                } else {
                    c.iter()
                        .map(|l| l.to_literal(g).show(g.domain()))
                        .collect::<Vec<_>>()
                        .join(" & ")
                }
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// Name-level view, for comparing causes across graphs.
    pub fn named(&self, g: &Graph) -> Vec<Vec<Literal>> {
        self.conjs
            .iter()
            .map(|c| c.iter().map(|l| l.to_literal(g)).collect())
            .collect()
    }
}

/// Minimal sets of predecessor groups that force `fire`'s value at
/// `actuals`. Each group lists argument positions fed by one neuron; a group
/// is held or varied as a whole. Returned sets are ascending group indices,
/// sorted.
pub fn minimal_sufficient_sets(
    fire: &FiringFunction,
    actuals: &[Value],
    groups: &[Vec<usize>],
    domain: &ValueDomain,
) -> Vec<Vec<usize>> {
    let target = fire.call(actuals);
    let g = groups.len();
    assert!(g <= MAX_LOCAL_ARITY, "caller enforces the arity cap");
    let mut masks: Vec<u32> = (0..1u32 << g).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut found: Vec<u32> = Vec::new();
    let mut args = actuals.to_vec();
    for mask in masks {
        if found.iter().any(|f| f & mask == *f) {
            continue;
        }
        let free: Vec<&Vec<usize>> = (0..g)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| &groups[i])
            .collect();
        if forces(fire, &mut args, actuals, &free, domain, target) {
            found.push(mask);
        }
    }
    let mut out: Vec<Vec<usize>> = found
        .into_iter()
        .map(|m| (0..g).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    out.sort();
    out
}

/// Whether every assignment of the free groups yields `target`.
fn forces(
    fire: &FiringFunction,
    args: &mut [Value],
    actuals: &[Value],
    free: &[&Vec<usize>],
    domain: &ValueDomain,
    target: Value,
) -> bool {
    args.copy_from_slice(actuals);
    for tuple in domain.tuples(free.len()) {
        for (group, v) in free.iter().zip(&tuple) {
            for &pos in group.iter() {
                args[pos] = *v;
            }
        }
        if fire.call(args) != target {
            return false;
        }
    }
    true
}

/// Independent check of [`minimal_sufficient_sets`] with one group per
/// position: test every subset against every full argument tuple, then drop
/// the non-minimal ones.
pub fn prime_implicant_oracle(
    fire: &FiringFunction,
    actuals: &[Value],
    domain: &ValueDomain,
) -> Result<Vec<Vec<usize>>, CauseError> {
    let k = actuals.len();
    if k > ORACLE_MAX_ARITY {
        return Err(CauseError::ArityTooLarge {
            neuron: "<oracle>".into(),
            arity: k,
            max: ORACLE_MAX_ARITY,
        });
    }
    let target = fire.call(actuals);
    let table: Vec<(Vec<Value>, Value)> = domain
        .tuples(k)
        .map(|t| {
            let out = fire.call(&t);
            (t, out)
        })
        .collect();
    let sufficient: Vec<Vec<usize>> = (0..1usize << k)
        .map(|m| (0..k).filter(|i| m & (1 << i) != 0).collect::<Vec<usize>>())
        .filter(|set| {
            table
                .iter()
                .filter(|(t, _)| set.iter().all(|&i| t[i] == actuals[i]))
                .all(|(_, out)| *out == target)
        })
        .collect();
    let mut minimal: Vec<Vec<usize>> = sufficient
        .iter()
        .filter(|s| {
            !sufficient
                .iter()
                .any(|o| o.len() < s.len() && o.iter().all(|i| s.contains(i)))
        })
        .cloned()
        .collect();
    minimal.sort();
    Ok(minimal)
}

/// The local cause of `id`: minimal sets of its predecessors (at their
/// actual values) that force its actual value. For an input neuron this is
/// the neuron's own literal.
pub fn local_cause(g: &Graph, val: &Valuation, id: NeuronId) -> Result<Dnf, CauseError> {
    let Some(fire) = g.neuron(id).desc().fire() else {
        return Ok(Dnf::literal(Lit::new(g, id, val.get(id))));
    };
    let preds = g.preds(id);
    let mut owners: Vec<NeuronId> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pos, p) in preds.iter().enumerate() {
        match owners.iter().position(|o| o == p) {
            Some(i) => groups[i].push(pos),
            None => {
                owners.push(*p);
                groups.push(vec![pos]);
            }
        }
    }
    if owners.len() > MAX_LOCAL_ARITY {
        return Err(CauseError::ArityTooLarge {
            neuron: g.name(id).to_string(),
            arity: owners.len(),
            max: MAX_LOCAL_ARITY,
        });
    }
    let actuals: Vec<Value> = preds.iter().map(|&p| val.get(p)).collect();
    let sets = minimal_sufficient_sets(fire, &actuals, &groups, g.domain());
    Ok(Dnf::from_conjunctions(
        sets.into_iter()
            .map(|set| {
                set.into_iter()
                    .map(|i| Lit::new(g, owners[i], val.get(owners[i])))
                    .collect()
            })
            .collect(),
    ))
}

/// Whether expansion stops at `id`.
fn is_base(g: &Graph, id: NeuronId) -> bool {
    let n = g.neuron(id);
    n.kind() == Kind::Action || n.is_input()
}

/// Expands literals into their causal chains, memoizing per neuron.
struct Expander<'a> {
    g: &'a Graph,
    val: &'a Valuation,
    done: HashMap<NeuronId, Dnf>,
}

impl Expander<'_> {
    fn expand(&mut self, root: NeuronId) -> Result<Dnf, CauseError> {
        // Explicit stack so deep chains do not exhaust the call stack.
        let mut stack: Vec<(NeuronId, Option<Dnf>)> = vec![(root, None)];
        while let Some((id, local)) = stack.pop() {
            if self.done.contains_key(&id) {
                continue;
            }
            if is_base(self.g, id) {
                let lit = Lit::new(self.g, id, self.val.get(id));
                self.done.insert(id, Dnf::literal(lit));
                continue;
            }
            let local = match local {
                Some(l) => l,
                None => local_cause(self.g, self.val, id)?,
            };
            let pending: Vec<NeuronId> = local
                .conjunctions()
                .iter()
                .flatten()
                .map(|l| l.id)
                .filter(|p| !self.done.contains_key(p))
                .collect();
            if pending.is_empty() {
                let mut acc = Dnf::falsum();
                for conj in local.conjunctions() {
                    let mut term = Dnf::unit();
                    for l in conj {
                        term = term.and(&self.done[&l.id]);
                    }
                    acc = acc.or(&term);
                }
                self.done.insert(id, acc);
            } else {
                stack.push((id, Some(local)));
                stack.extend(pending.into_iter().map(|p| (p, None)));
            }
        }
        Ok(self.done[&root].clone())
    }
}

/// One terminal's cause statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauseEntry {
    pub cause: Dnf,
    pub effect: Lit,
}

/// Cause of terminal `t`, expanded back to actions and inputs.
pub fn causes_of(d: &Diagram, t: NeuronId) -> Result<CauseEntry, CauseError> {
    let val = eval::evaluate(d);
    causes_of_in(d.graph(), &val, t, &mut HashMap::new())
}

fn causes_of_in(
    g: &Graph,
    val: &Valuation,
    t: NeuronId,
    memo: &mut HashMap<NeuronId, Dnf>,
) -> Result<CauseEntry, CauseError> {
    let mut ex = Expander {
        g,
        val,
        done: std::mem::take(memo),
    };
    let cause = ex.expand(t);
    *memo = ex.done;
    Ok(CauseEntry {
        cause: cause?,
        effect: Lit::new(g, t, val.get(t)),
    })
}

/// The causal semantics of a diagram: one entry per terminal, in terminal
/// order.
#[derive(Clone, Debug)]
pub struct Causes {
    graph: Arc<Graph>,
    entries: Vec<CauseEntry>,
}

impl Causes {
    pub fn entries(&self) -> &[CauseEntry] {
        &self.entries
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// Name-level view: (cause conjunctions, effect) per terminal.
    pub fn named(&self) -> Vec<(Vec<Vec<Literal>>, Literal)> {
        self.entries
            .iter()
            .map(|e| (e.cause.named(&self.graph), e.effect.to_literal(&self.graph)))
            .collect()
    }
}

/// Equal when every terminal has the same cause and effect by name and
/// value; the graphs themselves may differ.
impl PartialEq for Causes {
    fn eq(&self, other: &Self) -> bool {
        self.named() == other.named()
    }
}

/// One line per terminal: `Gen:False & Maj:True ==> Pvt:True`.
impl fmt::Display for Causes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(
                f,
                "{} ==> {}",
                e.cause.show(&self.graph),
                e.effect.to_literal(&self.graph).show(self.graph.domain())
            )?;
        }
        Ok(())
    }
}

pub fn causes(d: &Diagram) -> Result<Causes, CauseError> {
    let g = d.graph();
    let val = eval::evaluate(d);
    let mut memo = HashMap::new();
    let entries = g
        .terminals()
        .iter()
        .map(|&t| causes_of_in(g, &val, t, &mut memo))
        .collect::<Result<_, _>>()?;
    Ok(Causes {
        graph: g.clone(),
        entries,
    })
}

/// Causes of every diagram generable from `g`, in canonical input order.
pub fn all_causes(g: &Arc<Graph>) -> Result<Vec<Causes>, CauseError> {
    all_causes_with_limit(g, eval::ENUMERATION_LIMIT)
}

pub fn all_causes_with_limit(g: &Arc<Graph>, limit: usize) -> Result<Vec<Causes>, CauseError> {
    eval::all_diagrams_with_limit(g, limit)?
        .iter()
        .map(causes)
        .collect()
}

/// `[c1,c2,...]`, entries separated by bare commas.
pub fn format_all_causes(all: &[Causes]) -> String {
    let parts: Vec<String> = all.iter().map(Causes::to_string).collect();
    format!("[{}]", parts.join(","))
}
