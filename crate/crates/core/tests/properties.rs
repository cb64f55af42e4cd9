mod support;

use std::collections::HashSet;

use ncause_core::cause::{self, prime_implicant_oracle, Dnf, Lit};
use ncause_core::eval::{self, as_function, effects, evaluate, evaluate_in_order};
use ncause_core::{desc, Diagram, GraphBuilder, Kind, NeuronId, Value, ValueDomain};
use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn change_inputs_keeps_the_graph((g, inputs) in graph_and_inputs(), seed in any::<u64>()) {
        let d = Diagram::new(g.clone(), inputs).unwrap();
        let size = g.domain().size() as u64;
        let other: Vec<Value> = (0..g.input_order().len() as u64)
            .map(|i| g.domain().value(((seed >> (i * 2)) % size) as usize))
            .collect();
        let d2 = d.change_inputs(other.clone()).unwrap();
        prop_assert_eq!(d2.graph(), d.graph());
        prop_assert_eq!(d2.inputs(), &other[..]);
    }

    #[test]
    fn evaluation_is_consistent(d in diagram()) {
        let g = d.graph();
        let val = evaluate(&d);
        for id in g.ids() {
            match g.neuron(id).desc().fire() {
                Some(f) => {
                    let args: Vec<Value> = g.preds(id).iter().map(|&p| val.get(p)).collect();
                    prop_assert_eq!(val.get(id), f.call(&args));
                }
                None => prop_assert_eq!(Some(val.get(id)), d.input_of(id)),
            }
        }
    }

    #[test]
    fn evaluation_order_does_not_matter(d in diagram(), prio in prop::collection::vec(any::<u32>(), 16)) {
        // Kahn's algorithm with random tie-breaking.
        let g = d.graph();
        let n = g.len();
        let mut indeg: Vec<usize> = g.ids().map(|id| g.preds(id).len()).collect();
        let mut order: Vec<NeuronId> = Vec::new();
        let mut ready: Vec<NeuronId> = g.ids().filter(|id| indeg[id.index()] == 0).collect();
        while let Some(pos) = (0..ready.len()).max_by_key(|&i| prio[ready[i].index() % 16]) {
            let id = ready.swap_remove(pos);
            order.push(id);
            for s in g.ids() {
                let hits = g.preds(s).iter().filter(|&&p| p == id).count();
                if hits > 0 {
                    indeg[s.index()] -= hits;
                    if indeg[s.index()] == 0 {
                        ready.push(s);
                    }
                }
            }
        }
        prop_assert_eq!(order.len(), n);
        prop_assert_eq!(evaluate_in_order(&d, &order), evaluate(&d));
    }

    #[test]
    fn effects_rows_match_as_function(spec in graph_spec()) {
        let g = spec.build();
        let e = effects(&g).unwrap();
        let tuples: Vec<Vec<Value>> = g.domain().tuples(g.input_order().len()).collect();
        prop_assert_eq!(e.rows().len(), tuples.len());
        for (row, t) in e.rows().iter().zip(&tuples) {
            let ins: Vec<Value> = row.inputs.iter().map(|l| l.value).collect();
            let outs: Vec<Value> = row.outputs.iter().map(|l| l.value).collect();
            prop_assert_eq!(&ins, t);
            prop_assert_eq!(outs, as_function(&g, t).unwrap());
        }
    }

    #[test]
    fn causes_mention_only_base_neurons(d in diagram()) {
        let g = d.graph();
        let c = cause::causes(&d).unwrap();
        for e in c.entries() {
            prop_assert!(e.cause.is_normalized());
            for lit in e.cause.conjunctions().iter().flatten() {
                let n = g.neuron(lit.id);
                prop_assert!(n.kind() == Kind::Action || n.is_input(), "{}", n.name());
                prop_assert_eq!(lit.value, evaluate(&d).get(lit.id));
            }
        }
    }

    #[test]
    fn local_cause_matches_oracle(
        tri in any::<bool>(),
        choice in 0u8..8,
        k in 1usize..=6,
        seed in any::<u64>(),
        acts in prop::collection::vec(0usize..3, 6),
    ) {
        let dom = if tri { support::tri() } else { ValueDomain::boolean() };
        let names: Vec<_> = (0..k).map(|i| nm(&format!("P{i}"))).collect();
        let mut b = GraphBuilder::new(dom.clone());
        for n in &names {
            b.add(n.clone(), desc::input());
        }
        b.add(nm("T"), local_desc(&dom, &names, choice, seed));
        b.add_terminal(nm("T"));
        let g = std::sync::Arc::new(b.build().unwrap());
        let inputs: Vec<Value> = acts[..k].iter().map(|&i| dom.value(i % dom.size())).collect();
        let d = Diagram::new(g.clone(), inputs).unwrap();
        let val = evaluate(&d);
        let t = g.id_of("T").unwrap();
        let local = cause::local_cause(&g, &val, t).unwrap();
        let fire = g.neuron(t).desc().fire().unwrap();
        let actuals: Vec<Value> = g.preds(t).iter().map(|&p| val.get(p)).collect();
        let oracle = prime_implicant_oracle(fire, &actuals, &dom).unwrap();
        let expected = Dnf::from_conjunctions(
            oracle
                .into_iter()
                .map(|set| {
                    set.into_iter()
                        .map(|i| {
                            let p = g.preds(t)[i];
                            Lit::new(&g, p, val.get(p))
                        })
                        .collect()
                })
                .collect(),
        );
        prop_assert_eq!(local, expected);
    }
}

/// Conjunctions over a fixed set of neurons, as (neuron, value) index pairs.
fn raw_dnf() -> impl Strategy<Value = Vec<Vec<(usize, usize)>>> {
    prop::collection::vec(prop::collection::vec((0usize..4, 0usize..2), 0..=4), 0..=6)
}

fn four_inputs() -> std::sync::Arc<ncause_core::Graph> {
    let mut b = GraphBuilder::boolean();
    for i in 0..4 {
        b.add(nm(&format!("X{i}")), desc::input());
        b.add_terminal(nm(&format!("X{i}")));
    }
    std::sync::Arc::new(b.build().unwrap())
}

fn to_dnf(g: &ncause_core::Graph, raw: &[Vec<(usize, usize)>]) -> Vec<Vec<Lit>> {
    raw.iter()
        .map(|c| {
            c.iter()
                .map(|&(n, v)| {
                    Lit::new(
                        g,
                        g.id_of(&format!("X{n}")).unwrap(),
                        Value::from_bool(v == 1),
                    )
                })
                .collect()
        })
        .collect()
}

fn holds(conjs: &[Vec<Lit>], g: &ncause_core::Graph, assignment: usize) -> bool {
    conjs.iter().any(|c| {
        c.iter().all(|l| {
            let i = g.name(l.id).as_str()[1..].parse::<usize>().unwrap();
            ((assignment >> i) & 1 == 1) == l.value.fires()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dnf_normalization(raw in raw_dnf()) {
        let g = four_inputs();
        let conjs = to_dnf(&g, &raw);
        let d = Dnf::from_conjunctions(conjs.clone());
        prop_assert_eq!(d.clone().normalized(), d.clone());
        let cs = d.conjunctions();
        for (i, a) in cs.iter().enumerate() {
            let ids: HashSet<_> = a.iter().map(|l| l.id).collect();
            prop_assert_eq!(ids.len(), a.len());
            for (j, b) in cs.iter().enumerate() {
                if i != j {
                    prop_assert!(!a.iter().all(|l| b.contains(l)));
                }
            }
        }
        for assignment in 0..16 {
            prop_assert_eq!(holds(&conjs, &g, assignment), holds(cs, &g, assignment));
        }
    }

    #[test]
    fn dnf_and_or_are_semantic(a in raw_dnf(), b in raw_dnf()) {
        let g = four_inputs();
        let (ca, cb) = (to_dnf(&g, &a), to_dnf(&g, &b));
        let (da, db) = (Dnf::from_conjunctions(ca.clone()), Dnf::from_conjunctions(cb.clone()));
        let or = da.or(&db);
        let and = da.and(&db);
        for assignment in 0..16 {
            let (x, y) = (holds(&ca, &g, assignment), holds(&cb, &g, assignment));
            prop_assert_eq!(holds(or.conjunctions(), &g, assignment), x || y);
            prop_assert_eq!(holds(and.conjunctions(), &g, assignment), x && y);
        }
    }
}

#[test]
fn all_causes_follow_effects_order() {
    let g = four_inputs();
    let all = cause::all_causes(&g).unwrap();
    assert_eq!(all.len(), 16);
    assert_eq!(
        all[1].to_string(),
        "X0:False ==> X0:False\nX1:False ==> X1:False\nX2:False ==> X2:False\nX3:True ==> X3:True"
    );
    assert!(eval::diagram_count(&g, 15).is_err());
}
