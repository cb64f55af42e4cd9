#![no_main]

use libfuzzer_sys::fuzz_target;
use ncause_core::{cause, dot, eval, lang};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(lowered) = lang::load(text) else {
        return;
    };
    for d in lowered.diagrams.values() {
        let g = d.graph();
        if g.len() > 24 || g.ids().any(|id| g.preds(id).len() > 6) {
            continue;
        }
        let _ = eval::evaluate(d);
        let _ = dot::dot_diagram(d);
        let _ = cause::causes(d);
    }
    for g in lowered.graphs.values() {
        let _ = dot::dot_graph(g);
        if g.len() <= 12 {
            let _ = eval::effects_with_limit(g, 256);
        }
    }
});
