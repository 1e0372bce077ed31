//! Approximate tree comparison.
//!
//! Tree equality is undecidable, so tests compare by head shape plus
//! bounded forcing: suspensions are compared by forcing one layer,
//! function heads by probing with opaque `Nat` arguments, and effect
//! continuations by feeding a battery of payload shapes. For whole
//! computations, [`run_eq`] compares reduction outcomes under shared fuel
//! and state.

use crate::engine::{run, Outcome};
use crate::reify::{GlobalReifier, GlobalState, HeapState, IoState, LocalState};
use crate::signature::{Location, Payload};
use crate::tree::{ErrorKind, ITree, TreeSusp};

const FUN_PROBES: [u64; 2] = [97, 11];

fn continuation_probes() -> Vec<Payload> {
    vec![
        Payload::Unit,
        Payload::Num(7),
        Payload::Loc(Location(3)),
        Payload::Tree(TreeSusp::ready(ITree::Nat(13))),
        Payload::LocTree(Location(1), TreeSusp::ready(ITree::Nat(13))),
    ]
}

/// Do the two trees have the same head constructor (and the same leaf
/// data for `Nat`/`Err`)?
pub fn head_eq(a: &ITree, b: &ITree) -> bool {
    match (a, b) {
        (ITree::Nat(n), ITree::Nat(m)) => n == m,
        (ITree::Err(e), ITree::Err(f)) => e == f,
        (ITree::Fun(_), ITree::Fun(_)) => true,
        (ITree::Tau(_), ITree::Tau(_)) => true,
        (ITree::Vis(v), ITree::Vis(w)) => v.op == w.op,
        _ => false,
    }
}

fn payload_eq(a: &Payload, b: &Payload, depth: u32) -> bool {
    match (a, b) {
        (Payload::Unit, Payload::Unit) => true,
        (Payload::Num(n), Payload::Num(m)) => n == m,
        (Payload::Loc(l), Payload::Loc(k)) => l == k,
        (Payload::Tree(s), Payload::Tree(t)) => layer_eq(&s.force(), &t.force(), depth),
        (Payload::LocTree(l, s), Payload::LocTree(k, t)) => {
            l == k && layer_eq(&s.force(), &t.force(), depth)
        }
        _ => false,
    }
}

/// Structural comparison down to `depth` forced layers.
pub fn layer_eq(a: &ITree, b: &ITree, depth: u32) -> bool {
    if depth == 0 {
        return head_eq(a, b);
    }
    match (a, b) {
        (ITree::Nat(n), ITree::Nat(m)) => n == m,
        (ITree::Err(e), ITree::Err(f)) => e == f,
        (ITree::Tau(s), ITree::Tau(t)) => layer_eq(&s.force(), &t.force(), depth - 1),
        (ITree::Fun(f), ITree::Fun(g)) => {
            let (f, g) = (f.force(), g.force());
            FUN_PROBES
                .iter()
                .all(|&p| layer_eq(&f(ITree::Nat(p)), &g(ITree::Nat(p)), depth - 1))
        }
        (ITree::Vis(v), ITree::Vis(w)) => {
            v.op == w.op
                && payload_eq(&v.input, &w.input, depth - 1)
                && continuation_probes()
                    .iter()
                    .all(|p| match (v.k.call(p), w.k.call(p)) {
                        (None, None) => true,
                        (Some(s), Some(t)) => layer_eq(&s.force(), &t.force(), depth - 1),
                        _ => false,
                    })
        }
        _ => false,
    }
}

/// Value-level state comparison: tapes by value, heaps by domain with
/// cell contents compared one forced layer deep.
pub fn state_shape_eq(a: &GlobalState, b: &GlobalState) -> bool {
    fn heap_shape_eq(a: &HeapState, b: &HeapState) -> bool {
        let dom = a.domain();
        dom == b.domain()
            && dom.iter().all(|&l| {
                let loc = Location(l);
                layer_eq(
                    &a.lookup(loc).unwrap().force(),
                    &b.lookup(loc).unwrap().force(),
                    1,
                )
            })
    }
    a.locals.len() == b.locals.len()
        && a.locals.iter().zip(&b.locals).all(|(x, y)| match (x, y) {
            (LocalState::Io(p), LocalState::Io(q)) => p == q,
            (LocalState::Heap(p), LocalState::Heap(q)) => heap_shape_eq(p, q),
            _ => false,
        })
}

/// Observational comparison of reduction outcomes: classification, value
/// head, step count and final state (shape-level) must all agree.
pub fn outcome_eq(a: &Outcome, b: &Outcome) -> bool {
    let same_state = state_shape_eq(a.state(), b.state());
    match (a, b) {
        (
            Outcome::Value {
                tree: t1,
                steps: s1,
                ..
            },
            Outcome::Value {
                tree: t2,
                steps: s2,
                ..
            },
        ) => same_state && s1 == s2 && head_eq(t1, t2),
        (
            Outcome::Errored {
                kind: k1,
                steps: s1,
                ..
            },
            Outcome::Errored {
                kind: k2,
                steps: s2,
                ..
            },
        ) => same_state && s1 == s2 && k1 == k2,
        (Outcome::OutOfFuel { steps: s1, .. }, Outcome::OutOfFuel { steps: s2, .. }) => {
            same_state && s1 == s2
        }
        (Outcome::Stuck { steps: s1, .. }, Outcome::Stuck { steps: s2, .. }) => {
            same_state && s1 == s2
        }
        _ => false,
    }
}

/// Runs both trees from the same state under the same fuel and compares
/// the outcomes observationally.
pub fn run_eq(
    gr: &GlobalReifier,
    a: &ITree,
    b: &ITree,
    state: &GlobalState,
    fuel: u64,
    allowed: &[ErrorKind],
) -> bool {
    let (oa, _) = run(gr, a.clone(), state.clone(), fuel, allowed);
    let (ob, _) = run(gr, b.clone(), state.clone(), fuel, allowed);
    outcome_eq(&oa, &ob)
}

/// Convenience for tests: an empty-tape, empty-heap comparison rig.
pub fn io_store_rig(input: Vec<u64>) -> (GlobalReifier, GlobalState) {
    use crate::reify::{combine_reifiers, io_reifier, store_reifier};
    let gr = combine_reifiers(vec![store_reifier(), io_reifier()]);
    let mut st = gr.initial_state();
    st.locals[1] = LocalState::Io(IoState::new(input, vec![]));
    (gr, st)
}
