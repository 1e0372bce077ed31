//! Denotation of the affine language into interaction trees over the
//! store effects.
//!
//! Every value bound to a variable is wrapped in a store-backed thunk
//! that may be forced at most once: the thunk allocates a flag cell
//! initialized to 0 and, on force, errs with `Lin` if the flag is
//! already set, otherwise sets it and runs the protected computation.
//! Environments are split at binary nodes exactly as the typing
//! derivation dictates.

use std::rc::Rc;

use super::{AffDeriv, DerivNode};
use crate::env::Env;
use crate::signature::{IoOps, Location, StoreOps};
use crate::tree::{
    app_strict, get_nat, get_val, ifz, pair, proj1, proj2, seq, ErrorKind, FunSusp, ITree,
};

/// Wraps a computation in an at-most-once thunk. The result is a `Fun`
/// value (after the flag-cell allocation) whose second force yields
/// `Err(Lin)`.
pub fn thunk_protect(store: StoreOps, t: ITree) -> ITree {
    store.alloc(ITree::Nat(0), move |flag| {
        let t = t.clone();
        ITree::Fun(FunSusp::ready(move |_| {
            ifz(
                store.read(flag),
                ITree::Err(ErrorKind::Lin),
                seq(store.write(flag, ITree::Nat(1)), t.clone()),
            )
        }))
    })
}

/// Forces a thunk: strict application to the dummy value.
pub fn force(t: ITree) -> ITree {
    app_strict(t, ITree::Nat(0))
}

/// Denotes a derivation of the standalone affine language. Embedded I/O
/// terms cannot occur (the affine checker rejects them).
pub fn denote_aff(d: &AffDeriv, env: &Env, store: StoreOps) -> ITree {
    denote_with_embeds(d, env, store, None)
}

/// Shared denotation; the combined language passes the I/O ops handle to
/// give meaning to embedded terms.
pub(crate) fn denote_with_embeds(
    d: &AffDeriv,
    env: &Env,
    store: StoreOps,
    io: Option<IoOps>,
) -> ITree {
    match &d.node {
        DerivNode::Lit(n) => ITree::Nat(*n),
        DerivNode::BoolLit(true) => ITree::Nat(1),
        DerivNode::BoolLit(false) => ITree::Nat(0),
        DerivNode::UnitLit => ITree::Nat(0),
        DerivNode::Var(x) => force(
            env.lookup(x)
                .unwrap_or_else(|| panic!("unbound variable {x}")),
        ),
        DerivNode::Lam { param, body } => {
            let (param, body, env) = (param.clone(), body.clone(), env.clone());
            ITree::Fun(FunSusp::new(move || {
                let (param, body, env) = (param.clone(), body.clone(), env.clone());
                Rc::new(move |arg| {
                    denote_with_embeds(&body, &env.extend(param.clone(), arg), store, io)
                })
            }))
        }
        DerivNode::App { func, arg } => {
            let env_f = env.restrict(&func.used);
            let env_a = env.restrict(&arg.used);
            let func = func.clone();
            get_val(denote_with_embeds(arg, &env_a, store, io), move |x| {
                app_strict(
                    denote_with_embeds(&func, &env_f, store, io),
                    thunk_protect(store, x),
                )
            })
        }
        DerivNode::Pair { left, right } => {
            let env_l = env.restrict(&left.used);
            let env_r = env.restrict(&right.used);
            pair(
                denote_with_embeds(left, &env_l, store, io),
                denote_with_embeds(right, &env_r, store, io),
            )
        }
        DerivNode::LetPair {
            left,
            right,
            rhs,
            body,
        } => {
            let env_rhs = env.restrict(&rhs.used);
            let mut body_names = body.used.clone();
            body_names.remove(left);
            body_names.remove(right);
            let env_body = env.restrict(&body_names);
            let (left, right, body) = (left.clone(), right.clone(), body.clone());
            get_val(denote_with_embeds(rhs, &env_rhs, store, io), move |p| {
                let (left, right, body, env_body) =
                    (left.clone(), right.clone(), body.clone(), env_body.clone());
                let p2 = p.clone();
                get_val(thunk_protect(store, proj1(p)), move |first| {
                    let (left, right, body, env_body) =
                        (left.clone(), right.clone(), body.clone(), env_body.clone());
                    let first = first.clone();
                    get_val(thunk_protect(store, proj2(p2.clone())), move |second| {
                        let env = env_body
                            .extend(left.clone(), first.clone())
                            .extend(right.clone(), second);
                        denote_with_embeds(&body, &env, store, io)
                    })
                })
            })
        }
        DerivNode::Alloc(inner) => get_val(denote_with_embeds(inner, env, store, io), move |x| {
            store.alloc(x, move |loc| ITree::Nat(loc.to_nat()))
        }),
        DerivNode::Dealloc(inner) => get_nat(denote_with_embeds(inner, env, store, io), move |n| {
            store.dealloc(Location::from_nat(n))
        }),
        DerivNode::Replace(target, value) => {
            let env_t = env.restrict(&target.used);
            let env_v = env.restrict(&value.used);
            let target = target.clone();
            get_val(denote_with_embeds(value, &env_v, store, io), move |y| {
                let y = y.clone();
                get_nat(denote_with_embeds(&target, &env_t, store, io), move |n| {
                    let loc = Location::from_nat(n);
                    let y = y.clone();
                    get_val(store.read(loc), move |old| {
                        seq(
                            store.write(loc, y.clone()),
                            pair(old.clone(), ITree::Nat(n)),
                        )
                    })
                })
            })
        }
        DerivNode::Embed { io: io_expr, conv } => {
            let io_ops = io.expect("embedded term outside the combined language");
            crate::interop::to_aff(
                conv,
                crate::lang_io::denote_io(io_expr, &Env::empty(), io_ops),
                store,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::io_store_rig;
    use crate::engine::{run, Outcome};
    use crate::lang_aff::{parse_aff_expr, typecheck_aff_deriv, EmbedPolicy};
    use crate::reify::{GlobalReifier, GlobalState};

    fn rig() -> (GlobalReifier, GlobalState, StoreOps) {
        let (gr, st) = io_store_rig(vec![]);
        let store = StoreOps::embedded_in(&gr.signatures()).unwrap();
        (gr, st, store)
    }

    fn run_aff(src: &str) -> (Outcome, GlobalReifier) {
        let (gr, st, store) = rig();
        let d = typecheck_aff_deriv(&[], &parse_aff_expr(src).unwrap(), EmbedPolicy::Reject)
            .unwrap_or_else(|| panic!("ill-typed: {src}"));
        let t = denote_aff(&d, &Env::empty(), store);
        let (outcome, _) = run(&gr, t, st, 100_000, &[]);
        (outcome, gr)
    }

    #[test]
    fn force_of_protected_value() {
        let (gr, st, store) = rig();
        let (outcome, _) = run(
            &gr,
            force(thunk_protect(store, ITree::Nat(5))),
            st,
            1000,
            &[],
        );
        assert_eq!(outcome.value_nat(), Some(5));
    }

    #[test]
    fn second_force_breaks_linearity() {
        let (gr, st, store) = rig();
        let prog = get_val(thunk_protect(store, ITree::Nat(5)), |th| {
            seq(force(th.clone()), force(th))
        });
        let (outcome, _) = run(&gr, prog, st, 1000, &[]);
        assert!(matches!(
            outcome,
            Outcome::Errored {
                kind: ErrorKind::Lin,
                ..
            }
        ));
    }

    #[test]
    fn protection_allocates_a_flag_cell() {
        let (gr, st, store) = rig();
        let (outcome, _) = run(&gr, thunk_protect(store, ITree::Nat(5)), st, 1000, &[]);
        let heap = outcome.state().heap(0).unwrap();
        assert_eq!(heap.domain(), vec![0]);
        assert!(crate::compare::layer_eq(
            &heap.lookup(Location(0)).unwrap().force(),
            &ITree::Nat(0),
            2
        ));
        assert!(outcome.is_value());
    }

    #[test]
    fn identity_application() {
        let (outcome, _) = run_aff("(app (lam x x) 7)");
        assert_eq!(outcome.value_nat(), Some(7));
    }

    #[test]
    fn letpair_projects_components() {
        let (outcome, _) = run_aff("(letpair a b (pair 1 2) a)");
        assert_eq!(outcome.value_nat(), Some(1));
        let (outcome, _) = run_aff("(letpair a b (pair 1 2) b)");
        assert_eq!(outcome.value_nat(), Some(2));
    }

    #[test]
    fn alloc_then_dealloc_clears_the_cell() {
        let (gr, st, store) = rig();
        let d = typecheck_aff_deriv(
            &[],
            &parse_aff_expr("(app (lam l (dealloc l)) (alloc 42))").unwrap(),
            EmbedPolicy::Reject,
        )
        .unwrap();
        let (outcome, _) = run(&gr, denote_aff(&d, &Env::empty(), store), st, 100_000, &[]);
        assert_eq!(outcome.value_nat(), Some(0));
        let heap = outcome.state().heap(0).unwrap();
        // the allocated value cell (location 0) is gone; only the
        // argument thunk's flag remains
        assert!(!heap.domain().contains(&0));
    }

    #[test]
    fn replace_returns_old_value_and_location() {
        let (outcome, _) = run_aff("(letpair old r (replace (alloc 41) 9) old)");
        assert_eq!(outcome.value_nat(), Some(41));
    }

    #[test]
    fn booleans_and_unit_encode_as_naturals() {
        for (src, expected) in [("#t", 1), ("#f", 0), ("unit", 0)] {
            let (outcome, _) = run_aff(src);
            assert_eq!(outcome.value_nat(), Some(expected), "{src}");
        }
    }

    #[test]
    fn boolean_literal_is_immediate() {
        let (_, _, store) = rig();
        let d =
            typecheck_aff_deriv(&[], &parse_aff_expr("#t").unwrap(), EmbedPolicy::Reject).unwrap();
        assert!(crate::compare::layer_eq(
            &denote_aff(&d, &Env::empty(), store),
            &ITree::Nat(1),
            2
        ));
    }
}
