//! Denotation of the I/O language into interaction trees.
//!
//! Conditionals map to the branch combinator, arithmetic to `natop`,
//! application to strict application, and recursive functions to a
//! guarded fixpoint, so the interpretation of `rec` equals its one-step
//! unfolding.

use std::rc::Rc;

use super::{EvalCtx, IoExpr};
use crate::env::Env;
use crate::signature::IoOps;
use crate::tree::{app_strict, get_nat, gfix, ifz, natop, FunSusp, Hom, ITree};

/// Denotes an expression whose free variables are covered by `env`.
///
/// Panics on an unbound variable; closing the program (or the
/// environment) first is the caller's obligation.
pub fn denote_io(e: &IoExpr, env: &Env, io: IoOps) -> ITree {
    match e {
        IoExpr::Var(x) => env
            .lookup(x)
            .unwrap_or_else(|| panic!("unbound variable {x}")),
        IoExpr::Lit(n) => ITree::Nat(*n),
        IoExpr::Rec { fname, xname, body } => {
            denote_rec(fname.clone(), xname.clone(), body.clone(), env.clone(), io)
        }
        IoExpr::If { cond, then, els } => ifz(
            denote_io(cond, env, io),
            denote_io(then, env, io),
            denote_io(els, env, io),
        ),
        IoExpr::App { func, arg } => app_strict(denote_io(func, env, io), denote_io(arg, env, io)),
        IoExpr::BinOp { op, lhs, rhs } => {
            natop(op.as_fn(), denote_io(lhs, env, io), denote_io(rhs, env, io))
        }
        IoExpr::Input => io.input(),
        IoExpr::Output(inner) => get_nat(denote_io(inner, env, io), move |n| io.output(n)),
    }
}

fn denote_rec(fname: String, xname: String, body: Rc<IoExpr>, env: Env, io: IoOps) -> ITree {
    gfix(move |self_susp| {
        let (fname, xname, body, env) = (fname.clone(), xname.clone(), body.clone(), env.clone());
        ITree::Fun(FunSusp::new(move || {
            let self_tree = self_susp.force();
            let (fname, xname, body, env) =
                (fname.clone(), xname.clone(), body.clone(), env.clone());
            Rc::new(move |arg: ITree| {
                let env = env
                    .extend(xname.clone(), arg)
                    .extend(fname.clone(), self_tree.clone());
                denote_io(&body, &env, io)
            })
        }))
    })
}

/// Denotes an evaluation context as a homomorphism, so that plugging
/// commutes with denotation.
pub fn denote_ectx(k: &EvalCtx, env: &Env, io: IoOps) -> Hom {
    match k {
        EvalCtx::Hole => Hom::identity(),
        EvalCtx::OutputCtx(inner) => {
            let out = Hom::from_fn(move |t| get_nat(t, move |n| io.output(n)));
            Hom::compose(&out, &denote_ectx(inner, env, io))
        }
        EvalCtx::IfCtx(inner, then, els) => {
            let (then_den, els_den) = (denote_io(then, env, io), denote_io(els, env, io));
            let branch = Hom::from_fn(move |t| ifz(t, then_den.clone(), els_den.clone()));
            Hom::compose(&branch, &denote_ectx(inner, env, io))
        }
        EvalCtx::AppR(func, inner) => {
            let func_den = denote_io(func, env, io);
            let apply = Hom::from_fn(move |t| app_strict(func_den.clone(), t));
            Hom::compose(&apply, &denote_ectx(inner, env, io))
        }
        EvalCtx::AppL(inner, arg) => {
            let arg_den = denote_io(arg, env, io);
            let apply = Hom::from_fn(move |t| app_strict(t, arg_den.clone()));
            Hom::compose(&apply, &denote_ectx(inner, env, io))
        }
        EvalCtx::OpR(lhs, op, inner) => {
            let lhs_den = denote_io(lhs, env, io);
            let f = op.as_fn();
            let operate = Hom::from_fn(move |t| natop(f, lhs_den.clone(), t));
            Hom::compose(&operate, &denote_ectx(inner, env, io))
        }
        EvalCtx::OpL(inner, op, rhs) => {
            let rhs_den = denote_io(rhs, env, io);
            let f = op.as_fn();
            let operate = Hom::from_fn(move |t| natop(f, t, rhs_den.clone()));
            Hom::compose(&operate, &denote_ectx(inner, env, io))
        }
    }
}
