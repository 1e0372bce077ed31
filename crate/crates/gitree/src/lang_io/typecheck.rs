//! Type checking for the I/O language.
//!
//! Binders carry no annotations, so checking runs structural unification
//! over the two type constructors. Recursive functions are typed with
//! the body at the result type (`f : t1 -> t2, x : t1 |- body : t2`).
//! Type variables left unconstrained by a closed program default to
//! `nat`.

use std::collections::HashMap;

use super::{IoExpr, IoType};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Nat,
    Arrow(Box<Ty>, Box<Ty>),
    Var(u32),
}

#[derive(Default)]
struct Unifier {
    bindings: HashMap<u32, Ty>,
    next: u32,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        let v = self.next;
        self.next += 1;
        Ty::Var(v)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.bindings.get(v) {
                Some(bound) => self.resolve(bound),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    fn occurs(&self, v: u32, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => v == w,
            Ty::Nat => false,
            Ty::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (a, b) {
            (Ty::Nat, Ty::Nat) => true,
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if let Ty::Var(w) = t {
                    if v == w {
                        return true;
                    }
                }
                if self.occurs(v, &t) {
                    return false;
                }
                self.bindings.insert(v, t);
                true
            }
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    /// Fully resolves a type, defaulting unconstrained variables to nat.
    fn zonk(&self, t: &Ty) -> IoType {
        match self.resolve(t) {
            Ty::Nat | Ty::Var(_) => IoType::Nat,
            Ty::Arrow(a, b) => IoType::Arrow(Box::new(self.zonk(&a)), Box::new(self.zonk(&b))),
        }
    }
}

fn embed(t: &IoType) -> Ty {
    match t {
        IoType::Nat => Ty::Nat,
        IoType::Arrow(a, b) => Ty::Arrow(Box::new(embed(a)), Box::new(embed(b))),
    }
}

fn infer(u: &mut Unifier, ctx: &mut Vec<(String, Ty)>, e: &IoExpr) -> Option<Ty> {
    match e {
        IoExpr::Var(x) => ctx
            .iter()
            .rev()
            .find(|(name, _)| name == x)
            .map(|(_, t)| t.clone()),
        IoExpr::Lit(_) | IoExpr::Input => Some(Ty::Nat),
        IoExpr::Rec { fname, xname, body } => {
            let dom = u.fresh();
            let cod = u.fresh();
            let fun = Ty::Arrow(Box::new(dom.clone()), Box::new(cod.clone()));
            ctx.push((fname.clone(), fun.clone()));
            ctx.push((xname.clone(), dom));
            let t_body = infer(u, ctx, body);
            ctx.pop();
            ctx.pop();
            if !u.unify(&t_body?, &cod) {
                return None;
            }
            Some(fun)
        }
        IoExpr::If { cond, then, els } => {
            let t_cond = infer(u, ctx, cond)?;
            if !u.unify(&t_cond, &Ty::Nat) {
                return None;
            }
            let t_then = infer(u, ctx, then)?;
            let t_els = infer(u, ctx, els)?;
            if !u.unify(&t_then, &t_els) {
                return None;
            }
            Some(t_then)
        }
        IoExpr::App { func, arg } => {
            let t_func = infer(u, ctx, func)?;
            let t_arg = infer(u, ctx, arg)?;
            let res = u.fresh();
            if !u.unify(&t_func, &Ty::Arrow(Box::new(t_arg), Box::new(res.clone()))) {
                return None;
            }
            Some(res)
        }
        IoExpr::BinOp { lhs, rhs, .. } => {
            let t_lhs = infer(u, ctx, lhs)?;
            let t_rhs = infer(u, ctx, rhs)?;
            if u.unify(&t_lhs, &Ty::Nat) && u.unify(&t_rhs, &Ty::Nat) {
                Some(Ty::Nat)
            } else {
                None
            }
        }
        IoExpr::Output(inner) => {
            let t = infer(u, ctx, inner)?;
            if u.unify(&t, &Ty::Nat) {
                Some(Ty::Nat)
            } else {
                None
            }
        }
    }
}

/// Infers the type of `e` under `ctx`; `None` for ill-typed terms.
pub fn typecheck_io(ctx: &[(String, IoType)], e: &IoExpr) -> Option<IoType> {
    let mut u = Unifier::default();
    let mut env: Vec<(String, Ty)> = ctx
        .iter()
        .map(|(name, t)| (name.clone(), embed(t)))
        .collect();
    let t = infer(&mut u, &mut env, e)?;
    Some(u.zonk(&t))
}

/// Checks `e` against an expected type (the annotation context for
/// underdetermined terms such as bare recursive functions).
pub fn check_io_type(ctx: &[(String, IoType)], e: &IoExpr, expected: &IoType) -> bool {
    let mut u = Unifier::default();
    let mut env: Vec<(String, Ty)> = ctx
        .iter()
        .map(|(name, t)| (name.clone(), embed(t)))
        .collect();
    match infer(&mut u, &mut env, e) {
        Some(t) => u.unify(&t, &embed(expected)),
        None => false,
    }
}
