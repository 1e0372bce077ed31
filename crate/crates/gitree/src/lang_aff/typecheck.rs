//! Algorithmic affine type checking.
//!
//! Checking is structural unification plus used-set tracking: every
//! subterm reports the set of variables it consumes, and rules with two
//! subterms require the sets to be disjoint. Variables may go unused
//! (affine weakening). The checker also records, per node, the resolved
//! type and the used sets, producing the derivation the denotation needs
//! for environment splitting. Type variables left unconstrained default
//! to `nat`.

use std::collections::HashMap;
use std::rc::Rc;

use super::{AffExpr, AffType, UsedSet};
use crate::interop::{conv_check, Conversion};
use crate::lang_io::{check_io_type, IoExpr};

#[derive(Clone, Debug)]
enum Ty {
    Bool,
    Nat,
    Unit,
    Tensor(Box<Ty>, Box<Ty>),
    Lolli(Box<Ty>, Box<Ty>),
    Ref(Box<Ty>),
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
            Ty::Bool | Ty::Nat | Ty::Unit => false,
            Ty::Tensor(a, b) | Ty::Lolli(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            Ty::Ref(a) => self.occurs(v, &a),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (a, b) {
            (Ty::Bool, Ty::Bool) | (Ty::Nat, Ty::Nat) | (Ty::Unit, Ty::Unit) => true,
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
            (Ty::Tensor(a1, b1), Ty::Tensor(a2, b2)) | (Ty::Lolli(a1, b1), Ty::Lolli(a2, b2)) => {
                self.unify(&a1, &a2) && self.unify(&b1, &b2)
            }
            (Ty::Ref(a1), Ty::Ref(a2)) => self.unify(&a1, &a2),
            _ => false,
        }
    }

    fn zonk(&self, t: &Ty) -> AffType {
        match self.resolve(t) {
            Ty::Bool => AffType::Bool,
            Ty::Nat | Ty::Var(_) => AffType::Nat,
            Ty::Unit => AffType::Unit,
            Ty::Tensor(a, b) => AffType::Tensor(Box::new(self.zonk(&a)), Box::new(self.zonk(&b))),
            Ty::Lolli(a, b) => AffType::Lolli(Box::new(self.zonk(&a)), Box::new(self.zonk(&b))),
            Ty::Ref(a) => AffType::Ref(Box::new(self.zonk(&a))),
        }
    }
}

fn embed_ty(t: &AffType) -> Ty {
    match t {
        AffType::Bool => Ty::Bool,
        AffType::Nat => Ty::Nat,
        AffType::Unit => Ty::Unit,
        AffType::Tensor(a, b) => Ty::Tensor(Box::new(embed_ty(a)), Box::new(embed_ty(b))),
        AffType::Lolli(a, b) => Ty::Lolli(Box::new(embed_ty(a)), Box::new(embed_ty(b))),
        AffType::Ref(a) => Ty::Ref(Box::new(embed_ty(a))),
    }
}

/// Whether embedded I/O expressions are part of the language being
/// checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedPolicy {
    Reject,
    Allow,
}

/// A typing derivation: the expression shape annotated per node with its
/// resolved type and the set of variables it consumes. The denotation
/// consumes this (not raw syntax) because environment splitting at
/// binary nodes is determined by the derivation.
#[derive(Clone, Debug)]
pub struct AffDeriv {
    pub node: DerivNode,
    pub ty: AffType,
    pub used: UsedSet,
}

#[derive(Clone, Debug)]
pub enum DerivNode {
    Lit(u64),
    BoolLit(bool),
    UnitLit,
    Var(String),
    Lam {
        param: String,
        body: Rc<AffDeriv>,
    },
    App {
        func: Rc<AffDeriv>,
        arg: Rc<AffDeriv>,
    },
    Pair {
        left: Rc<AffDeriv>,
        right: Rc<AffDeriv>,
    },
    LetPair {
        left: String,
        right: String,
        rhs: Rc<AffDeriv>,
        body: Rc<AffDeriv>,
    },
    Alloc(Rc<AffDeriv>),
    Dealloc(Rc<AffDeriv>),
    Replace(Rc<AffDeriv>, Rc<AffDeriv>),
    Embed {
        io: Rc<IoExpr>,
        conv: Conversion,
    },
}

/// Derivation annotated with the not-yet-resolved types.
struct RawDeriv {
    node: RawNode,
    ty: Ty,
    used: UsedSet,
}

enum RawNode {
    Lit(u64),
    BoolLit(bool),
    UnitLit,
    Var(String),
    Lam {
        param: String,
        body: Box<RawDeriv>,
    },
    App {
        func: Box<RawDeriv>,
        arg: Box<RawDeriv>,
    },
    Pair {
        left: Box<RawDeriv>,
        right: Box<RawDeriv>,
    },
    LetPair {
        left: String,
        right: String,
        rhs: Box<RawDeriv>,
        body: Box<RawDeriv>,
    },
    Alloc(Box<RawDeriv>),
    Dealloc(Box<RawDeriv>),
    Replace(Box<RawDeriv>, Box<RawDeriv>),
    Embed {
        io: Rc<IoExpr>,
        conv: Conversion,
    },
}

fn disjoint(a: &UsedSet, b: &UsedSet) -> bool {
    a.intersection(b).next().is_none()
}

fn union(a: &UsedSet, b: &UsedSet) -> UsedSet {
    a.union(b).cloned().collect()
}

fn infer(
    u: &mut Unifier,
    ctx: &mut Vec<(String, Ty)>,
    e: &AffExpr,
    embeds: EmbedPolicy,
) -> Option<RawDeriv> {
    match e {
        AffExpr::Lit(n) => Some(RawDeriv {
            node: RawNode::Lit(*n),
            ty: Ty::Nat,
            used: UsedSet::new(),
        }),
        AffExpr::BoolLit(b) => Some(RawDeriv {
            node: RawNode::BoolLit(*b),
            ty: Ty::Bool,
            used: UsedSet::new(),
        }),
        AffExpr::UnitLit => Some(RawDeriv {
            node: RawNode::UnitLit,
            ty: Ty::Unit,
            used: UsedSet::new(),
        }),
        AffExpr::Var(x) => {
            let ty = ctx
                .iter()
                .rev()
                .find(|(name, _)| name == x)
                .map(|(_, t)| t.clone())?;
            Some(RawDeriv {
                node: RawNode::Var(x.clone()),
                ty,
                used: [x.clone()].into(),
            })
        }
        AffExpr::Lam { param, body } => {
            let dom = u.fresh();
            ctx.push((param.clone(), dom.clone()));
            let body_d = infer(u, ctx, body, embeds);
            ctx.pop();
            let body_d = body_d?;
            let mut used = body_d.used.clone();
            used.remove(param);
            let ty = Ty::Lolli(Box::new(dom), Box::new(body_d.ty.clone()));
            Some(RawDeriv {
                node: RawNode::Lam {
                    param: param.clone(),
                    body: Box::new(body_d),
                },
                ty,
                used,
            })
        }
        AffExpr::App { func, arg } => {
            let func_d = infer(u, ctx, func, embeds)?;
            let arg_d = infer(u, ctx, arg, embeds)?;
            if !disjoint(&func_d.used, &arg_d.used) {
                return None;
            }
            let res = u.fresh();
            if !u.unify(
                &func_d.ty,
                &Ty::Lolli(Box::new(arg_d.ty.clone()), Box::new(res.clone())),
            ) {
                return None;
            }
            let used = union(&func_d.used, &arg_d.used);
            Some(RawDeriv {
                node: RawNode::App {
                    func: Box::new(func_d),
                    arg: Box::new(arg_d),
                },
                ty: res,
                used,
            })
        }
        AffExpr::Pair { left, right } => {
            let left_d = infer(u, ctx, left, embeds)?;
            let right_d = infer(u, ctx, right, embeds)?;
            if !disjoint(&left_d.used, &right_d.used) {
                return None;
            }
            let ty = Ty::Tensor(Box::new(left_d.ty.clone()), Box::new(right_d.ty.clone()));
            let used = union(&left_d.used, &right_d.used);
            Some(RawDeriv {
                node: RawNode::Pair {
                    left: Box::new(left_d),
                    right: Box::new(right_d),
                },
                ty,
                used,
            })
        }
        AffExpr::LetPair {
            left,
            right,
            rhs,
            body,
        } => {
            let rhs_d = infer(u, ctx, rhs, embeds)?;
            let (a, b) = (u.fresh(), u.fresh());
            if !u.unify(
                &rhs_d.ty,
                &Ty::Tensor(Box::new(a.clone()), Box::new(b.clone())),
            ) {
                return None;
            }
            ctx.push((left.clone(), a));
            ctx.push((right.clone(), b));
            let body_d = infer(u, ctx, body, embeds);
            ctx.pop();
            ctx.pop();
            let body_d = body_d?;
            let mut body_used = body_d.used.clone();
            body_used.remove(left);
            body_used.remove(right);
            if !disjoint(&rhs_d.used, &body_used) {
                return None;
            }
            let ty = body_d.ty.clone();
            let used = union(&rhs_d.used, &body_used);
            Some(RawDeriv {
                node: RawNode::LetPair {
                    left: left.clone(),
                    right: right.clone(),
                    rhs: Box::new(rhs_d),
                    body: Box::new(body_d),
                },
                ty,
                used,
            })
        }
        AffExpr::Alloc(e) => {
            let d = infer(u, ctx, e, embeds)?;
            let ty = Ty::Ref(Box::new(d.ty.clone()));
            let used = d.used.clone();
            Some(RawDeriv {
                node: RawNode::Alloc(Box::new(d)),
                ty,
                used,
            })
        }
        AffExpr::Dealloc(e) => {
            let d = infer(u, ctx, e, embeds)?;
            let inner = u.fresh();
            if !u.unify(&d.ty, &Ty::Ref(Box::new(inner))) {
                return None;
            }
            let used = d.used.clone();
            Some(RawDeriv {
                node: RawNode::Dealloc(Box::new(d)),
                ty: Ty::Unit,
                used,
            })
        }
        AffExpr::Replace(e1, e2) => {
            let d1 = infer(u, ctx, e1, embeds)?;
            let d2 = infer(u, ctx, e2, embeds)?;
            if !disjoint(&d1.used, &d2.used) {
                return None;
            }
            let old = u.fresh();
            if !u.unify(&d1.ty, &Ty::Ref(Box::new(old.clone()))) {
                return None;
            }
            // strong update: the reference now carries the new value's type
            let ty = Ty::Tensor(Box::new(old), Box::new(Ty::Ref(Box::new(d2.ty.clone()))));
            let used = union(&d1.used, &d2.used);
            Some(RawDeriv {
                node: RawNode::Replace(Box::new(d1), Box::new(d2)),
                ty,
                used,
            })
        }
        AffExpr::Embed { io, io_ty, aff_ty } => {
            if embeds == EmbedPolicy::Reject {
                return None;
            }
            // embedded terms are closed and consume no affine variables
            if !check_io_type(&[], io, io_ty) {
                return None;
            }
            let conv = conv_check(io_ty, aff_ty)?;
            Some(RawDeriv {
                node: RawNode::Embed {
                    io: io.clone(),
                    conv,
                },
                ty: embed_ty(aff_ty),
                used: UsedSet::new(),
            })
        }
    }
}

fn resolve(u: &Unifier, d: &RawDeriv) -> AffDeriv {
    let node = match &d.node {
        RawNode::Lit(n) => DerivNode::Lit(*n),
        RawNode::BoolLit(b) => DerivNode::BoolLit(*b),
        RawNode::UnitLit => DerivNode::UnitLit,
        RawNode::Var(x) => DerivNode::Var(x.clone()),
        RawNode::Lam { param, body } => DerivNode::Lam {
            param: param.clone(),
            body: Rc::new(resolve(u, body)),
        },
        RawNode::App { func, arg } => DerivNode::App {
            func: Rc::new(resolve(u, func)),
            arg: Rc::new(resolve(u, arg)),
        },
        RawNode::Pair { left, right } => DerivNode::Pair {
            left: Rc::new(resolve(u, left)),
            right: Rc::new(resolve(u, right)),
        },
        RawNode::LetPair {
            left,
            right,
            rhs,
            body,
        } => DerivNode::LetPair {
            left: left.clone(),
            right: right.clone(),
            rhs: Rc::new(resolve(u, rhs)),
            body: Rc::new(resolve(u, body)),
        },
        RawNode::Alloc(d) => DerivNode::Alloc(Rc::new(resolve(u, d))),
        RawNode::Dealloc(d) => DerivNode::Dealloc(Rc::new(resolve(u, d))),
        RawNode::Replace(d1, d2) => {
            DerivNode::Replace(Rc::new(resolve(u, d1)), Rc::new(resolve(u, d2)))
        }
        RawNode::Embed { io, conv } => DerivNode::Embed {
            io: io.clone(),
            conv: conv.clone(),
        },
    };
    AffDeriv {
        node,
        ty: u.zonk(&d.ty),
        used: d.used.clone(),
    }
}

/// Full checking entry point: type, used set and derivation.
pub fn typecheck_aff_deriv(
    ctx: &[(String, AffType)],
    e: &AffExpr,
    embeds: EmbedPolicy,
) -> Option<AffDeriv> {
    let mut u = Unifier::default();
    let mut env: Vec<(String, Ty)> = ctx
        .iter()
        .map(|(name, t)| (name.clone(), embed_ty(t)))
        .collect();
    let raw = infer(&mut u, &mut env, e, embeds)?;
    Some(resolve(&u, &raw))
}

/// Checks against an expected type; underdetermined binders (an unused
/// parameter, say) take their types from the annotation instead of
/// defaulting.
pub fn typecheck_aff_deriv_at(
    ctx: &[(String, AffType)],
    e: &AffExpr,
    expected: &AffType,
    embeds: EmbedPolicy,
) -> Option<AffDeriv> {
    let mut u = Unifier::default();
    let mut env: Vec<(String, Ty)> = ctx
        .iter()
        .map(|(name, t)| (name.clone(), embed_ty(t)))
        .collect();
    let raw = infer(&mut u, &mut env, e, embeds)?;
    if !u.unify(&raw.ty, &embed_ty(expected)) {
        return None;
    }
    Some(resolve(&u, &raw))
}

/// Affine checking for the standalone language (embeds rejected):
/// returns the type and the set of variables consumed.
pub fn typecheck_aff(ctx: &[(String, AffType)], e: &AffExpr) -> Option<(AffType, UsedSet)> {
    let d = typecheck_aff_deriv(ctx, e, EmbedPolicy::Reject)?;
    Some((d.ty, d.used))
}
