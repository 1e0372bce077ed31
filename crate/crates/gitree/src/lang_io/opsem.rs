//! Small-step operational semantics with explicit evaluation contexts.
//!
//! Contexts encode call-by-value, right-to-left evaluation order. A
//! non-value expression decomposes uniquely into a context and a redex
//! position; stepping the redex and plugging it back is one machine step.

use std::rc::Rc;

use super::{subst, IoConfig, IoExpr, NatOp};
use crate::reify::IoState;

/// Branch convention for conditionals. `NonzeroThen` is the semantics;
/// `NonzeroElse` is a deliberately wrong variant kept for differential
/// testing of the comparison tooling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IfConvention {
    #[default]
    NonzeroThen,
    NonzeroElse,
}

/// Evaluation contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalCtx {
    Hole,
    /// `output(K)`
    OutputCtx(Box<EvalCtx>),
    /// `if K then e1 else e2`
    IfCtx(Box<EvalCtx>, Rc<IoExpr>, Rc<IoExpr>),
    /// `e K` — the argument evaluates first
    AppR(Rc<IoExpr>, Box<EvalCtx>),
    /// `K v` — the function evaluates once the argument is a value
    AppL(Box<EvalCtx>, Rc<IoExpr>),
    /// `e op K`
    OpR(Rc<IoExpr>, NatOp, Box<EvalCtx>),
    /// `K op v`
    OpL(Box<EvalCtx>, NatOp, Rc<IoExpr>),
}

/// Replaces the hole of `k` with `e`. Total.
pub fn plug(k: &EvalCtx, e: IoExpr) -> IoExpr {
    match k {
        EvalCtx::Hole => e,
        EvalCtx::OutputCtx(inner) => IoExpr::Output(Rc::new(plug(inner, e))),
        EvalCtx::IfCtx(inner, then, els) => IoExpr::If {
            cond: Rc::new(plug(inner, e)),
            then: then.clone(),
            els: els.clone(),
        },
        EvalCtx::AppR(func, inner) => IoExpr::App {
            func: func.clone(),
            arg: Rc::new(plug(inner, e)),
        },
        EvalCtx::AppL(inner, arg) => IoExpr::App {
            func: Rc::new(plug(inner, e)),
            arg: arg.clone(),
        },
        EvalCtx::OpR(lhs, op, inner) => IoExpr::BinOp {
            op: *op,
            lhs: lhs.clone(),
            rhs: Rc::new(plug(inner, e)),
        },
        EvalCtx::OpL(inner, op, rhs) => IoExpr::BinOp {
            op: *op,
            lhs: Rc::new(plug(inner, e)),
            rhs: rhs.clone(),
        },
    }
}

/// Unique right-to-left decomposition of a non-value expression into an
/// evaluation context and the expression at the redex position. Values
/// do not decompose.
pub fn decompose(e: &IoExpr) -> Option<(EvalCtx, IoExpr)> {
    if e.is_value() {
        return None;
    }
    match e {
        IoExpr::Var(_) | IoExpr::Input => Some((EvalCtx::Hole, e.clone())),
        IoExpr::Output(inner) => {
            if inner.is_value() {
                Some((EvalCtx::Hole, e.clone()))
            } else {
                let (k, r) = decompose(inner)?;
                Some((EvalCtx::OutputCtx(Box::new(k)), r))
            }
        }
        IoExpr::If { cond, then, els } => {
            if cond.is_value() {
                Some((EvalCtx::Hole, e.clone()))
            } else {
                let (k, r) = decompose(cond)?;
                Some((EvalCtx::IfCtx(Box::new(k), then.clone(), els.clone()), r))
            }
        }
        IoExpr::App { func, arg } => {
            if !arg.is_value() {
                let (k, r) = decompose(arg)?;
                Some((EvalCtx::AppR(func.clone(), Box::new(k)), r))
            } else if !func.is_value() {
                let (k, r) = decompose(func)?;
                Some((EvalCtx::AppL(Box::new(k), arg.clone()), r))
            } else {
                Some((EvalCtx::Hole, e.clone()))
            }
        }
        IoExpr::BinOp { op, lhs, rhs } => {
            if !rhs.is_value() {
                let (k, r) = decompose(rhs)?;
                Some((EvalCtx::OpR(lhs.clone(), *op, Box::new(k)), r))
            } else if !lhs.is_value() {
                let (k, r) = decompose(lhs)?;
                Some((EvalCtx::OpL(Box::new(k), *op, rhs.clone()), r))
            } else {
                Some((EvalCtx::Hole, e.clone()))
            }
        }
        IoExpr::Lit(_) | IoExpr::Rec { .. } => unreachable!("values do not decompose"),
    }
}

/// Contracts a redex whose operands are values. `None` on stuck shapes
/// (applying a literal, branching on a function, reading an empty tape).
fn step_redex(redex: &IoExpr, tapes: &IoState, conv: IfConvention) -> Option<(IoExpr, IoState)> {
    match redex {
        IoExpr::App { func, arg } => match (func.as_ref(), arg.as_ref()) {
            (IoExpr::Rec { fname, xname, body }, v) if v.is_value() => {
                let after_arg = subst(body, xname, v);
                let next = subst(&after_arg, fname, func);
                Some((next, tapes.clone()))
            }
            _ => None,
        },
        IoExpr::BinOp { op, lhs, rhs } => match (lhs.as_ref(), rhs.as_ref()) {
            (IoExpr::Lit(a), IoExpr::Lit(b)) => {
                Some((IoExpr::Lit(op.apply(*a, *b)), tapes.clone()))
            }
            _ => None,
        },
        IoExpr::If { cond, then, els } => match cond.as_ref() {
            IoExpr::Lit(n) => {
                let nonzero = *n > 0;
                let pick_then = match conv {
                    IfConvention::NonzeroThen => nonzero,
                    IfConvention::NonzeroElse => !nonzero,
                };
                let branch = if pick_then { then } else { els };
                Some((branch.as_ref().clone(), tapes.clone()))
            }
            _ => None,
        },
        IoExpr::Input => {
            let (&n, rest) = tapes.input.split_first()?;
            Some((
                IoExpr::Lit(n),
                IoState::new(rest.to_vec(), tapes.output.clone()),
            ))
        }
        IoExpr::Output(inner) => match inner.as_ref() {
            IoExpr::Lit(m) => {
                let mut output = Vec::with_capacity(tapes.output.len() + 1);
                output.push(*m);
                output.extend_from_slice(&tapes.output);
                Some((IoExpr::Lit(0), IoState::new(tapes.input.clone(), output)))
            }
            _ => None,
        },
        _ => None,
    }
}

/// One machine step under the flipped-branch mutant or the real
/// semantics.
pub fn op_step_with(cfg: &IoConfig, conv: IfConvention) -> Option<IoConfig> {
    let (ctx, redex) = decompose(&cfg.expr)?;
    let (next, tapes) = step_redex(&redex, &cfg.tapes, conv)?;
    Some(IoConfig {
        expr: plug(&ctx, next),
        tapes,
    })
}

/// One machine step. `None` on values and on stuck terms.
pub fn op_step(cfg: &IoConfig) -> Option<IoConfig> {
    op_step_with(cfg, IfConvention::NonzeroThen)
}

/// Result of iterating the step relation under a fuel bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpRunResult {
    /// No further step exists: a value or a stuck term.
    Terminal {
        config: IoConfig,
        steps: u64,
    },
    OutOfFuel {
        config: IoConfig,
        steps: u64,
    },
}

impl OpRunResult {
    pub fn config(&self) -> &IoConfig {
        match self {
            OpRunResult::Terminal { config, .. } | OpRunResult::OutOfFuel { config, .. } => config,
        }
    }
}

/// Iterates [`op_step`] (or its mutant) up to `fuel` times.
pub fn op_run(cfg: IoConfig, fuel: u64, conv: IfConvention) -> OpRunResult {
    let mut cur = cfg;
    let mut steps = 0;
    while steps < fuel {
        match op_step_with(&cur, conv) {
            Some(next) => {
                cur = next;
                steps += 1;
            }
            None => return OpRunResult::Terminal { config: cur, steps },
        }
    }
    if op_step_with(&cur, conv).is_none() {
        OpRunResult::Terminal { config: cur, steps }
    } else {
        OpRunResult::OutOfFuel { config: cur, steps }
    }
}
