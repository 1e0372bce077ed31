//! A PCF-like language with input/output effects: recursive functions,
//! naturals, conditionals and tape I/O, with a substitution-based
//! small-step semantics and a denotation into interaction trees.
//!
//! Surface syntax is s-expressions: `(rec f x body)`, `(if e t u)`,
//! `(app e1 e2)`, `(+ e1 e2)`, `(- e1 e2)`, `(* e1 e2)`, `input`,
//! `(output e)`, naturals as literals.

mod denote;
mod opsem;
pub(crate) mod parse;
mod typecheck;

pub use denote::{denote_ectx, denote_io};
pub use opsem::{
    decompose, op_run, op_step, op_step_with, plug, EvalCtx, IfConvention, OpRunResult,
};
pub use parse::{parse_io_expr, parse_io_type};
pub use typecheck::{check_io_type, typecheck_io};

use std::fmt;
use std::rc::Rc;

use crate::reify::IoState;

/// Binary arithmetic over naturals. Subtraction is truncated (monus).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NatOp {
    Add,
    Sub,
    Mul,
}

impl NatOp {
    pub fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            NatOp::Add => a.saturating_add(b),
            NatOp::Sub => a.saturating_sub(b),
            NatOp::Mul => a.saturating_mul(b),
        }
    }

    pub fn as_fn(self) -> fn(u64, u64) -> u64 {
        match self {
            NatOp::Add => |a, b| a.saturating_add(b),
            NatOp::Sub => |a, b| a.saturating_sub(b),
            NatOp::Mul => |a, b| a.saturating_mul(b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            NatOp::Add => "+",
            NatOp::Sub => "-",
            NatOp::Mul => "*",
        }
    }

    pub fn from_symbol(s: &str) -> Option<NatOp> {
        match s {
            "+" => Some(NatOp::Add),
            "-" => Some(NatOp::Sub),
            "*" => Some(NatOp::Mul),
            _ => None,
        }
    }
}

/// Expressions. Values are `Lit` and `Rec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IoExpr {
    Var(String),
    Lit(u64),
    Rec {
        fname: String,
        xname: String,
        body: Rc<IoExpr>,
    },
    If {
        cond: Rc<IoExpr>,
        then: Rc<IoExpr>,
        els: Rc<IoExpr>,
    },
    App {
        func: Rc<IoExpr>,
        arg: Rc<IoExpr>,
    },
    BinOp {
        op: NatOp,
        lhs: Rc<IoExpr>,
        rhs: Rc<IoExpr>,
    },
    Input,
    Output(Rc<IoExpr>),
}

impl IoExpr {
    pub fn is_value(&self) -> bool {
        matches!(self, IoExpr::Lit(_) | IoExpr::Rec { .. })
    }
}

impl fmt::Display for IoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoExpr::Var(x) => write!(f, "{x}"),
            IoExpr::Lit(n) => write!(f, "{n}"),
            IoExpr::Rec { fname, xname, body } => write!(f, "(rec {fname} {xname} {body})"),
            IoExpr::If { cond, then, els } => write!(f, "(if {cond} {then} {els})"),
            IoExpr::App { func, arg } => write!(f, "(app {func} {arg})"),
            IoExpr::BinOp { op, lhs, rhs } => write!(f, "({} {lhs} {rhs})", op.symbol()),
            IoExpr::Input => write!(f, "input"),
            IoExpr::Output(e) => write!(f, "(output {e})"),
        }
    }
}

/// Types: naturals and functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IoType {
    Nat,
    Arrow(Box<IoType>, Box<IoType>),
}

impl fmt::Display for IoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoType::Nat => write!(f, "nat"),
            IoType::Arrow(a, b) => write!(f, "(-> {a} {b})"),
        }
    }
}

/// A machine configuration: a closed expression plus the tapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoConfig {
    pub expr: IoExpr,
    pub tapes: IoState,
}

/// Capture-avoiding substitution of a closed value for a variable. With
/// closed substituends no renaming is ever required; substitution simply
/// stops under a binder that shadows the variable.
pub fn subst(e: &IoExpr, x: &str, v: &IoExpr) -> IoExpr {
    match e {
        IoExpr::Var(y) => {
            if y == x {
                v.clone()
            } else {
                e.clone()
            }
        }
        IoExpr::Lit(_) | IoExpr::Input => e.clone(),
        IoExpr::Rec { fname, xname, body } => {
            if fname == x || xname == x {
                e.clone()
            } else {
                IoExpr::Rec {
                    fname: fname.clone(),
                    xname: xname.clone(),
                    body: Rc::new(subst(body, x, v)),
                }
            }
        }
        IoExpr::If { cond, then, els } => IoExpr::If {
            cond: Rc::new(subst(cond, x, v)),
            then: Rc::new(subst(then, x, v)),
            els: Rc::new(subst(els, x, v)),
        },
        IoExpr::App { func, arg } => IoExpr::App {
            func: Rc::new(subst(func, x, v)),
            arg: Rc::new(subst(arg, x, v)),
        },
        IoExpr::BinOp { op, lhs, rhs } => IoExpr::BinOp {
            op: *op,
            lhs: Rc::new(subst(lhs, x, v)),
            rhs: Rc::new(subst(rhs, x, v)),
        },
        IoExpr::Output(inner) => IoExpr::Output(Rc::new(subst(inner, x, v))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> IoExpr {
        parse_io_expr(src).unwrap()
    }

    #[test]
    fn subst_replaces_free_occurrences() {
        let e = subst(&p("(+ x 1)"), "x", &IoExpr::Lit(5));
        assert_eq!(e, p("(+ 5 1)"));
    }

    #[test]
    fn subst_descends_under_unrelated_binders() {
        let e = subst(&p("(rec f y x)"), "x", &IoExpr::Lit(3));
        assert_eq!(e, p("(rec f y 3)"));
    }

    #[test]
    fn subst_stops_at_shadowing_binders() {
        let e = p("(rec f x x)");
        assert_eq!(subst(&e, "x", &IoExpr::Lit(3)), e);
        assert_eq!(subst(&e, "f", &IoExpr::Lit(3)), e);
    }
}
