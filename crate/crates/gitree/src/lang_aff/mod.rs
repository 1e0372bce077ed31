//! An affine language with strong-update references: variables are used
//! at most once, checked by context splitting, and the denotation
//! protects every bound value with a store-backed thunk that can be
//! forced at most once.
//!
//! Surface syntax is s-expressions: `(lam x body)`, `(app e1 e2)`,
//! `(pair e1 e2)`, `(letpair x y e body)`, `(alloc e)`, `(dealloc e)`,
//! `(replace e1 e2)`, `#t`/`#f`/`unit`, naturals as literals. The
//! combined language additionally allows
//! `(embed <io-expr> : <io-type> ~ <aff-type>)`.

mod denote;
mod parse;
mod typecheck;

pub(crate) use denote::denote_with_embeds;
pub use denote::{denote_aff, force, thunk_protect};
pub use parse::{parse_aff_expr, parse_aff_type};
pub use typecheck::{
    typecheck_aff, typecheck_aff_deriv, typecheck_aff_deriv_at, AffDeriv, DerivNode, EmbedPolicy,
};

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use crate::lang_io::{IoExpr, IoType};

/// Types: base types, tensor pairs, linear functions and references.
/// References admit strong updates, so `Ref` may wrap any type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffType {
    Bool,
    Nat,
    Unit,
    Tensor(Box<AffType>, Box<AffType>),
    Lolli(Box<AffType>, Box<AffType>),
    Ref(Box<AffType>),
}

impl fmt::Display for AffType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffType::Bool => write!(f, "bool"),
            AffType::Nat => write!(f, "nat"),
            AffType::Unit => write!(f, "unit"),
            AffType::Tensor(a, b) => write!(f, "(tensor {a} {b})"),
            AffType::Lolli(a, b) => write!(f, "(lolli {a} {b})"),
            AffType::Ref(a) => write!(f, "(ref {a})"),
        }
    }
}

/// Expressions. `Embed` carries a closed I/O-language expression with the
/// two sides of its type conversion; it only typechecks when embeds are
/// enabled (the combined language).
#[derive(Clone, Debug, PartialEq)]
pub enum AffExpr {
    Lit(u64),
    BoolLit(bool),
    UnitLit,
    Var(String),
    Lam {
        param: String,
        body: Rc<AffExpr>,
    },
    App {
        func: Rc<AffExpr>,
        arg: Rc<AffExpr>,
    },
    Pair {
        left: Rc<AffExpr>,
        right: Rc<AffExpr>,
    },
    LetPair {
        left: String,
        right: String,
        rhs: Rc<AffExpr>,
        body: Rc<AffExpr>,
    },
    Alloc(Rc<AffExpr>),
    Dealloc(Rc<AffExpr>),
    Replace(Rc<AffExpr>, Rc<AffExpr>),
    Embed {
        io: Rc<IoExpr>,
        io_ty: IoType,
        aff_ty: AffType,
    },
}

impl fmt::Display for AffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffExpr::Lit(n) => write!(f, "{n}"),
            AffExpr::BoolLit(true) => write!(f, "#t"),
            AffExpr::BoolLit(false) => write!(f, "#f"),
            AffExpr::UnitLit => write!(f, "unit"),
            AffExpr::Var(x) => write!(f, "{x}"),
            AffExpr::Lam { param, body } => write!(f, "(lam {param} {body})"),
            AffExpr::App { func, arg } => write!(f, "(app {func} {arg})"),
            AffExpr::Pair { left, right } => write!(f, "(pair {left} {right})"),
            AffExpr::LetPair {
                left,
                right,
                rhs,
                body,
            } => write!(f, "(letpair {left} {right} {rhs} {body})"),
            AffExpr::Alloc(e) => write!(f, "(alloc {e})"),
            AffExpr::Dealloc(e) => write!(f, "(dealloc {e})"),
            AffExpr::Replace(e1, e2) => write!(f, "(replace {e1} {e2})"),
            AffExpr::Embed { io, io_ty, aff_ty } => {
                write!(f, "(embed {io} : {io_ty} ~ {aff_ty})")
            }
        }
    }
}

/// Names consumed by a subterm; disjointness at binary nodes is exactly
/// the affine condition.
pub type UsedSet = BTreeSet<String>;
