//! S-expression frontend for the affine language.

use std::rc::Rc;

use super::{AffExpr, AffType};
use crate::lang_io::parse::{expr_of_sexp as io_expr_of_sexp, type_of_sexp as io_type_of_sexp};
use crate::sexp::{parse, ParseError, Sexp};

pub fn parse_aff_expr(src: &str) -> Result<AffExpr, ParseError> {
    expr_of_sexp(&parse(src)?)
}

fn expr_of_sexp(s: &Sexp) -> Result<AffExpr, ParseError> {
    match s {
        Sexp::Nat(n) => Ok(AffExpr::Lit(*n)),
        Sexp::Sym(name) => match name.as_str() {
            "#t" => Ok(AffExpr::BoolLit(true)),
            "#f" => Ok(AffExpr::BoolLit(false)),
            "unit" => Ok(AffExpr::UnitLit),
            _ => Ok(AffExpr::Var(name.clone())),
        },
        Sexp::List(items) => {
            let head = items
                .first()
                .and_then(Sexp::as_sym)
                .ok_or_else(|| ParseError::new(format!("expected a form, got {s}")))?;
            match head {
                "lam" => match items.as_slice() {
                    [_, Sexp::Sym(x), body] => Ok(AffExpr::Lam {
                        param: x.clone(),
                        body: Rc::new(expr_of_sexp(body)?),
                    }),
                    _ => Err(ParseError::new("lam expects (lam x body)")),
                },
                "app" => match items.as_slice() {
                    [_, f, a] => Ok(AffExpr::App {
                        func: Rc::new(expr_of_sexp(f)?),
                        arg: Rc::new(expr_of_sexp(a)?),
                    }),
                    _ => Err(ParseError::new("app expects (app f a)")),
                },
                "pair" => match items.as_slice() {
                    [_, l, r] => Ok(AffExpr::Pair {
                        left: Rc::new(expr_of_sexp(l)?),
                        right: Rc::new(expr_of_sexp(r)?),
                    }),
                    _ => Err(ParseError::new("pair expects (pair e1 e2)")),
                },
                "letpair" => match items.as_slice() {
                    [_, Sexp::Sym(x), Sexp::Sym(y), rhs, body] => Ok(AffExpr::LetPair {
                        left: x.clone(),
                        right: y.clone(),
                        rhs: Rc::new(expr_of_sexp(rhs)?),
                        body: Rc::new(expr_of_sexp(body)?),
                    }),
                    _ => Err(ParseError::new("letpair expects (letpair x y e body)")),
                },
                "alloc" => match items.as_slice() {
                    [_, e] => Ok(AffExpr::Alloc(Rc::new(expr_of_sexp(e)?))),
                    _ => Err(ParseError::new("alloc expects (alloc e)")),
                },
                "dealloc" => match items.as_slice() {
                    [_, e] => Ok(AffExpr::Dealloc(Rc::new(expr_of_sexp(e)?))),
                    _ => Err(ParseError::new("dealloc expects (dealloc e)")),
                },
                "replace" => match items.as_slice() {
                    [_, e1, e2] => Ok(AffExpr::Replace(
                        Rc::new(expr_of_sexp(e1)?),
                        Rc::new(expr_of_sexp(e2)?),
                    )),
                    _ => Err(ParseError::new("replace expects (replace e1 e2)")),
                },
                "embed" => match items.as_slice() {
                    [_, io, Sexp::Sym(colon), io_ty, Sexp::Sym(tilde), aff_ty]
                        if colon == ":" && tilde == "~" =>
                    {
                        Ok(AffExpr::Embed {
                            io: Rc::new(io_expr_of_sexp(io)?),
                            io_ty: io_type_of_sexp(io_ty)?,
                            aff_ty: type_of_sexp(aff_ty)?,
                        })
                    }
                    _ => Err(ParseError::new(
                        "embed expects (embed e : io-type ~ aff-type)",
                    )),
                },
                other => Err(ParseError::new(format!("unknown form {other}"))),
            }
        }
    }
}

pub fn parse_aff_type(src: &str) -> Result<AffType, ParseError> {
    type_of_sexp(&parse(src)?)
}

fn type_of_sexp(s: &Sexp) -> Result<AffType, ParseError> {
    match s {
        Sexp::Sym(name) => match name.as_str() {
            "bool" => Ok(AffType::Bool),
            "nat" => Ok(AffType::Nat),
            "unit" => Ok(AffType::Unit),
            _ => Err(ParseError::new(format!("unknown type {name}"))),
        },
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Sym(h), a, b] if h == "tensor" => Ok(AffType::Tensor(
                Box::new(type_of_sexp(a)?),
                Box::new(type_of_sexp(b)?),
            )),
            [Sexp::Sym(h), a, b] if h == "lolli" => Ok(AffType::Lolli(
                Box::new(type_of_sexp(a)?),
                Box::new(type_of_sexp(b)?),
            )),
            [Sexp::Sym(h), a] if h == "ref" => Ok(AffType::Ref(Box::new(type_of_sexp(a)?))),
            _ => Err(ParseError::new(format!("unknown type {s}"))),
        },
        _ => Err(ParseError::new(format!("unknown type {s}"))),
    }
}
