//! S-expression frontend for the I/O language.

use std::rc::Rc;

use super::{IoExpr, IoType, NatOp};
use crate::sexp::{parse, ParseError, Sexp};

pub fn parse_io_expr(src: &str) -> Result<IoExpr, ParseError> {
    expr_of_sexp(&parse(src)?)
}

pub fn expr_of_sexp(s: &Sexp) -> Result<IoExpr, ParseError> {
    match s {
        Sexp::Nat(n) => Ok(IoExpr::Lit(*n)),
        Sexp::Sym(name) if name == "input" => Ok(IoExpr::Input),
        Sexp::Sym(name) => {
            if name.starts_with('#') {
                return Err(ParseError::new(format!("unknown literal {name}")));
            }
            Ok(IoExpr::Var(name.clone()))
        }
        Sexp::List(items) => {
            let head = items
                .first()
                .and_then(Sexp::as_sym)
                .ok_or_else(|| ParseError::new(format!("expected a form, got {s}")))?;
            match head {
                "rec" => match items.as_slice() {
                    [_, Sexp::Sym(f), Sexp::Sym(x), body] => Ok(IoExpr::Rec {
                        fname: f.clone(),
                        xname: x.clone(),
                        body: Rc::new(expr_of_sexp(body)?),
                    }),
                    _ => Err(ParseError::new("rec expects (rec f x body)")),
                },
                "if" => match items.as_slice() {
                    [_, c, t, e] => Ok(IoExpr::If {
                        cond: Rc::new(expr_of_sexp(c)?),
                        then: Rc::new(expr_of_sexp(t)?),
                        els: Rc::new(expr_of_sexp(e)?),
                    }),
                    _ => Err(ParseError::new("if expects (if cond then else)")),
                },
                "app" => match items.as_slice() {
                    [_, f, a] => Ok(IoExpr::App {
                        func: Rc::new(expr_of_sexp(f)?),
                        arg: Rc::new(expr_of_sexp(a)?),
                    }),
                    _ => Err(ParseError::new("app expects (app f a)")),
                },
                "output" => match items.as_slice() {
                    [_, e] => Ok(IoExpr::Output(Rc::new(expr_of_sexp(e)?))),
                    _ => Err(ParseError::new("output expects (output e)")),
                },
                op if NatOp::from_symbol(op).is_some() => match items.as_slice() {
                    [_, l, r] => Ok(IoExpr::BinOp {
                        op: NatOp::from_symbol(op).unwrap(),
                        lhs: Rc::new(expr_of_sexp(l)?),
                        rhs: Rc::new(expr_of_sexp(r)?),
                    }),
                    _ => Err(ParseError::new(format!("{op} expects two operands"))),
                },
                other => Err(ParseError::new(format!("unknown form {other}"))),
            }
        }
    }
}

pub fn parse_io_type(src: &str) -> Result<IoType, ParseError> {
    type_of_sexp(&parse(src)?)
}

pub fn type_of_sexp(s: &Sexp) -> Result<IoType, ParseError> {
    match s {
        Sexp::Sym(name) if name == "nat" => Ok(IoType::Nat),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Sym(arrow), a, b] if arrow == "->" => Ok(IoType::Arrow(
                Box::new(type_of_sexp(a)?),
                Box::new(type_of_sexp(b)?),
            )),
            _ => Err(ParseError::new(format!("unknown type {s}"))),
        },
        _ => Err(ParseError::new(format!("unknown type {s}"))),
    }
}
