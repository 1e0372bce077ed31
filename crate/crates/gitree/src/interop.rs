//! Cross-language embedding: the type-conversion relation, the
//! `to_aff`/`from_aff` glue code inserted at language boundaries, and
//! typing plus denotation for the combined language (I/O-language terms
//! embedded into affine programs).
//!
//! Base conversions keep the underlying natural-number representation in
//! range. Function conversions recursively convert arguments and
//! results, protect converted arguments with a thunk, and — when an
//! affine function crosses to the non-affine side — protect the function
//! itself so it cannot be invoked twice; a second invocation ends in
//! `Err(Lin)` rather than memory unsafety.

use std::fmt;
use std::rc::Rc;

use crate::env::Env;
use crate::lang_aff::{
    denote_with_embeds, force, thunk_protect, AffDeriv, AffExpr, AffType, EmbedPolicy, UsedSet,
};
use crate::lang_io::IoType;
use crate::signature::{IoOps, StoreOps};
use crate::tree::{get_val, ifz, seq, FunSusp, ITree};

/// A derivation of the conversion relation between an I/O-language type
/// and an affine type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conversion {
    pub io_side: IoType,
    pub aff_side: AffType,
    pub shape: ConvShape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvShape {
    /// `nat ~ nat`: identity both ways.
    NatNat,
    /// `nat ~ unit`: clamp to 0 going in, identity coming out.
    NatUnit,
    /// `nat ~ bool`: clamp to {0,1} going in, identity coming out.
    NatBool,
    /// `(nat -> t1') -> t2'  ~  t1 -o t2`: the argument is passed as a
    /// protected thunk and converted recursively.
    Fun {
        arg: Rc<Conversion>,
        res: Rc<Conversion>,
    },
}

impl fmt::Display for Conversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.io_side, self.aff_side)
    }
}

/// Derives the conversion relation syntax-directedly; the derivation is
/// unique when it exists.
pub fn conv_check(io_ty: &IoType, aff_ty: &AffType) -> Option<Conversion> {
    let shape = match (io_ty, aff_ty) {
        (IoType::Nat, AffType::Nat) => ConvShape::NatNat,
        (IoType::Nat, AffType::Unit) => ConvShape::NatUnit,
        (IoType::Nat, AffType::Bool) => ConvShape::NatBool,
        (IoType::Arrow(io_arg, io_res), AffType::Lolli(aff_arg, aff_res)) => {
            // the affine argument is represented as a thunk on the I/O side
            let IoType::Arrow(thunk_dom, io_arg_inner) = io_arg.as_ref() else {
                return None;
            };
            if **thunk_dom != IoType::Nat {
                return None;
            }
            ConvShape::Fun {
                arg: Rc::new(conv_check(io_arg_inner, aff_arg)?),
                res: Rc::new(conv_check(io_res, aff_res)?),
            }
        }
        _ => return None,
    };
    Some(Conversion {
        io_side: io_ty.clone(),
        aff_side: aff_ty.clone(),
        shape,
    })
}

/// Converts an I/O-side tree to its affine representation.
pub fn to_aff(c: &Conversion, t: ITree, store: StoreOps) -> ITree {
    match &c.shape {
        ConvShape::NatNat => t,
        ConvShape::NatUnit => seq(t, ITree::Nat(0)),
        ConvShape::NatBool => ifz(t, ITree::Nat(1), ITree::Nat(0)),
        ConvShape::Fun { arg, res } => {
            let (arg, res) = (arg.clone(), res.clone());
            get_val(t, move |p| {
                let (arg, res, p) = (arg.clone(), res.clone(), p.clone());
                ITree::Fun(FunSusp::ready(move |x| {
                    let (res, p) = (res.clone(), p.clone());
                    get_val(from_aff(&arg, force(x), store), move |y| {
                        to_aff(
                            &res,
                            crate::tree::app_strict(p.clone(), thunk_protect(store, y)),
                            store,
                        )
                    })
                }))
            })
        }
    }
}

/// Converts an affine-side tree back to its I/O representation. Affine
/// functions are themselves protected with a thunk on the way out.
pub fn from_aff(c: &Conversion, t: ITree, store: StoreOps) -> ITree {
    match &c.shape {
        ConvShape::NatNat | ConvShape::NatUnit | ConvShape::NatBool => t,
        ConvShape::Fun { arg, res } => {
            let (arg, res) = (arg.clone(), res.clone());
            get_val(t, move |p| {
                let (arg, res) = (arg.clone(), res.clone());
                get_val(thunk_protect(store, p), move |protected| {
                    let (arg, res, protected) = (arg.clone(), res.clone(), protected.clone());
                    ITree::Fun(FunSusp::ready(move |x| {
                        let (arg, res, x) = (arg.clone(), res.clone(), x.clone());
                        get_val(force(protected.clone()), move |f| {
                            let (res, f) = (res.clone(), f.clone());
                            get_val(to_aff(&arg, force(x.clone()), store), move |y| {
                                from_aff(
                                    &res,
                                    crate::tree::app_strict(f.clone(), thunk_protect(store, y)),
                                    store,
                                )
                            })
                        })
                    }))
                })
            })
        }
    }
}

/// Typing for the combined language: the affine rules plus embedding of
/// closed, convertible I/O terms (which consume no affine variables).
pub fn typecheck_comb(ctx: &[(String, AffType)], e: &AffExpr) -> Option<(AffType, UsedSet)> {
    let d = typecheck_comb_deriv(ctx, e)?;
    Some((d.ty, d.used))
}

pub fn typecheck_comb_deriv(ctx: &[(String, AffType)], e: &AffExpr) -> Option<AffDeriv> {
    crate::lang_aff::typecheck_aff_deriv(ctx, e, EmbedPolicy::Allow)
}

/// Denotation for the combined language; the ambient signature must
/// embed both the store and the I/O families.
pub fn denote_comb(d: &AffDeriv, env: &Env, store: StoreOps, io: IoOps) -> ITree {
    denote_with_embeds(d, env, store, Some(io))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::io_store_rig;
    use crate::engine::{run, Outcome};
    use crate::lang_aff::parse_aff_expr;
    use crate::lang_io::parse_io_type;
    use crate::reify::{GlobalReifier, GlobalState};
    use crate::tree::{app_strict, ErrorKind};

    fn rig(input: Vec<u64>) -> (GlobalReifier, GlobalState, StoreOps, IoOps) {
        let (gr, st) = io_store_rig(input);
        let sigs = gr.signatures();
        (
            gr,
            st,
            StoreOps::embedded_in(&sigs).unwrap(),
            IoOps::embedded_in(&sigs).unwrap(),
        )
    }

    fn conv(io: &str, aff: &str) -> Option<Conversion> {
        conv_check(
            &parse_io_type(io).unwrap(),
            &crate::lang_aff::parse_aff_type(aff).unwrap(),
        )
    }

    #[test]
    fn base_conversions_exist() {
        assert!(conv("nat", "nat").is_some());
        assert!(conv("nat", "unit").is_some());
        assert!(conv("nat", "bool").is_some());
    }

    #[test]
    fn function_conversion_requires_a_thunked_argument() {
        let c = conv("(-> (-> nat nat) nat)", "(lolli nat nat)").unwrap();
        assert!(matches!(c.shape, ConvShape::Fun { .. }));
        // a bare nat -> nat has no conversion: the argument must be thunked
        assert!(conv("(-> nat nat)", "(lolli nat nat)").is_none());
    }

    #[test]
    fn tensor_has_no_counterpart() {
        assert!(conv("nat", "(tensor nat nat)").is_none());
    }

    #[test]
    fn conversion_derivations_are_deterministic() {
        let a = conv("(-> (-> nat nat) nat)", "(lolli bool nat)").unwrap();
        let b = conv("(-> (-> nat nat) nat)", "(lolli bool nat)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bool_glue_clamps() {
        let (gr, st, store, _) = rig(vec![]);
        let c = conv("nat", "bool").unwrap();
        let (o, _) = run(&gr, to_aff(&c, ITree::Nat(7), store), st.clone(), 100, &[]);
        assert_eq!(o.value_nat(), Some(1));
        let (o, _) = run(&gr, to_aff(&c, ITree::Nat(0), store), st, 100, &[]);
        assert_eq!(o.value_nat(), Some(0));
    }

    #[test]
    fn glue_round_trips_on_base_shapes() {
        let (gr, st, store, _) = rig(vec![]);
        let clamp = |shape: &str, k: u64| match shape {
            "nat" => k,
            "bool" => u64::from(k > 0),
            "unit" => 0,
            _ => unreachable!(),
        };
        for shape in ["nat", "bool", "unit"] {
            let c = conv("nat", shape).unwrap();
            for k in [0u64, 1, 2, 7] {
                let round = from_aff(&c, to_aff(&c, ITree::Nat(k), store), store);
                let (o, _) = run(&gr, round, st.clone(), 100, &[]);
                assert_eq!(o.value_nat(), Some(clamp(shape, k)), "{shape} {k}");
            }
        }
    }

    #[test]
    fn embedded_constant_in_affine_context() {
        let (gr, st, store, io) = rig(vec![]);
        let e = parse_aff_expr("(letpair a b (pair (embed 5 : nat ~ nat) 2) a)").unwrap();
        let d = typecheck_comb_deriv(&[], &e).unwrap();
        let (o, _) = run(
            &gr,
            denote_comb(&d, &Env::empty(), store, io),
            st,
            10_000,
            &[],
        );
        assert_eq!(o.value_nat(), Some(5));
    }

    #[test]
    fn embedded_reader_drains_the_tape() {
        let (gr, st, store, io) = rig(vec![3]);
        // an embedded function that reads input and returns it
        let e = parse_aff_expr(
            "(app (embed (rec f t input) : (-> (-> nat nat) nat) ~ (lolli nat nat)) 0)",
        )
        .unwrap();
        let d = typecheck_comb_deriv(&[], &e).unwrap();
        let (o, _) = run(
            &gr,
            denote_comb(&d, &Env::empty(), store, io),
            st,
            10_000,
            &[],
        );
        assert_eq!(o.value_nat(), Some(3));
        assert!(o.state().io(1).unwrap().input.is_empty());
    }

    #[test]
    fn open_embedded_terms_are_rejected() {
        let e = parse_aff_expr("(embed (+ x 1) : nat ~ nat)").unwrap();
        assert!(typecheck_comb_deriv(&[], &e).is_none());
    }

    #[test]
    fn embed_type_mismatch_is_rejected() {
        let e = parse_aff_expr("(embed (rec f x x) : nat ~ nat)").unwrap();
        assert!(typecheck_comb_deriv(&[], &e).is_none());
    }

    #[test]
    fn embeds_consume_no_affine_variables() {
        let ctx = vec![("a".to_string(), AffType::Nat)];
        let e = parse_aff_expr("(embed 3 : nat ~ nat)").unwrap();
        let (_, used) = typecheck_comb(&ctx, &e).unwrap();
        assert!(used.is_empty());
    }

    #[test]
    fn double_call_of_a_converted_affine_function_is_lin_not_runtime() {
        // the affine function deallocates a captured reference; calling
        // it twice from the I/O side must trip the protection thunk, not
        // memory safety
        let (gr, st, store, _) = rig(vec![]);
        let aff =
            parse_aff_expr("(app (lam l (lam u (app (lam w 7) (dealloc l)))) (alloc 42))").unwrap();
        let expected = crate::lang_aff::parse_aff_type("(lolli unit nat)").unwrap();
        let d = crate::lang_aff::typecheck_aff_deriv_at(&[], &aff, &expected, EmbedPolicy::Reject)
            .unwrap();
        assert_eq!(d.ty.to_string(), "(lolli unit nat)");
        let c = conv("(-> (-> nat nat) nat)", "(lolli unit nat)").unwrap();
        let glued = from_aff(&c, denote_aff_local(&d, store), store);
        // call the converted function twice with fresh dummy thunks
        let dummy = || ITree::Fun(FunSusp::ready(|_| ITree::Nat(0)));
        let prog = get_val(glued, move |g| {
            seq(
                app_strict(g.clone(), dummy()),
                app_strict(g.clone(), dummy()),
            )
        });
        let (o, _) = run(&gr, prog, st, 100_000, &[ErrorKind::Lin]);
        match o {
            Outcome::Errored {
                kind: ErrorKind::Lin,
                acceptable: true,
                ..
            } => {}
            other => panic!("expected Err(Lin), got {other:?}"),
        }
    }

    fn denote_aff_local(d: &AffDeriv, store: StoreOps) -> ITree {
        crate::lang_aff::denote_aff(d, &Env::empty(), store)
    }

    #[test]
    fn single_call_of_converted_function_succeeds() {
        let (gr, st, store, io) = rig(vec![]);
        let e = parse_aff_expr(
            "(app (embed (rec f t (+ (app t 0) 1)) : (-> (-> nat nat) nat) ~ (lolli nat nat)) 5)",
        )
        .unwrap();
        let d = typecheck_comb_deriv(&[], &e).unwrap();
        let (o, _) = run(
            &gr,
            denote_comb(&d, &Env::empty(), store, io),
            st,
            10_000,
            &[],
        );
        assert_eq!(o.value_nat(), Some(6));
    }
}
