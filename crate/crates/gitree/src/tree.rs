//! The interaction-tree datatype and its combinator algebra.
//!
//! A tree is either a value (`Nat` or `Fun`), an error, a delayed step
//! (`Tau` over a suspension), or an effect node (`Vis`) carrying an
//! operation id, an input payload, and a continuation from output
//! payloads to suspended trees. Recursive positions always sit behind a
//! [`TreeSusp`], so construction of any single layer is finite; unbounded
//! behaviour is only reachable by repeated forcing, which the reduction
//! engine bounds with fuel.

use std::fmt;
use std::rc::Rc;

use crate::signature::{OpId, Payload};

/// Error states a computation can end in. `RunTime` is the generic
/// dynamic-typing failure; `Lin` signals a broken at-most-once protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorKind {
    RunTime,
    Lin,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::RunTime => write!(f, "RunTime"),
            ErrorKind::Lin => write!(f, "Lin"),
        }
    }
}

/// A deferred tree. Forcing is pure: the closure may be run any number of
/// times and must produce structurally interchangeable results. There is
/// deliberately no memoization; at-most-once semantics is a separate,
/// store-backed mechanism (see `lang_aff::thunk_protect`).
#[derive(Clone)]
pub struct TreeSusp(Rc<dyn Fn() -> ITree>);

impl TreeSusp {
    pub fn new(produce: impl Fn() -> ITree + 'static) -> Self {
        TreeSusp(Rc::new(produce))
    }

    /// Suspension of an already-built tree (the `Next` constructor).
    pub fn ready(tree: ITree) -> Self {
        TreeSusp(Rc::new(move || tree.clone()))
    }

    pub fn force(&self) -> ITree {
        (self.0)()
    }

    /// Identity of the underlying closure; used for exact state
    /// comparisons where forcing would be too coarse.
    pub fn same_susp(&self, other: &TreeSusp) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }
}

impl fmt::Debug for TreeSusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<susp>")
    }
}

/// An endofunction on trees, as stored under a `Fun` head.
pub type EndoFn = Rc<dyn Fn(ITree) -> ITree>;

/// A deferred endofunction, the payload of a `Fun` head.
#[derive(Clone)]
pub struct FunSusp(Rc<dyn Fn() -> EndoFn>);

impl FunSusp {
    pub fn new(produce: impl Fn() -> EndoFn + 'static) -> Self {
        FunSusp(Rc::new(produce))
    }

    /// Suspension of an already-built function (`Next` on functions).
    pub fn ready(f: impl Fn(ITree) -> ITree + 'static) -> Self {
        let f: EndoFn = Rc::new(f);
        FunSusp(Rc::new(move || f.clone()))
    }

    pub fn force(&self) -> EndoFn {
        (self.0)()
    }
}

impl fmt::Debug for FunSusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<fun-susp>")
    }
}

type ContFn = Rc<dyn Fn(&Payload) -> Option<TreeSusp>>;

/// Continuation of an effect node. Partial: handing it a payload of the
/// wrong shape yields `None`, which the engine classifies as stuck.
#[derive(Clone)]
pub struct Continuation(ContFn);

impl Continuation {
    pub fn new(k: impl Fn(&Payload) -> Option<TreeSusp> + 'static) -> Self {
        Continuation(Rc::new(k))
    }

    pub fn call(&self, out: &Payload) -> Option<TreeSusp> {
        (self.0)(out)
    }
}

impl fmt::Debug for Continuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<cont>")
    }
}

/// An effect occurrence: operation id, input payload, continuation.
#[derive(Clone, Debug)]
pub struct VisNode {
    pub op: OpId,
    pub input: Payload,
    pub k: Continuation,
}

/// A guarded interaction tree.
#[derive(Clone)]
pub enum ITree {
    Nat(u64),
    Fun(FunSusp),
    Err(ErrorKind),
    Tau(TreeSusp),
    Vis(VisNode),
}

impl ITree {
    /// Values are exactly the `Nat` and `Fun` heads.
    pub fn is_value(&self) -> bool {
        matches!(self, ITree::Nat(_) | ITree::Fun(_))
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            ITree::Nat(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Debug for ITree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ITree::Nat(n) => write!(f, "Nat({n})"),
            ITree::Fun(_) => write!(f, "Fun(..)"),
            ITree::Err(e) => write!(f, "Err({e})"),
            ITree::Tau(_) => write!(f, "Tau(..)"),
            ITree::Vis(v) => write!(f, "Vis({}, {:?}, ..)", v.op, v.input),
        }
    }
}

/// One silent step: exactly one `Tau` layer over `t`.
pub fn tick(t: ITree) -> ITree {
    ITree::Tau(TreeSusp::ready(t))
}

/// `n` silent steps.
pub fn tick_n(t: ITree, n: usize) -> ITree {
    (0..n).fold(t, |acc, _| tick(acc))
}

/// A tree transformer that commutes with `Err`, `Tau` and `Vis` heads.
/// Such maps are the semantic analogue of evaluation contexts: they are
/// fully determined by their action on values.
#[derive(Clone)]
pub struct Hom(Rc<dyn Fn(ITree) -> ITree>);

impl Hom {
    /// Builds the homomorphism determined by its action on values
    /// (`Nat` and `Fun` heads). The error, tick and effect clauses are
    /// supplied by construction.
    pub fn of_value_case(value_case: impl Fn(ITree) -> ITree + 'static) -> Hom {
        let vc: Rc<dyn Fn(ITree) -> ITree> = Rc::new(value_case);
        Hom(Rc::new(move |t| hom_step(&vc, t)))
    }

    /// Wraps an arbitrary function asserted by the caller to satisfy the
    /// homomorphism laws (used for combinator-built maps such as
    /// `app_strict(alpha, -)`; the law suite in the tests backs this up).
    pub fn from_fn(f: impl Fn(ITree) -> ITree + 'static) -> Hom {
        Hom(Rc::new(f))
    }

    pub fn identity() -> Hom {
        Hom(Rc::new(|t| t))
    }

    /// `outer . inner`; composition of homomorphisms is a homomorphism.
    pub fn compose(outer: &Hom, inner: &Hom) -> Hom {
        let (o, i) = (outer.clone(), inner.clone());
        Hom(Rc::new(move |t| o.apply(i.apply(t))))
    }

    pub fn apply(&self, t: ITree) -> ITree {
        (self.0)(t)
    }
}

impl fmt::Debug for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<hom>")
    }
}

/// See [`Hom::of_value_case`].
pub fn make_hom(value_case: impl Fn(ITree) -> ITree + 'static) -> Hom {
    Hom::of_value_case(value_case)
}

fn hom_step(vc: &Rc<dyn Fn(ITree) -> ITree>, t: ITree) -> ITree {
    match t {
        ITree::Nat(_) | ITree::Fun(_) => vc(t),
        ITree::Err(e) => ITree::Err(e),
        ITree::Tau(s) => {
            let vc = vc.clone();
            ITree::Tau(TreeSusp::new(move || hom_step(&vc, s.force())))
        }
        ITree::Vis(node) => {
            let vc = vc.clone();
            let k = node.k;
            ITree::Vis(VisNode {
                op: node.op,
                input: node.input,
                k: Continuation::new(move |y| {
                    let s = k.call(y)?;
                    let vc = vc.clone();
                    Some(TreeSusp::new(move || hom_step(&vc, s.force())))
                }),
            })
        }
    }
}

/// Destructs a function head: `Fun(g)` yields `f(g)`, `Nat(_)` is a
/// run-time error; homomorphism in the first argument.
pub fn get_fun(t: ITree, f: impl Fn(FunSusp) -> ITree + 'static) -> ITree {
    make_hom(move |v| match v {
        ITree::Fun(g) => f(g),
        _ => ITree::Err(ErrorKind::RunTime),
    })
    .apply(t)
}

/// Dual of [`get_fun`]: extracts a number, erring on a function head.
pub fn get_nat(t: ITree, f: impl Fn(u64) -> ITree + 'static) -> ITree {
    make_hom(move |v| match v {
        ITree::Nat(n) => f(n),
        _ => ITree::Err(ErrorKind::RunTime),
    })
    .apply(t)
}

/// `LET x = t IN f(x)`: reduces `t` under ticks and effects to its first
/// value head and applies `f` to it.
pub fn get_val(t: ITree, f: impl Fn(ITree) -> ITree + 'static) -> ITree {
    make_hom(f).apply(t)
}

/// Call-by-name application: invokes the underlying function even when
/// the argument is a tick or an effect. Beta costs one tick.
pub fn app_cbn(func: ITree, arg: ITree) -> ITree {
    get_fun(func, move |g| {
        let arg = arg.clone();
        ITree::Tau(TreeSusp::new(move || (g.force())(arg.clone())))
    })
}

/// Strict application with right-to-left effect order: the argument
/// reduces to a value first, then the function position, then one tick
/// and the call.
pub fn app_strict(func: ITree, arg: ITree) -> ITree {
    get_val(arg, move |arg_v| app_cbn(func.clone(), arg_v))
}

/// Branch on a number: nonzero selects `then_nz`, zero selects `else_z`,
/// a function head is a run-time error. Homomorphism in the scrutinee.
pub fn ifz(scrutinee: ITree, then_nz: ITree, else_z: ITree) -> ITree {
    make_hom(move |v| match v {
        ITree::Nat(0) => else_z.clone(),
        ITree::Nat(_) => then_nz.clone(),
        _ => ITree::Err(ErrorKind::RunTime),
    })
    .apply(scrutinee)
}

/// Binary arithmetic, right-to-left: the right operand reduces to a
/// value first, then the left. A function head on either side is a
/// run-time error once both sides are values.
pub fn natop(op: fn(u64, u64) -> u64, lhs: ITree, rhs: ITree) -> ITree {
    get_val(rhs, move |rhs_v| {
        let lhs = lhs.clone();
        get_val(lhs, move |lhs_v| match (&lhs_v, &rhs_v) {
            (ITree::Nat(a), ITree::Nat(b)) => ITree::Nat(op(*a, *b)),
            _ => ITree::Err(ErrorKind::RunTime),
        })
    })
}

/// Sequencing: all effects and ticks of `first` happen, its value is
/// dropped, and the computation continues as `then`.
pub fn seq(first: ITree, then: ITree) -> ITree {
    get_val(first, move |_| then.clone())
}

/// Guarded fixpoint: returns `f` applied to a suspension of the whole
/// fixpoint. The caller must use the suspension only under a constructor
/// (guardedness is not checked here); an unguarded `f` either diverges at
/// construction or shows up as fuel exhaustion at reduction time.
pub fn gfix(f: impl Fn(TreeSusp) -> ITree + Clone + 'static) -> ITree {
    let again = f.clone();
    f(TreeSusp::new(move || gfix(again.clone())))
}

/// While loop: equal to its one-step unfolding
/// `ifz(cond, seq(body, Tick(while)), Nat(0))`.
pub fn while_loop(cond: ITree, body: ITree) -> ITree {
    let (c, b) = (cond.clone(), body.clone());
    gfix(move |unfold| ifz(c.clone(), seq(b.clone(), ITree::Tau(unfold)), ITree::Nat(0)))
}

/// Church pair; evaluates `second` then `first`. A pair of values is
/// itself a value.
pub fn pair(first: ITree, second: ITree) -> ITree {
    get_val(second, move |y| {
        let first = first.clone();
        get_val(first, move |x| {
            let (x, y) = (x.clone(), y.clone());
            ITree::Fun(FunSusp::ready(move |f| {
                app_strict(app_strict(f, x.clone()), y.clone())
            }))
        })
    })
}

/// First projection of a Church pair; on a value pair it reaches the
/// component in exactly three steps.
pub fn proj1(p: ITree) -> ITree {
    app_strict(
        p,
        ITree::Fun(FunSusp::ready(|a| {
            ITree::Fun(FunSusp::ready(move |_b| a.clone()))
        })),
    )
}

/// Second projection of a Church pair.
pub fn proj2(p: ITree) -> ITree {
    app_strict(
        p,
        ITree::Fun(FunSusp::ready(|_a| ITree::Fun(FunSusp::ready(|b| b)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::layer_eq;

    fn nat(n: u64) -> ITree {
        ITree::Nat(n)
    }

    fn id_fun() -> ITree {
        ITree::Fun(FunSusp::ready(|t| t))
    }

    #[test]
    fn tick_adds_one_tau_layer() {
        let t = tick(nat(1));
        match &t {
            ITree::Tau(s) => assert!(layer_eq(&s.force(), &nat(1), 3)),
            other => panic!("expected Tau, got {other:?}"),
        }
        assert!(layer_eq(&t, &tick(nat(1)), 3));
        assert!(layer_eq(&tick(tick(nat(0))), &tick_n(nat(0), 2), 3));
    }

    #[test]
    fn make_hom_identity_preserves_ticked_value() {
        let h = make_hom(|v| v);
        assert!(layer_eq(&h.apply(tick(nat(2))), &tick(nat(2)), 3));
    }

    #[test]
    fn make_hom_error_clause_keeps_original_error() {
        let h = make_hom(|_| ITree::Err(ErrorKind::RunTime));
        match h.apply(ITree::Err(ErrorKind::Lin)) {
            ITree::Err(ErrorKind::Lin) => {}
            other => panic!("expected Err(Lin), got {other:?}"),
        }
    }

    #[test]
    fn get_fun_clauses() {
        let err = get_fun(nat(3), ITree::Fun);
        assert!(matches!(err, ITree::Err(ErrorKind::RunTime)));

        let hit = get_fun(id_fun(), |_| nat(9));
        assert!(layer_eq(&hit, &nat(9), 3));

        // hom clause then base clause
        let ticked = get_fun(tick(id_fun()), |_| nat(9));
        assert!(layer_eq(&ticked, &tick(nat(9)), 3));
    }

    #[test]
    fn get_nat_clauses() {
        assert!(layer_eq(&get_nat(nat(5), |n| nat(n + 1)), &nat(6), 3));
        assert!(matches!(
            get_nat(id_fun(), nat),
            ITree::Err(ErrorKind::RunTime)
        ));
        assert!(layer_eq(&get_nat(tick(nat(2)), nat), &tick(nat(2)), 3));
    }

    #[test]
    fn get_val_clauses() {
        let f = |v: ITree| match v {
            ITree::Nat(n) => nat(n * 2),
            other => other,
        };
        assert!(layer_eq(&get_val(nat(7), f), &nat(14), 3));
        assert!(matches!(
            get_val(ITree::Err(ErrorKind::Lin), f),
            ITree::Err(ErrorKind::Lin)
        ));
        assert!(layer_eq(
            &get_val(tick(id_fun()), |v| v),
            &tick(id_fun()),
            3
        ));
    }

    #[test]
    fn app_cbn_passes_unevaluated_argument() {
        // call-by-name invokes the function even on an error argument
        let res = app_cbn(id_fun(), ITree::Err(ErrorKind::Lin));
        assert!(layer_eq(&res, &tick(ITree::Err(ErrorKind::Lin)), 3));
    }

    #[test]
    fn app_cbn_on_number_is_runtime_error() {
        assert!(matches!(
            app_cbn(nat(0), nat(0)),
            ITree::Err(ErrorKind::RunTime)
        ));
    }

    #[test]
    fn app_strict_beta_is_one_tick() {
        let res = app_strict(id_fun(), nat(3));
        assert!(layer_eq(&res, &tick(nat(3)), 3));
    }

    #[test]
    fn app_strict_on_two_numbers_errs() {
        assert!(matches!(
            app_strict(nat(1), nat(2)),
            ITree::Err(ErrorKind::RunTime)
        ));
    }

    #[test]
    fn app_strict_commutes_with_argument_tick() {
        let lhs = app_strict(id_fun(), tick(nat(2)));
        let rhs = tick(app_strict(id_fun(), nat(2)));
        assert!(layer_eq(&lhs, &rhs, 4));
    }

    #[test]
    fn ifz_branches() {
        assert!(layer_eq(&ifz(nat(0), nat(10), nat(20)), &nat(20), 3));
        assert!(layer_eq(&ifz(nat(3), nat(10), nat(20)), &nat(10), 3));
        assert!(matches!(
            ifz(id_fun(), nat(1), nat(2)),
            ITree::Err(ErrorKind::RunTime)
        ));
    }

    #[test]
    fn natop_base_and_errors() {
        let add = |a: u64, b: u64| a.saturating_add(b);
        let monus = |a: u64, b: u64| a.saturating_sub(b);
        assert!(layer_eq(&natop(add, nat(2), nat(3)), &nat(5), 3));
        assert!(layer_eq(&natop(monus, nat(2), nat(5)), &nat(0), 3));
        assert!(matches!(
            natop(add, id_fun(), nat(1)),
            ITree::Err(ErrorKind::RunTime)
        ));
    }

    #[test]
    fn seq_clauses() {
        assert!(layer_eq(&seq(nat(9), nat(1)), &nat(1), 3));
        assert!(matches!(
            seq(ITree::Err(ErrorKind::RunTime), nat(1)),
            ITree::Err(ErrorKind::RunTime)
        ));
        assert!(layer_eq(&seq(tick(nat(0)), nat(1)), &tick(nat(1)), 3));
    }

    #[test]
    fn while_loop_unfolds_to_ifz() {
        let w = while_loop(nat(0), nat(1));
        let unfolding = ifz(
            nat(0),
            seq(nat(1), tick(while_loop(nat(0), nat(1)))),
            nat(0),
        );
        assert!(layer_eq(&w, &unfolding, 2));
    }

    #[test]
    fn gfix_constant_function() {
        assert!(layer_eq(&gfix(|_| nat(4)), &nat(4), 3));
    }

    #[test]
    fn gfix_tick_spine_unfolds_lazily() {
        let t = gfix(ITree::Tau);
        match &t {
            ITree::Tau(s) => match s.force() {
                ITree::Tau(_) => {}
                other => panic!("expected another Tau, got {other:?}"),
            },
            other => panic!("expected Tau, got {other:?}"),
        }
    }

    #[test]
    fn pair_of_values_is_a_value() {
        assert!(pair(nat(1), nat(2)).is_value());
    }

    #[test]
    fn proj_on_non_pair_value_errs() {
        // app_strict of a number against the projector function
        assert!(matches!(proj1(nat(5)), ITree::Err(ErrorKind::RunTime)));
    }

    #[test]
    fn hom_composition_is_a_hom_on_one_layer() {
        let f = make_hom(tick);
        let g = make_hom(|v| match v {
            ITree::Nat(n) => nat(n + 1),
            other => other,
        });
        let fg = Hom::compose(&f, &g);
        // error clause
        assert!(matches!(
            fg.apply(ITree::Err(ErrorKind::Lin)),
            ITree::Err(ErrorKind::Lin)
        ));
        // tick clause: fg(Tick t) = Tick(fg t)
        let lhs = fg.apply(tick(nat(1)));
        let rhs = tick(fg.apply(nat(1)));
        assert!(layer_eq(&lhs, &rhs, 4));
    }
}
