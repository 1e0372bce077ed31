//! Stateful interpretation of effect nodes.
//!
//! A [`Reifier`] gives meaning to one effect family as a pure partial
//! state transformer; it never sees continuations. Reifiers combine into
//! a [`GlobalReifier`] whose state is the product of the local states, in
//! family order, and where a step of family `i` changes only component
//! `i`.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::signature::{
    io_signature, store_signature, Location, OpDecl, Payload, Signature, SignatureSet,
};
use crate::tree::{ErrorKind, ITree, TreeSusp};

/// Input and output tapes. The input is consumed from the front; the
/// output grows by prepending, so index 0 is the most recent write.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IoState {
    pub input: Vec<u64>,
    pub output: Vec<u64>,
}

impl IoState {
    pub fn new(input: Vec<u64>, output: Vec<u64>) -> IoState {
        IoState { input, output }
    }
}

/// A finite map from locations to suspended trees.
#[derive(Clone, Default)]
pub struct HeapState {
    cells: BTreeMap<u64, TreeSusp>,
}

impl HeapState {
    pub fn new() -> HeapState {
        HeapState::default()
    }

    pub fn lookup(&self, loc: Location) -> Option<&TreeSusp> {
        self.cells.get(&loc.to_nat())
    }

    pub fn contains(&self, loc: Location) -> bool {
        self.cells.contains_key(&loc.to_nat())
    }

    pub fn domain(&self) -> Vec<u64> {
        self.cells.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn smallest_absent(&self) -> Location {
        let mut n = 0;
        while self.cells.contains_key(&n) {
            n += 1;
        }
        Location(n)
    }

    fn inserted(&self, loc: Location, t: TreeSusp) -> HeapState {
        let mut cells = self.cells.clone();
        cells.insert(loc.to_nat(), t);
        HeapState { cells }
    }

    fn removed(&self, loc: Location) -> HeapState {
        let mut cells = self.cells.clone();
        cells.remove(&loc.to_nat());
        HeapState { cells }
    }

    /// Identity comparison: same domain and the very same suspensions.
    pub fn same_cells(&self, other: &HeapState) -> bool {
        self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .all(|(k, v)| other.cells.get(k).is_some_and(|w| v.same_susp(w)))
    }
}

impl std::fmt::Debug for HeapState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "heap{:?}", self.domain())
    }
}

/// State of one reifier.
#[derive(Clone, Debug)]
pub enum LocalState {
    Io(IoState),
    Heap(HeapState),
}

impl LocalState {
    pub fn as_io(&self) -> Option<&IoState> {
        match self {
            LocalState::Io(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_heap(&self) -> Option<&HeapState> {
        match self {
            LocalState::Heap(h) => Some(h),
            _ => None,
        }
    }

    /// Identity comparison (tapes by value, heaps by cell identity).
    pub fn same_as(&self, other: &LocalState) -> bool {
        match (self, other) {
            (LocalState::Io(a), LocalState::Io(b)) => a == b,
            (LocalState::Heap(a), LocalState::Heap(b)) => a.same_cells(b),
            _ => false,
        }
    }
}

type StepFn = Rc<dyn Fn(&str, &Payload, &LocalState) -> Option<(Payload, LocalState)>>;

/// A pure partial state transformer for one effect family. The step
/// function sees only the op name, the input payload and the local state;
/// failure (`None`) is turned into `Err(RunTime)` by [`reify`].
pub struct Reifier {
    pub signature: Signature,
    pub initial: LocalState,
    step: StepFn,
}

impl Reifier {
    pub fn new(
        signature: Signature,
        initial: LocalState,
        step: impl Fn(&str, &Payload, &LocalState) -> Option<(Payload, LocalState)> + 'static,
    ) -> Reifier {
        Reifier {
            signature,
            initial,
            step: Rc::new(step),
        }
    }

    pub fn step(
        &self,
        op: &str,
        input: &Payload,
        state: &LocalState,
    ) -> Option<(Payload, LocalState)> {
        (self.step)(op, input, state)
    }
}

/// The tape reifier: input pops the front of the input tape (failing on
/// an empty tape), output prepends to the output tape.
pub fn io_reifier() -> Reifier {
    Reifier::new(
        io_signature(),
        LocalState::Io(IoState::default()),
        |op, input, state| {
            let LocalState::Io(s) = state else {
                return None;
            };
            match (op, input) {
                ("input", Payload::Unit) => {
                    let (&n, rest) = s.input.split_first()?;
                    Some((
                        Payload::Num(n),
                        LocalState::Io(IoState::new(rest.to_vec(), s.output.clone())),
                    ))
                }
                ("output", Payload::Num(n)) => {
                    let mut output = Vec::with_capacity(s.output.len() + 1);
                    output.push(*n);
                    output.extend_from_slice(&s.output);
                    Some((
                        Payload::Unit,
                        LocalState::Io(IoState::new(s.input.clone(), output)),
                    ))
                }
                _ => None,
            }
        },
    )
}

/// The heap reifier: alloc picks the smallest absent location; read,
/// write and dealloc fail on missing cells.
pub fn store_reifier() -> Reifier {
    Reifier::new(
        store_signature(),
        LocalState::Heap(HeapState::new()),
        |op, input, state| {
            let LocalState::Heap(h) = state else {
                return None;
            };
            match (op, input) {
                ("alloc", Payload::Tree(t)) => {
                    let loc = h.smallest_absent();
                    Some((
                        Payload::Loc(loc),
                        LocalState::Heap(h.inserted(loc, t.clone())),
                    ))
                }
                ("read", Payload::Loc(l)) => {
                    let cell = h.lookup(*l)?;
                    Some((Payload::Tree(cell.clone()), LocalState::Heap(h.clone())))
                }
                ("write", Payload::LocTree(l, t)) => {
                    if !h.contains(*l) {
                        return None;
                    }
                    Some((Payload::Unit, LocalState::Heap(h.inserted(*l, t.clone()))))
                }
                ("dealloc", Payload::Loc(l)) => {
                    if !h.contains(*l) {
                        return None;
                    }
                    Some((Payload::Unit, LocalState::Heap(h.removed(*l))))
                }
                _ => None,
            }
        },
    )
}

/// Product of the local states, one per reifier, in family order.
#[derive(Clone, Debug)]
pub struct GlobalState {
    pub locals: Vec<LocalState>,
}

impl GlobalState {
    pub fn io(&self, family: usize) -> Option<&IoState> {
        self.locals.get(family)?.as_io()
    }

    pub fn heap(&self, family: usize) -> Option<&HeapState> {
        self.locals.get(family)?.as_heap()
    }

    /// Identity comparison of all components.
    pub fn same_as(&self, other: &GlobalState) -> bool {
        self.locals.len() == other.locals.len()
            && self
                .locals
                .iter()
                .zip(&other.locals)
                .all(|(a, b)| a.same_as(b))
    }
}

/// Dispatches operations to local reifiers by family index; a step of
/// family `i` rebuilds only component `i` of the state.
pub struct GlobalReifier {
    reifiers: Vec<Reifier>,
}

/// See [`GlobalReifier`].
pub fn combine_reifiers(reifiers: Vec<Reifier>) -> GlobalReifier {
    GlobalReifier { reifiers }
}

impl GlobalReifier {
    pub fn initial_state(&self) -> GlobalState {
        GlobalState {
            locals: self.reifiers.iter().map(|r| r.initial.clone()).collect(),
        }
    }

    pub fn signatures(&self) -> SignatureSet {
        SignatureSet::new(self.reifiers.iter().map(|r| r.signature.clone()).collect())
    }

    pub fn op_decl(&self, family: usize, name: &str) -> Option<OpDecl> {
        self.reifiers.get(family)?.signature.op(name).copied()
    }

    /// One dispatch step: unknown families or ops are step failures.
    pub fn step(
        &self,
        family: usize,
        op: &str,
        input: &Payload,
        state: &GlobalState,
    ) -> Option<(Payload, GlobalState)> {
        let reifier = self.reifiers.get(family)?;
        let local = state.locals.get(family)?;
        let (out, local2) = reifier.step(op, input, local)?;
        let mut locals = state.locals.clone();
        locals[family] = local2;
        Some((out, GlobalState { locals }))
    }
}

/// Interprets one effect node against the global reifier.
///
/// On step success with output `y` the result is one tick over the
/// continuation applied to `y`; on step failure the result encodes
/// reification failure as `Err(RunTime)` with the state unchanged.
///
/// `None` means no interpretation exists at all: the head is not a `Vis`
/// node (a precondition violation), the input payload does not match the
/// declared shape, or the continuation rejects the produced output. The
/// engine classifies those as stuck.
pub fn reify(gr: &GlobalReifier, t: &ITree, state: &GlobalState) -> Option<(ITree, GlobalState)> {
    let ITree::Vis(node) = t else { return None };
    let Some(decl) = gr.op_decl(node.op.family, node.op.name) else {
        // unknown family or op: the dispatch step fails
        return Some((ITree::Err(ErrorKind::RunTime), state.clone()));
    };
    if node.input.shape() != decl.input {
        return None;
    }
    match gr.step(node.op.family, node.op.name, &node.input, state) {
        None => Some((ITree::Err(ErrorKind::RunTime), state.clone())),
        Some((out, state2)) => {
            debug_assert_eq!(out.shape(), decl.output);
            let susp = node.k.call(&out)?;
            Some((ITree::Tau(susp), state2))
        }
    }
}
