//! The internal reduction relation, its fuel-bounded closure, outcome
//! classification and step traces.
//!
//! A step either strips one `Tau` (state unchanged) or reifies one effect
//! node; reification and the tick it produces count as a single step.
//! Values and errors are terminal; a non-terminal tree with no step is
//! stuck, which well-formed programs never reach.

use std::fmt;

use crate::reify::{reify, GlobalReifier, GlobalState, LocalState};
use crate::signature::OpId;
use crate::tree::{ErrorKind, ITree};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// What a single step did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Tau,
    Effect(OpId),
}

/// Compact snapshot of one local state: tape lengths and heap domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalSummary {
    Io { input: usize, output: usize },
    Heap { domain: Vec<u64> },
}

/// Snapshot of the global state after a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSummary(pub Vec<LocalSummary>);

impl StateSummary {
    fn of(state: &GlobalState) -> StateSummary {
        StateSummary(
            state
                .locals
                .iter()
                .map(|l| match l {
                    LocalState::Io(s) => LocalSummary::Io {
                        input: s.input.len(),
                        output: s.output.len(),
                    },
                    LocalState::Heap(h) => LocalSummary::Heap { domain: h.domain() },
                })
                .collect(),
        )
    }
}

impl fmt::Display for StateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match l {
                LocalSummary::Io { input, output } => write!(f, "io(in:{input},out:{output})")?,
                LocalSummary::Heap { domain } => {
                    write!(f, "heap{{")?;
                    for (j, d) in domain.iter().enumerate() {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{d}")?;
                    }
                    write!(f, "}}")?;
                }
            }
        }
        Ok(())
    }
}

/// One entry of the step log.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub index: u64,
    pub kind: StepKind,
    pub state: StateSummary,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StepKind::Tau => write!(f, "#{} TAU | state: {}", self.index, self.state),
            StepKind::Effect(op) => write!(f, "#{} EFF {} | state: {}", self.index, op, self.state),
        }
    }
}

/// The ordered step log of a run; one entry per step taken.
#[derive(Clone, Debug, Default)]
pub struct Trace(pub Vec<TraceStep>);

impl Trace {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for step in &self.0 {
            out.push_str(&step.to_string());
            out.push('\n');
        }
        out
    }
}

/// Result of a fuel-bounded run.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// Terminated at a `Nat` or `Fun` head.
    Value {
        tree: ITree,
        state: GlobalState,
        steps: u64,
    },
    /// Terminated at an error; `acceptable` records whether the error
    /// kind was in the allowed set for this run.
    Errored {
        kind: ErrorKind,
        acceptable: bool,
        state: GlobalState,
        steps: u64,
    },
    /// Fuel ran out with the computation still in progress.
    OutOfFuel {
        last: ITree,
        state: GlobalState,
        steps: u64,
    },
    /// No step exists from a non-terminal tree (shape violation).
    Stuck {
        last: ITree,
        state: GlobalState,
        steps: u64,
    },
}

impl Outcome {
    pub fn steps(&self) -> u64 {
        match self {
            Outcome::Value { steps, .. }
            | Outcome::Errored { steps, .. }
            | Outcome::OutOfFuel { steps, .. }
            | Outcome::Stuck { steps, .. } => *steps,
        }
    }

    pub fn state(&self) -> &GlobalState {
        match self {
            Outcome::Value { state, .. }
            | Outcome::Errored { state, .. }
            | Outcome::OutOfFuel { state, .. }
            | Outcome::Stuck { state, .. } => state,
        }
    }

    pub fn value_nat(&self) -> Option<u64> {
        match self {
            Outcome::Value { tree, .. } => tree.as_nat(),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Outcome::Value { .. })
    }
}

/// One internal reduction step: strip a `Tau` or reify an effect (the
/// tick produced by reification is consumed as part of the same step).
/// Values, errors and shape-violating effect nodes have no step.
pub fn istep(
    gr: &GlobalReifier,
    t: &ITree,
    state: &GlobalState,
) -> Option<(ITree, GlobalState, StepKind)> {
    match t {
        ITree::Nat(_) | ITree::Fun(_) | ITree::Err(_) => None,
        ITree::Tau(s) => Some((s.force(), state.clone(), StepKind::Tau)),
        ITree::Vis(node) => {
            let (reified, state2) = reify(gr, t, state)?;
            let kind = StepKind::Effect(node.op);
            match reified {
                ITree::Tau(s) => Some((s.force(), state2, kind)),
                other => Some((other, state2, kind)),
            }
        }
    }
}

/// Iterates [`istep`] at most `fuel` times and classifies the terminal
/// tree. Errors whose kind appears in `allowed` are flagged acceptable.
pub fn run(
    gr: &GlobalReifier,
    t: ITree,
    state: GlobalState,
    fuel: u64,
    allowed: &[ErrorKind],
) -> (Outcome, Trace) {
    let mut cur = t;
    let mut st = state;
    let mut steps: u64 = 0;
    let mut trace = Vec::new();
    loop {
        match &cur {
            ITree::Nat(_) | ITree::Fun(_) => {
                return (
                    Outcome::Value {
                        tree: cur,
                        state: st,
                        steps,
                    },
                    Trace(trace),
                );
            }
            ITree::Err(e) => {
                return (
                    Outcome::Errored {
                        kind: *e,
                        acceptable: allowed.contains(e),
                        state: st,
                        steps,
                    },
                    Trace(trace),
                );
            }
            _ => {}
        }
        if steps == fuel {
            return (
                Outcome::OutOfFuel {
                    last: cur,
                    state: st,
                    steps,
                },
                Trace(trace),
            );
        }
        match istep(gr, &cur, &st) {
            None => {
                return (
                    Outcome::Stuck {
                        last: cur,
                        state: st,
                        steps,
                    },
                    Trace(trace),
                );
            }
            Some((next, st2, kind)) => {
                trace.push(TraceStep {
                    index: steps,
                    kind,
                    state: StateSummary::of(&st2),
                });
                steps += 1;
                cur = next;
                st = st2;
            }
        }
    }
}
