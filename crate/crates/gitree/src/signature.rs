//! Effect signatures and the payload universe.
//!
//! Arities of effect operations are given over a closed universe of
//! payload shapes rather than arbitrary functors: exactly the shapes the
//! I/O and store families need. Adding a new effect family means adding
//! payload variants here if none of the existing shapes fit.

use std::fmt;

use crate::tree::{Continuation, ITree, TreeSusp, VisNode};

/// A store address. `to_nat`/`from_nat` form a section-retraction pair,
/// identity on the index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location(pub u64);

impl Location {
    pub fn to_nat(self) -> u64 {
        self.0
    }

    pub fn from_nat(n: u64) -> Location {
        Location(n)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "loc{}", self.0)
    }
}

/// Shape of an effect input or output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayloadShape {
    Unit,
    Num,
    Loc,
    Tree,
    LocTree,
}

/// Effect inputs and outputs.
#[derive(Clone)]
pub enum Payload {
    Unit,
    Num(u64),
    Loc(Location),
    Tree(TreeSusp),
    LocTree(Location, TreeSusp),
}

impl Payload {
    pub fn shape(&self) -> PayloadShape {
        match self {
            Payload::Unit => PayloadShape::Unit,
            Payload::Num(_) => PayloadShape::Num,
            Payload::Loc(_) => PayloadShape::Loc,
            Payload::Tree(_) => PayloadShape::Tree,
            Payload::LocTree(..) => PayloadShape::LocTree,
        }
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Unit => write!(f, "()"),
            Payload::Num(n) => write!(f, "{n}"),
            Payload::Loc(l) => write!(f, "{l}"),
            Payload::Tree(_) => write!(f, "<tree>"),
            Payload::LocTree(l, _) => write!(f, "({l}, <tree>)"),
        }
    }
}

/// Global operation id: reifier index in the ambient signature list plus
/// the op name within that family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OpId {
    pub family: usize,
    pub name: &'static str,
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.family, self.name)
    }
}

/// One operation of an effect family with its declared arities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpDecl {
    pub name: &'static str,
    pub input: PayloadShape,
    pub output: PayloadShape,
}

/// An effect family: a name plus its operations. Op names are unique
/// within a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub name: &'static str,
    pub ops: Vec<OpDecl>,
}

impl Signature {
    pub fn op(&self, name: &str) -> Option<&OpDecl> {
        self.ops.iter().find(|o| o.name == name)
    }
}

/// The input/output family: read a number, write a number.
pub fn io_signature() -> Signature {
    Signature {
        name: "io",
        ops: vec![
            OpDecl {
                name: "input",
                input: PayloadShape::Unit,
                output: PayloadShape::Num,
            },
            OpDecl {
                name: "output",
                input: PayloadShape::Num,
                output: PayloadShape::Unit,
            },
        ],
    }
}

/// The higher-order store family.
pub fn store_signature() -> Signature {
    Signature {
        name: "store",
        ops: vec![
            OpDecl {
                name: "alloc",
                input: PayloadShape::Tree,
                output: PayloadShape::Loc,
            },
            OpDecl {
                name: "read",
                input: PayloadShape::Loc,
                output: PayloadShape::Tree,
            },
            OpDecl {
                name: "write",
                input: PayloadShape::LocTree,
                output: PayloadShape::Unit,
            },
            OpDecl {
                name: "dealloc",
                input: PayloadShape::Loc,
                output: PayloadShape::Unit,
            },
        ],
    }
}

/// An ordered list of effect families forming the ambient signature.
/// The position of a family in the list is its global index.
#[derive(Clone, Debug)]
pub struct SignatureSet {
    families: Vec<Signature>,
}

impl SignatureSet {
    pub fn new(families: Vec<Signature>) -> SignatureSet {
        SignatureSet { families }
    }

    /// Positional embedding of a local family into the global signature.
    /// Absence of the family is a configuration error (`None`).
    pub fn embed(&self, family_name: &str) -> Option<usize> {
        self.families.iter().position(|s| s.name == family_name)
    }

    pub fn family(&self, idx: usize) -> Option<&Signature> {
        self.families.get(idx)
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }
}

/// Smart constructors for the I/O family, written against a family index
/// so programs stay polymorphic in the ambient signature.
#[derive(Clone, Copy, Debug)]
pub struct IoOps {
    pub family: usize,
}

impl IoOps {
    pub fn embedded_in(sigs: &SignatureSet) -> Option<IoOps> {
        Some(IoOps {
            family: sigs.embed("io")?,
        })
    }

    pub fn input_op(&self) -> OpId {
        OpId {
            family: self.family,
            name: "input",
        }
    }

    pub fn output_op(&self) -> OpId {
        OpId {
            family: self.family,
            name: "output",
        }
    }

    /// `INPUT`: reads a number; the continuation turns the numeric output
    /// into a `Nat` leaf.
    pub fn input(&self) -> ITree {
        ITree::Vis(VisNode {
            op: self.input_op(),
            input: Payload::Unit,
            k: Continuation::new(|out| match out {
                Payload::Num(n) => Some(TreeSusp::ready(ITree::Nat(*n))),
                _ => None,
            }),
        })
    }

    /// `OUTPUT(n)`: writes `n`; the result is the dummy value `Nat(0)`.
    pub fn output(&self, n: u64) -> ITree {
        ITree::Vis(VisNode {
            op: self.output_op(),
            input: Payload::Num(n),
            k: Continuation::new(|out| match out {
                Payload::Unit => Some(TreeSusp::ready(ITree::Nat(0))),
                _ => None,
            }),
        })
    }
}

/// Smart constructors for the store family.
#[derive(Clone, Copy, Debug)]
pub struct StoreOps {
    pub family: usize,
}

impl StoreOps {
    pub fn embedded_in(sigs: &SignatureSet) -> Option<StoreOps> {
        Some(StoreOps {
            family: sigs.embed("store")?,
        })
    }

    fn op(&self, name: &'static str) -> OpId {
        OpId {
            family: self.family,
            name,
        }
    }

    /// `ALLOC(init, k)`: stores a suspension of `init` and continues with
    /// the fresh location.
    pub fn alloc(&self, init: ITree, k: impl Fn(Location) -> ITree + 'static) -> ITree {
        ITree::Vis(VisNode {
            op: self.op("alloc"),
            input: Payload::Tree(TreeSusp::ready(init)),
            k: Continuation::new(move |out| match out {
                Payload::Loc(l) => Some(TreeSusp::ready(k(*l))),
                _ => None,
            }),
        })
    }

    /// `READ(l)`: the continuation is the identity on tree suspensions.
    pub fn read(&self, loc: Location) -> ITree {
        ITree::Vis(VisNode {
            op: self.op("read"),
            input: Payload::Loc(loc),
            k: Continuation::new(|out| match out {
                Payload::Tree(t) => Some(t.clone()),
                _ => None,
            }),
        })
    }

    /// `WRITE(l, v)`: result is the dummy value `Nat(0)`.
    pub fn write(&self, loc: Location, value: ITree) -> ITree {
        ITree::Vis(VisNode {
            op: self.op("write"),
            input: Payload::LocTree(loc, TreeSusp::ready(value)),
            k: Continuation::new(|out| match out {
                Payload::Unit => Some(TreeSusp::ready(ITree::Nat(0))),
                _ => None,
            }),
        })
    }

    /// `DEALLOC(l)`: result is the dummy value `Nat(0)`.
    pub fn dealloc(&self, loc: Location) -> ITree {
        ITree::Vis(VisNode {
            op: self.op("dealloc"),
            input: Payload::Loc(loc),
            k: Continuation::new(|out| match out {
                Payload::Unit => Some(TreeSusp::ready(ITree::Nat(0))),
                _ => None,
            }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn location_codec_is_identity_on_index() {
        for n in [0u64, 1, 7, 123456] {
            assert_eq!(Location::from_nat(n).to_nat(), n);
        }
    }

    #[test]
    fn positional_embedding() {
        let sigs = SignatureSet::new(vec![store_signature(), io_signature()]);
        let io = IoOps::embedded_in(&sigs).unwrap();
        let store = StoreOps::embedded_in(&sigs).unwrap();
        assert_eq!(
            io.input_op(),
            OpId {
                family: 1,
                name: "input"
            }
        );
        assert_eq!(
            store.op("alloc"),
            OpId {
                family: 0,
                name: "alloc"
            }
        );
    }

    #[test]
    fn missing_family_is_a_configuration_error() {
        let sigs = SignatureSet::new(vec![io_signature()]);
        assert!(StoreOps::embedded_in(&sigs).is_none());
    }

    #[test]
    fn embedding_is_injective_on_ops() {
        let sigs = SignatureSet::new(vec![store_signature(), io_signature()]);
        let io = IoOps::embedded_in(&sigs).unwrap();
        let store = StoreOps::embedded_in(&sigs).unwrap();
        let ids = [
            store.op("alloc"),
            store.op("read"),
            store.op("write"),
            store.op("dealloc"),
            io.input_op(),
            io.output_op(),
        ];
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn smart_constructors_match_declared_shapes() {
        let sigs = SignatureSet::new(vec![store_signature(), io_signature()]);
        let io = IoOps::embedded_in(&sigs).unwrap();
        let store = StoreOps::embedded_in(&sigs).unwrap();
        let nodes = [
            io.input(),
            io.output(3),
            store.alloc(ITree::Nat(1), |l| ITree::Nat(l.to_nat())),
            store.read(Location(0)),
            store.write(Location(0), ITree::Nat(9)),
            store.dealloc(Location(0)),
        ];
        for node in &nodes {
            let ITree::Vis(v) = node else {
                panic!("expected Vis node")
            };
            let family = sigs.family(v.op.family).unwrap();
            let decl = family.op(v.op.name).unwrap();
            assert_eq!(v.input.shape(), decl.input);
            // the continuation accepts exactly the declared output shape
            let probes = [
                Payload::Unit,
                Payload::Num(5),
                Payload::Loc(Location(2)),
                Payload::Tree(TreeSusp::ready(ITree::Nat(0))),
                Payload::LocTree(Location(1), TreeSusp::ready(ITree::Nat(0))),
            ];
            for p in &probes {
                assert_eq!(v.k.call(p).is_some(), p.shape() == decl.output);
            }
        }
    }

    #[test]
    fn input_node_is_not_a_value() {
        let sigs = SignatureSet::new(vec![io_signature()]);
        let io = IoOps::embedded_in(&sigs).unwrap();
        assert!(!io.input().is_value());
    }
}
