//! Executable semantics toolkit for guarded interaction trees.
//!
//! The crate provides:
//!
//! - a lazy higher-order effect-tree datatype with a combinator algebra
//!   ([`tree`]);
//! - concrete effect signatures over a closed payload universe
//!   ([`signature`]);
//! - pluggable stateful effect reifiers and their product ([`reify`]);
//! - a step-bounded reduction engine with traces and outcome
//!   classification ([`engine`]);
//! - interpreters for two small languages: a PCF-like language with I/O
//!   ([`lang_io`]) and an affine language with higher-order store
//!   ([`lang_aff`]);
//! - cross-language interoperability via typed glue code ([`interop`]).

pub mod compare;
pub mod engine;
pub mod env;
pub mod interop;
pub mod lang_aff;
pub mod lang_io;
pub mod programs;
pub mod reify;
pub mod sexp;
pub mod signature;
pub mod tree;

pub use engine::{istep, run, Outcome, Trace, DEFAULT_FUEL};
pub use reify::{combine_reifiers, io_reifier, store_reifier, GlobalReifier, GlobalState};
pub use signature::{io_signature, store_signature, IoOps, Location, SignatureSet, StoreOps};
pub use tree::{
    app_cbn, app_strict, get_fun, get_nat, get_val, gfix, ifz, make_hom, natop, pair, proj1, proj2,
    seq, tick, while_loop, ErrorKind, Hom, ITree,
};
