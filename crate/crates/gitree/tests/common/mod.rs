//! Shared helpers for the integration suites: seeded random generators
//! for trees, homomorphisms and reifier states, plus the corpus loader.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use gitree::compare::io_store_rig;
use gitree::reify::{GlobalReifier, GlobalState, HeapState, IoState, LocalState};
use gitree::signature::{IoOps, Location, StoreOps};
use gitree::tree::{
    app_strict, get_nat, get_val, ifz, make_hom, natop, seq, tick, ErrorKind, FunSusp, Hom, ITree,
};

pub const STORE_FAMILY: usize = 0;
pub const IO_FAMILY: usize = 1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The ambient rig used by the random suites: store at family 0, io at
/// family 1.
pub fn rig(input: Vec<u64>) -> (GlobalReifier, GlobalState, StoreOps, IoOps) {
    let (gr, st) = io_store_rig(input);
    let sigs = gr.signatures();
    (
        gr,
        st,
        StoreOps::embedded_in(&sigs).unwrap(),
        IoOps::embedded_in(&sigs).unwrap(),
    )
}

pub fn add(a: u64, b: u64) -> u64 {
    a.saturating_add(b)
}

pub fn mul(a: u64, b: u64) -> u64 {
    a.saturating_mul(b)
}

pub fn monus(a: u64, b: u64) -> u64 {
    a.saturating_sub(b)
}

/// A random endofunction from a small pool, returned with its tree form.
pub fn gen_fun(r: &mut ChaCha8Rng) -> ITree {
    match r.gen_range(0..4) {
        0 => ITree::Fun(FunSusp::ready(|t| t)),
        1 => {
            let k = r.gen_range(0..10);
            ITree::Fun(FunSusp::ready(move |_| ITree::Nat(k)))
        }
        2 => ITree::Fun(FunSusp::ready(tick)),
        _ => ITree::Fun(FunSusp::ready(|t| {
            natop(|a, b| a.saturating_add(b), t, ITree::Nat(1))
        })),
    }
}

/// A random tree value (`Nat` or `Fun` head).
pub fn gen_value(r: &mut ChaCha8Rng) -> ITree {
    if r.gen_bool(0.6) {
        ITree::Nat(r.gen_range(0..20))
    } else {
        gen_fun(r)
    }
}

/// A random small tree over the combined store/io signature.
pub fn gen_tree(r: &mut ChaCha8Rng, store: StoreOps, io: IoOps, depth: u32) -> ITree {
    if depth == 0 {
        return match r.gen_range(0..4) {
            0 | 1 => gen_value(r),
            2 => ITree::Err(if r.gen_bool(0.7) {
                ErrorKind::RunTime
            } else {
                ErrorKind::Lin
            }),
            _ => ITree::Nat(r.gen_range(0..5)),
        };
    }
    match r.gen_range(0..12) {
        0 | 1 => gen_value(r),
        2 => tick(gen_tree(r, store, io, depth - 1)),
        3 => io.input(),
        4 => io.output(r.gen_range(0..9)),
        5 => {
            let init = gen_tree(r, store, io, depth - 1);
            store.alloc(init, move |l| ITree::Nat(l.to_nat()))
        }
        6 => store.read(Location(r.gen_range(0..6))),
        7 => store.write(
            Location(r.gen_range(0..6)),
            gen_tree(r, store, io, depth - 1),
        ),
        8 => natop(
            add,
            gen_tree(r, store, io, depth - 1),
            gen_tree(r, store, io, depth - 1),
        ),
        9 => seq(
            gen_tree(r, store, io, depth - 1),
            gen_tree(r, store, io, depth - 1),
        ),
        10 => ifz(
            gen_tree(r, store, io, depth - 1),
            gen_tree(r, store, io, depth - 1),
            gen_tree(r, store, io, depth - 1),
        ),
        _ => app_strict(gen_fun(r), gen_tree(r, store, io, depth - 1)),
    }
}

/// A random homomorphism, with a short description for failure messages.
pub fn gen_hom(r: &mut ChaCha8Rng, store: StoreOps, io: IoOps, depth: u32) -> (String, Hom) {
    let pick = if depth == 0 {
        r.gen_range(0..9)
    } else {
        r.gen_range(0..10)
    };
    match pick {
        0 => ("identity".into(), Hom::identity()),
        1 => ("tick-values".into(), make_hom(tick)),
        2 => (
            "succ-on-nats".into(),
            make_hom(|v| match v {
                ITree::Nat(n) => ITree::Nat(n.saturating_add(1)),
                other => other,
            }),
        ),
        3 => {
            let rest = gen_tree(r, store, io, 1);
            (
                "seq-then".into(),
                Hom::from_fn(move |t| seq(t, rest.clone())),
            )
        }
        4 => {
            let lhs = gen_tree(r, store, io, 1);
            (
                "natop-rhs".into(),
                Hom::from_fn(move |t| natop(add, lhs.clone(), t)),
            )
        }
        5 => (
            "natop-lhs-value".into(),
            Hom::from_fn(move |t| natop(mul, t, ITree::Nat(3))),
        ),
        6 => {
            let (a, b) = (gen_tree(r, store, io, 1), gen_tree(r, store, io, 1));
            (
                "ifz".into(),
                Hom::from_fn(move |t| ifz(t, a.clone(), b.clone())),
            )
        }
        7 => {
            let f = gen_fun(r);
            (
                "apply-fixed-fun".into(),
                Hom::from_fn(move |t| app_strict(f.clone(), t)),
            )
        }
        8 => (
            "getnat-double".into(),
            Hom::from_fn(|t| get_nat(t, |n| ITree::Nat(n.saturating_mul(2)))),
        ),
        _ => {
            let (da, outer) = gen_hom(r, store, io, depth - 1);
            let (db, inner) = gen_hom(r, store, io, depth - 1);
            (format!("{da}.{db}"), Hom::compose(&outer, &inner))
        }
    }
}

/// A random tape state.
pub fn gen_io_state(r: &mut ChaCha8Rng) -> IoState {
    let input = (0..r.gen_range(0..5)).map(|_| r.gen_range(0..30)).collect();
    let output = (0..r.gen_range(0..5)).map(|_| r.gen_range(0..30)).collect();
    IoState::new(input, output)
}

/// A random heap built through the store reifier so cells sit at
/// reifier-chosen locations; returns the populated global state.
pub fn gen_global_state(r: &mut ChaCha8Rng, gr: &GlobalReifier, store: StoreOps) -> GlobalState {
    let mut st = gr.initial_state();
    st.locals[IO_FAMILY] = LocalState::Io(gen_io_state(r));
    let cells = r.gen_range(0..4);
    for _ in 0..cells {
        let v = gen_value(r);
        let alloc = store.alloc(v, |_| ITree::Nat(0));
        if let Some((_, st2)) = gitree::reify::reify(gr, &alloc, &st) {
            st = st2;
        }
    }
    st
}

/// A heap value snapshot for table tests.
pub fn gen_heap(r: &mut ChaCha8Rng) -> HeapState {
    let (gr, _, store, _) = rig(vec![]);
    let st = gen_global_state(r, &gr, store);
    st.heap(STORE_FAMILY).unwrap().clone()
}

/// One corpus program with its header directives.
#[derive(Clone, Debug)]
pub struct CorpusProgram {
    pub name: String,
    pub path: PathBuf,
    pub source: String,
    pub tape: Vec<u64>,
    pub expect: Option<u64>,
    pub expect_out: Option<Vec<u64>>,
    pub expect_err: Option<String>,
    pub allow_lin: bool,
}

fn parse_nat_list(s: &str) -> Vec<u64> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().expect("natural in header"))
        .collect()
}

pub fn corpus_dir(kind: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../programs")
        .join(kind)
}

/// Loads every `.sexp` file under `programs/<kind>`, reading the `;`
/// comment headers (`tape:`, `expect:`, `expect-out:`, `expect-err:`,
/// `allow:`).
pub fn load_corpus(kind: &str) -> Vec<CorpusProgram> {
    let dir = corpus_dir(kind);
    let mut programs = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus dir {}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sexp"))
        .collect();
    entries.sort();
    for path in entries {
        let source = std::fs::read_to_string(&path).unwrap();
        let mut prog = CorpusProgram {
            name: path.file_stem().unwrap().to_string_lossy().into_owned(),
            path: path.clone(),
            source: source.clone(),
            tape: Vec::new(),
            expect: None,
            expect_out: None,
            expect_err: None,
            allow_lin: false,
        };
        for line in source.lines() {
            let Some(rest) = line.trim().strip_prefix(';') else {
                continue;
            };
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("tape:") {
                prog.tape = parse_nat_list(v);
            } else if let Some(v) = rest.strip_prefix("expect-out:") {
                prog.expect_out = Some(parse_nat_list(v));
            } else if let Some(v) = rest.strip_prefix("expect-err:") {
                prog.expect_err = Some(v.trim().to_string());
            } else if let Some(v) = rest.strip_prefix("expect:") {
                prog.expect = Some(v.trim().parse().expect("natural after expect:"));
            } else if let Some(v) = rest.strip_prefix("allow:") {
                prog.allow_lin = v.trim() == "lin";
            }
        }
        programs.push(prog);
    }
    programs
}

/// Marks a criterion as passed in the test output.
pub fn pass(criterion: &str, detail: &str) {
    println!("ACCEPTANCE PASS {criterion}: {detail}");
}

/// Convenience wrapper asserting the outcome of a `get_val` chain.
pub fn let_in(t: ITree, f: impl Fn(ITree) -> ITree + 'static) -> ITree {
    get_val(t, f)
}
