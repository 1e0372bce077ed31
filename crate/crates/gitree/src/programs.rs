//! Example programs built directly from the combinator algebra.

use crate::signature::{IoOps, StoreOps};
use crate::tree::{get_nat, get_val, natop, seq, while_loop, ITree};

fn mul(a: u64, b: u64) -> u64 {
    a.saturating_mul(b)
}

fn monus(a: u64, b: u64) -> u64 {
    a.saturating_sub(b)
}

/// Iterative factorial over the store: an accumulator cell and a counter
/// cell, a while loop multiplying them down, and a final read.
pub fn fact(n: u64, store: StoreOps) -> ITree {
    store.alloc(ITree::Nat(1), move |acc| {
        store.alloc(ITree::Nat(n), move |cell| {
            seq(fact_body(store, acc, cell), store.read(acc))
        })
    })
}

fn fact_body(
    store: StoreOps,
    acc: crate::signature::Location,
    cell: crate::signature::Location,
) -> ITree {
    while_loop(
        store.read(cell),
        get_val(store.read(cell), move |i| {
            let i2 = i.clone();
            get_val(natop(mul, i, store.read(acc)), move |r| {
                let r = r.clone();
                let i3 = i2.clone();
                get_val(natop(monus, i3, ITree::Nat(1)), move |next| {
                    seq(store.write(acc, r.clone()), store.write(cell, next))
                })
            })
        }),
    )
}

/// Reads a number, computes its factorial via the store, writes the
/// result: a program using two effect families at once.
pub fn fact_io(store: StoreOps, io: IoOps) -> ITree {
    get_nat(get_nat(io.input(), move |n| fact(n, store)), move |m| {
        io.output(m)
    })
}

/// Independent factorial oracle used by the tests.
pub fn fact_meta(n: u64) -> u64 {
    let mut acc: u64 = 1;
    for k in 1..=n {
        acc = acc.saturating_mul(k);
    }
    acc
}
