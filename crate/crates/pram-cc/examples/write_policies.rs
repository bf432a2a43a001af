//! Concurrent-write arbitration. Under `first`/`last` the winner depends on
//! arrival order; under `random` it is a seeded score of (cell, value), so
//! shuffling the writes cannot change the outcome.
//!
//!     cargo run --example write_policies

use pram_cc::pram::{Ctx, Policy, VertexCells};
use pram_cc::profile::Profile;

fn main() {
    let writes: Vec<(u32, u64)> = vec![(7, 100), (7, 200), (7, 300), (3, 11), (3, 22)];

    for policy in [Policy::First, Policy::Last, Policy::Random] {
        let ctx = Ctx::new(Profile::desk(), policy, 99);
        let mut cells = VertexCells::for_ctx(&ctx);
        for (i, &(cell, value)) in writes.iter().enumerate() {
            cells.write(cell, value, i as u64);
        }
        println!("{policy:?}: {:?}", cells.into_sorted());
    }

    // order-independence of `random`, demonstrated on a reversed stream
    let ctx = Ctx::new(Profile::desk(), Policy::Random, 99);
    let mut fwd = VertexCells::for_ctx(&ctx);
    let mut rev = VertexCells::for_ctx(&ctx);
    for (i, &(c, v)) in writes.iter().enumerate() {
        fwd.write(c, v, i as u64);
    }
    for (i, &(c, v)) in writes.iter().enumerate().rev() {
        rev.write(c, v, i as u64);
    }
    assert_eq!(fwd.into_sorted(), rev.into_sorted());
    println!("random arbitration is insensitive to write order");
}
