//! One matching sweep at a time on a cycle: watch the root count fall at a
//! constant rate while alter rewrites edges to the surviving roots.
//!
//!     cargo run --example contraction_basics

use pram_cc::graph::{alter, MultiGraph, ParentForest};
use pram_cc::pram::{Ctx, Policy};
use pram_cc::profile::Profile;
use pram_cc::{gen, stage1};

fn main() {
    let mut g: MultiGraph = gen::cycle(4096);
    let mut forest = ParentForest::new(g.n);
    let mut ctx = Ctx::new(Profile::desk(), Policy::Random, 1);

    println!("round  roots  live-edges");
    for r in 0.. {
        let roots = forest.roots().count();
        println!("{r:>5}  {roots:>5}  {:>10}", g.live_non_loops());
        if g.is_all_loops() {
            break;
        }
        // each sweep needs its own rng scope or the coin flips repeat
        let mut updated = Vec::new();
        ctx.scoped(&format!("sweep{r}"), |ctx| {
            stage1::matching(ctx, &g, &mut forest, &mut updated);
            alter(ctx, &mut g, &forest, false);
        });
    }
    println!("contracted to a single root: {}", forest.roots().count() == 1);
}
