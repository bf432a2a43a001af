//! Boosted retries under hard budgets: several seeded copies of a budgeted
//! computation run side by side, all of them are charged, and the first one
//! that finishes within budget wins. Too tight a budget yields a diagnostic
//! per instance instead of a silent hang.
//!
//!     cargo run --example budgeted_instances

use pram_cc::graph::ParentForest;
use pram_cc::pram::{budgeted_instances, Ctx, InstanceBudget, Policy};
use pram_cc::profile::Profile;
use pram_cc::{gen, stage3};

fn main() {
    let g = gen::cycle(512);

    for (name, budget) in [
        ("generous", InstanceBudget { rounds: 100_000, work: 10_000_000, pool: None }),
        ("starved", InstanceBudget { rounds: 40, work: 2_000, pool: None }),
    ] {
        let mut ctx = Ctx::new(Profile::desk(), Policy::Random, 7);
        let res = budgeted_instances(
            &mut ctx,
            "demo",
            3,
            budget,
            |ctx, _copy| {
                let mut h = g.clone();
                let mut forest = ParentForest::new(h.n);
                stage3::ltz_rounds(ctx, &mut h, &mut forest, 64)?;
                Ok(forest)
            },
            |forest| forest.is_flat(0..g.n as u32),
        );
        match res {
            Ok(_) => println!(
                "{name}: solved; charged {} rounds / {} work across all copies",
                ctx.ledger.rounds, ctx.ledger.work
            ),
            Err(ex) => {
                println!("{name}: every copy blew its budget:");
                for d in &ex.diagnostics {
                    println!("  {} after {} rounds / {} work: {}", d.path, d.rounds, d.work, d.outcome);
                }
            }
        }
    }
}
