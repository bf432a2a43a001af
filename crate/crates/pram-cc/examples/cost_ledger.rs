//! The ledger tracks rounds and work per pipeline stage; the breakdown is
//! disjoint, so the labeled entries always sum back to the totals.
//!
//!     cargo run --example cost_ledger

use pram_cc::pram::{Ctx, Policy};
use pram_cc::profile::Profile;
use pram_cc::{gen, orchestrator};

fn main() {
    let mut g = gen::gnp(20_000, 0.0003, 3);
    let mut ctx = Ctx::new(Profile::desk(), Policy::Random, 5);
    let (_, report) = orchestrator::connectivity(&mut ctx, &mut g);

    let mut phases = ctx.ledger.phases.clone();
    phases.sort_by(|a, b| b.work.cmp(&a.work));
    println!("{:<40} {:>8} {:>12}", "label", "rounds", "work");
    for p in &phases {
        println!("{:<40} {:>8} {:>12}", p.label, p.rounds, p.work);
    }
    let (r, w): (u64, u64) = phases.iter().map(|p| (p.rounds, p.work)).fold(
        (0, 0),
        |(r, w), (pr, pw)| (r + pr, w + pw),
    );
    assert_eq!((r, w), (ctx.ledger.rounds, ctx.ledger.work));
    println!("{:<40} {:>8} {:>12}", "total (= sum)", r, w);
    println!("components: {}, phases run: {}", report.components, report.phases_run);
}
