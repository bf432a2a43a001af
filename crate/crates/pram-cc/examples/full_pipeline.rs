//! End-to-end connectivity on a mixed instance, checked against union-find.
//!
//!     cargo run --example full_pipeline

use pram_cc::pram::{Ctx, Policy};
use pram_cc::profile::Profile;
use pram_cc::{gen, oracle, orchestrator};

fn main() {
    // three cycles plus isolated vertices, lightly cross-wired by a gnp layer
    let base = gen::component_union(&[4000, 2500, 1500], 200, 7);
    let extra = gen::gnp(800, 0.004, 9);
    let mut pairs: Vec<(u32, u32)> = base.edges().map(|e| (e.u, e.v)).collect();
    pairs.extend(extra.edges().map(|e| (e.u, e.v)));
    let input = pram_cc::graph::MultiGraph::from_pairs(base.n, &pairs);

    for policy in [Policy::First, Policy::Last, Policy::Random] {
        let mut g = input.clone();
        let mut ctx = Ctx::new(Profile::desk(), policy, 42);
        let (forest, report) = orchestrator::connectivity(&mut ctx, &mut g);

        let ours = oracle::forest_labels(&forest);
        let truth = oracle::components_dual(&input);
        assert!(oracle::same_partition(&ours, &truth), "partition mismatch");

        println!(
            "{policy:?}: {} components in {} phases, {} rounds, {} work (oracle agrees)",
            report.components, report.phases_run, ctx.ledger.rounds, ctx.ledger.work
        );
    }
}
