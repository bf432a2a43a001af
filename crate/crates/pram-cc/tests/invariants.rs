//! Property tests for the machine-model invariants: arbitration semantics,
//! charged-primitive contracts, forest safety under alter/shortcut, origin
//! tracking, budget accounting, and end-to-end oracle agreement.

use proptest::prelude::*;

use pram_cc::graph::{alter, shortcut, MultiGraph, ParentForest, V};
use pram_cc::pram::{
    crcw_round, padded_sort, perfect_hash_dedup, Ctx, Policy, Write,
};
use pram_cc::profile::Profile;
use pram_cc::{oracle, orchestrator, stage1};

fn ctx() -> Ctx {
    Ctx::new(Profile::desk(), Policy::Random, 0xfeed)
}

fn small_graph() -> impl Strategy<Value = (usize, Vec<(V, V)>)> {
    (2usize..40).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n as V, 0..n as V), 0..80);
        (Just(n), edges)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // every cell ends up holding a value someone actually wrote to it
    #[test]
    fn crcw_results_come_from_the_write_set(
        writes in prop::collection::vec((0u64..10, 0u64..100, 0u64..50), 0..60),
        policy in prop::sample::select(vec![Policy::First, Policy::Last, Policy::Random]),
    ) {
        let ws: Vec<Write> = writes
            .iter()
            .map(|&(cell, value, writer)| Write { cell, value, writer })
            .collect();
        let mut c = Ctx::new(Profile::desk(), policy, 1);
        let out = crcw_round(&mut c, &ws);
        for (cell, value) in &out {
            prop_assert!(ws.iter().any(|w| w.cell == *cell && w.value == *value));
        }
        let cells: std::collections::HashSet<u64> = ws.iter().map(|w| w.cell).collect();
        prop_assert_eq!(out.len(), cells.len());
    }

    // random arbitration depends only on (cell, contents), not arrival order
    #[test]
    fn random_policy_is_order_independent(
        writes in prop::collection::vec((0u64..8, 0u64..50, 0u64..50), 1..40),
        rot in 0usize..40,
    ) {
        let ws: Vec<Write> = writes
            .iter()
            .map(|&(cell, value, writer)| Write { cell, value, writer })
            .collect();
        let mut rotated = ws.clone();
        rotated.rotate_left(rot % ws.len().max(1));
        let a = crcw_round(&mut ctx(), &ws);
        let b = crcw_round(&mut ctx(), &rotated);
        prop_assert_eq!(a, b);
    }

    // padded sort: stable, ordered, item i in cell 2i of a 2m array
    #[test]
    fn padded_sort_matches_a_stable_reference(
        items in prop::collection::vec((0u64..20, 0u32..1000), 0..50),
    ) {
        let out = padded_sort(&mut ctx(), &items);
        prop_assert_eq!(out.len(), 2 * items.len().max(1));
        let mut reference = items.clone();
        reference.sort_by_key(|&(k, _)| k);
        for (i, want) in reference.iter().enumerate() {
            prop_assert_eq!(out[2 * i].as_ref(), Some(want));
            if i > 0 {
                prop_assert!(out[2 * i - 1].is_none());
            }
        }
    }

    // dedup: loop-free, unordered-unique, first occurrence wins
    #[test]
    fn dedup_matches_a_set_reference(
        edges in prop::collection::vec((0u32..15, 0u32..15, 0u32..99), 0..60),
    ) {
        let out = perfect_hash_dedup(&mut ctx(), 15, &edges);
        let mut seen = std::collections::HashSet::new();
        let mut want = Vec::new();
        for &(u, v, t) in &edges {
            if u != v && seen.insert((u.min(v), u.max(v))) {
                want.push((u, v, t));
            }
        }
        prop_assert_eq!(out, want);
    }

    // alter rewrites endpoints to parents, preserves origins as a subset,
    // and never invents component-crossing edges
    #[test]
    fn alter_preserves_origins_and_components((n, pairs) in small_graph()) {
        let g0 = MultiGraph::from_pairs(n, &pairs);
        let truth = oracle::components_dual(&g0);
        let mut g = g0.clone();
        let mut forest = ParentForest::new(n);
        let mut c = ctx();
        // contract a little first so alter has something to do
        let mut upd = Vec::new();
        stage1::matching(&mut c, &g, &mut forest, &mut upd);
        alter(&mut c, &mut g, &forest, true);

        let origins0: std::collections::HashSet<u32> =
            g0.edges().map(|e| e.origin).collect();
        for e in g.edges() {
            prop_assert_eq!(e.u, forest.parent[e.u as usize]);
            prop_assert_eq!(e.v, forest.parent[e.v as usize]);
            prop_assert!(origins0.contains(&e.origin));
            // an altered edge still joins vertices of one original component
            prop_assert_eq!(truth[e.u as usize], truth[e.v as usize]);
        }
        prop_assert!(g.edges().all(|e| !e.is_loop()) || g.live_count() >= g.live_non_loops());
    }

    // shortcut halves depths and never moves a vertex across components
    #[test]
    fn shortcut_is_component_safe((n, pairs) in small_graph()) {
        let g = MultiGraph::from_pairs(n, &pairs);
        let truth = oracle::components_dual(&g);
        let mut forest = ParentForest::new(n);
        let mut c = ctx();
        let mut upd = Vec::new();
        stage1::matching(&mut c, &g, &mut forest, &mut upd);
        stage1::matching(&mut c, &g, &mut forest, &mut upd);
        let before = forest.clone();
        let all: Vec<V> = (0..n as V).collect();
        shortcut(&mut c, &mut forest, &all);
        prop_assert!(forest.depths().is_some());
        prop_assert!(oracle::parent_component_safe(&forest, &truth));
        for v in 0..n {
            // roots stay put, children end at their old grandparent
            let want = before.parent[before.parent[v] as usize];
            prop_assert_eq!(forest.parent[v], want);
        }
    }

    // the full pipeline agrees with union-find on arbitrary small graphs
    #[test]
    fn pipeline_matches_oracle((n, pairs) in small_graph(), seed in 0u64..1000) {
        let g0 = MultiGraph::from_pairs(n, &pairs);
        let mut g = g0.clone();
        let mut c = Ctx::new(Profile::desk(), Policy::Random, seed);
        let (forest, report) = orchestrator::connectivity(&mut c, &mut g);
        let ours = oracle::forest_labels(&forest);
        let truth = oracle::components_dual(&g0);
        prop_assert!(oracle::same_partition(&ours, &truth));
        prop_assert_eq!(report.components, oracle::component_count(&truth));
        prop_assert!(forest.is_flat(0..n as V));
    }

    // ledger law: the labeled breakdown always sums to the totals
    #[test]
    fn ledger_breakdown_sums_to_totals((n, pairs) in small_graph(), seed in 0u64..1000) {
        let mut g = MultiGraph::from_pairs(n, &pairs);
        let mut c = Ctx::new(Profile::desk(), Policy::Random, seed);
        orchestrator::connectivity(&mut c, &mut g);
        let r: u64 = c.ledger.phases.iter().map(|p| p.rounds).sum();
        let w: u64 = c.ledger.phases.iter().map(|p| p.work).sum();
        prop_assert_eq!(r, c.ledger.rounds);
        prop_assert_eq!(w, c.ledger.work);
    }

    // determinism: same (seed, profile, policy) gives identical runs
    #[test]
    fn runs_replay_bit_identically((n, pairs) in small_graph(), seed in 0u64..1000) {
        let g0 = MultiGraph::from_pairs(n, &pairs);
        let run = || {
            let mut g = g0.clone();
            let mut c = Ctx::new(Profile::desk(), Policy::Random, seed);
            let (forest, _) = orchestrator::connectivity(&mut c, &mut g);
            (forest.parent, c.ledger.rounds, c.ledger.work)
        };
        prop_assert_eq!(run(), run());
    }
}
