//! Stage 3: finishing small graphs. Expand-maxlink sweeps are repeated until
//! every surviving edge is a loop; the sampling variant thins the edge set
//! first so only an expected constant amount of work remains per vertex.

use rand::Rng;

use crate::graph::{alter, shortcut, MultiGraph, ParentForest, V};
use crate::pram::{perfect_hash_dedup, Ctx, InstanceFail};
use crate::stage2::expand_maxlink;

/// Run expand-maxlink sweeps (loops kept) until `g` is all loops or
/// `round_limit` sweeps have passed. Returns whether it converged. Each
/// sweep starts with a charged all-loops check and a budget guard, so a
/// budgeted caller halts promptly.
pub fn ltz_rounds(
    ctx: &mut Ctx,
    g: &mut MultiGraph,
    forest: &mut ParentForest,
    round_limit: u32,
) -> Result<bool, InstanceFail> {
    ctx.labeled("stage3/ltz", |ctx| {
        ctx.scoped("ltz", |ctx| {
            for r in 0..=round_limit {
                ctx.charge(1, g.live_count() as u64);
                if g.is_all_loops() {
                    return Ok(true);
                }
                ctx.guard()?;
                if r == round_limit {
                    break;
                }
                ctx.scoped(&format!("round{r}"), |ctx| {
                    expand_maxlink(ctx, g, forest, true, false)
                })?;
                let vs = g.vertex_set();
                shortcut(ctx, forest, &vs);
                alter(ctx, g, forest, true);
            }
            Ok(false)
        })
    })
}

/// Solve a (small or sampled) graph: tiny vertex sets get their edges
/// deduplicated and finished outright; larger ones are finished on a random
/// edge sample. Either way every vertex then takes three pointer jumps so
/// the whole forest reflects the merges. Returns whether the worked-on edge
/// set converged to all-loops.
pub fn sample_solve(
    ctx: &mut Ctx,
    g: &MultiGraph,
    forest: &mut ParentForest,
) -> Result<bool, InstanceFail> {
    ctx.labeled("stage3/sample-solve", |ctx| {
        ctx.scoped("sample-solve", |ctx| {
            let n = forest.n();
            let vs = g.vertex_set();
            let limit = ctx.profile.ltz_round_budget(n);
            let mut local = if vs.len() <= ctx.profile.small_graph_cutoff(n) {
                let es: Vec<(u32, u32, u32)> =
                    g.edges().filter(|e| !e.is_loop()).map(|e| (e.u, e.v, e.origin)).collect();
                let dedup = perfect_hash_dedup(ctx, n, &es);
                MultiGraph::from_edges(
                    n,
                    dedup
                        .into_iter()
                        .map(|(u, v, o)| crate::graph::Edge { u, v, origin: o })
                        .collect(),
                )
            } else {
                ctx.charge(1, g.live_count() as u64);
                let p = ctx.profile.stage3_sample_prob(n);
                let mut rng = ctx.rng("edge-sample");
                let kept: Vec<crate::graph::Edge> = g
                    .edges()
                    .filter(|e| !e.is_loop())
                    .filter(|_| rng.gen_bool(p))
                    .collect();
                MultiGraph::from_edges(n, kept)
            };
            let done = ltz_rounds(ctx, &mut local, forest, limit)?;
            // three jumps put every vertex within reach of its merged root
            let all: Vec<V> = (0..n as V).collect();
            for _ in 0..3 {
                shortcut(ctx, forest, &all);
            }
            Ok(done)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle;
    use crate::pram::{InstanceBudget, Policy};
    use crate::profile::Profile;

    fn ctx(seed: u64) -> Ctx {
        Ctx::new(Profile::desk(), Policy::Random, seed)
    }

    #[test]
    fn ltz_finishes_a_path_and_matches_the_oracle() {
        let mut g = gen::path(48);
        let labels = oracle::components_dual(&g);
        let mut f = ParentForest::new(48);
        let mut c = ctx(4);
        let limit = c.profile.ltz_round_budget(48);
        let done = ltz_rounds(&mut c, &mut g, &mut f, limit).unwrap();
        assert!(done);
        assert!(oracle::same_partition(&oracle::forest_labels(&f), &labels));
    }

    #[test]
    fn ltz_round_count_grows_slowly_on_paths() {
        // sweeps-to-convergence should grow about linearly in log n
        let mut used = Vec::new();
        for k in [5usize, 7, 9] {
            let n = 1 << k;
            let mut g = gen::path(n);
            let mut f = ParentForest::new(n);
            let mut c = ctx(13);
            let mut sweeps = 0;
            let limit = c.profile.ltz_round_budget(n);
            for r in 0..=limit {
                if g.is_all_loops() {
                    break;
                }
                sweeps = r + 1;
                c.scoped(&format!("r{r}"), |c| expand_maxlink(c, &mut g, &mut f, true, false))
                    .unwrap();
                let vs = g.vertex_set();
                shortcut(&mut c, &mut f, &vs);
                alter(&mut c, &mut g, &f, true);
            }
            assert!(g.is_all_loops(), "path 2^{k} did not converge in {limit}");
            used.push(sweeps);
        }
        assert!(used[2] <= used[0] + 14, "sweep growth too fast: {used:?}");
    }

    #[test]
    fn ltz_respects_instance_budgets() {
        let mut outer = ctx(6);
        let err = crate::pram::budgeted_instances(
            &mut outer,
            "tiny",
            1,
            InstanceBudget { rounds: 3, work: 50, pool: None },
            |c, _| {
                let mut g = gen::cycle(64);
                let mut f = ParentForest::new(64);
                ltz_rounds(c, &mut g, &mut f, 100)?;
                Ok(())
            },
            |_| true,
        )
        .unwrap_err();
        assert!(err.diagnostics[0].outcome.contains("budget"));
    }

    #[test]
    fn sample_solve_small_graph_is_exact() {
        let g = gen::component_union(&[10, 8, 6], 4, 3);
        let labels = oracle::components_dual(&g);
        let mut f = ParentForest::new(g.n);
        let mut c = ctx(17);
        let done = sample_solve(&mut c, &g, &mut f).unwrap();
        assert!(done);
        assert!(oracle::same_partition(&oracle::forest_labels(&f), &labels));
    }

    #[test]
    fn sample_solve_large_graph_stays_component_safe() {
        let g = gen::gnp(300, 0.05, 9);
        let labels = oracle::components_dual(&g);
        let mut f = ParentForest::new(g.n);
        let mut c = ctx(23);
        sample_solve(&mut c, &g, &mut f).unwrap();
        assert!(oracle::parent_component_safe(&f, &labels));
        assert!(f.depths().is_some());
    }
}
