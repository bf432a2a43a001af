//! The full pipeline: reduce the input to a small remainder graph, then run
//! interleaved phases that try to finish a sampled skeleton under a budget
//! while a filtering loop keeps contracting the rest. A sorted auxiliary
//! edge array supports waking up exactly the edges the sparse skeleton
//! builder needs without scanning everything.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{alter, shortcut, Edge, MultiGraph, ParentForest, NO_ORIGIN, V};
use crate::pram::{
    approximate_compaction, budgeted_instances, padded_sort, perfect_hash_dedup, Ctx, FxHashMap,
    FxHashSet, InstanceBudget, InstanceFail,
};
use crate::profile::loglog;
use crate::stage1::{matching, reduce, reverse};
use crate::stage2::{expand_maxlink, increase_core};
use crate::stage3::ltz_rounds;

/// Edge array sorted by first endpoint. Every vertex owns a contiguous
/// segment `[start, start+len)`; long segments are compacted so a segment
/// holds at most `max(threshold, 2·deg)` cells.
pub struct AuxiliaryArray {
    pub cells: Vec<Option<Edge>>,
    pub seg: FxHashMap<V, (usize, usize)>,
}

/// Sort the live edges by first endpoint into the padded layout, mark the
/// per-vertex group boundaries, and compact oversized segments.
pub fn build_auxiliary(ctx: &mut Ctx, g: &MultiGraph) -> AuxiliaryArray {
    ctx.labeled("aux/build", |ctx| {
        ctx.scoped("aux", |ctx| {
            let items: Vec<(u64, Edge)> = g.edges().map(|e| (e.u as u64, e)).collect();
            let padded = padded_sort(ctx, &items);

            // group boundaries: each occupied cell compares its key to its
            // neighbors' keys, two rounds of constant work per cell
            ctx.charge(2, padded.len() as u64);
            let mut bounds: Vec<(V, usize, usize)> = Vec::new();
            for (i, c) in padded.iter().enumerate() {
                if let Some((k, _)) = c {
                    let v = *k as V;
                    match bounds.last_mut() {
                        Some((lv, _, r)) if *lv == v => *r = i + 1,
                        _ => bounds.push((v, i, i + 1)),
                    }
                }
            }

            let threshold = ctx.profile.aux_compaction_threshold(g.n.max(2));
            let mut cells: Vec<Option<Edge>> = Vec::new();
            let mut seg: FxHashMap<V, (usize, usize)> = FxHashMap::default();
            for (v, l, r) in bounds {
                let slice: Vec<Option<Edge>> =
                    padded[l..r].iter().map(|c| c.as_ref().map(|(_, e)| *e)).collect();
                let out = if slice.len() >= threshold {
                    approximate_compaction(ctx, g.n.max(2), &slice)
                } else {
                    slice
                };
                let start = cells.len();
                seg.insert(v, (start, out.len()));
                cells.extend(out);
            }
            AuxiliaryArray { cells, seg }
        })
    })
}

/// Wake up the edges of every segment whose owner passes `pred`, by
/// doubling: the cell at offset k awakens offsets 2k and 2k+1, up to the
/// depth budget for parameter `b`. Charged the wake depth in rounds and the
/// scanned cells plus twice the extracted edges in work.
pub fn low_edge_extract(
    ctx: &mut Ctx,
    aux: &AuxiliaryArray,
    b: f64,
    pred: impl Fn(V) -> bool,
) -> Vec<Edge> {
    let depth = ctx.profile.wake_depth(b);
    let reach = 1u64.checked_shl(depth).unwrap_or(u64::MAX);
    let mut scanned = 0u64;
    let mut out = Vec::new();
    let mut owners: Vec<V> = aux.seg.keys().copied().collect();
    owners.sort_unstable();
    for v in owners {
        if !pred(v) {
            continue;
        }
        let (start, len) = aux.seg[&v];
        let awake = (len as u64).min(reach) as usize;
        scanned += awake as u64;
        for c in &aux.cells[start..start + awake] {
            if let Some(e) = c {
                out.push(*e);
            }
        }
    }
    ctx.charge(depth as u64, scanned + 2 * out.len() as u64);
    out
}

/// Sparse skeleton construction: hash the sampled hook edges into per-root
/// tables to spot the high-occupancy roots, wake the auxiliary segments
/// whose parents are low and active, and return those edges (altered)
/// together with the hook sample.
pub fn sparse_build(
    ctx: &mut Ctx,
    h2: &MultiGraph,
    aux: &AuxiliaryArray,
    forest: &mut ParentForest,
    b: f64,
) -> MultiGraph {
    ctx.labeled("stage2/build", |ctx| {
        ctx.scoped("sparse-build", |ctx| {
            let n = forest.n();
            let cap = ctx.profile.table_size(b);
            ctx.charge(1, h2.live_count() as u64);
            let mut slots: FxHashMap<V, FxHashSet<u64>> = FxHashMap::default();
            let mut rng = ctx.rng("table");
            for e in h2.edges() {
                if !e.is_loop() {
                    slots.entry(e.v).or_default().insert(rng.gen_range(0..cap));
                }
            }
            let thresh = ctx.profile.high_threshold(b);
            ctx.charge(1, forest.active.iter().filter(|a| **a).count() as u64);
            for v in 0..n {
                forest.high[v] = forest.active[v]
                    && slots.get(&(v as V)).map(|s| s.len() as u64 > thresh).unwrap_or(false);
            }

            let picked = low_edge_extract(ctx, aux, b, |u| {
                let p = forest.parent[u as usize] as usize;
                forest.active[p] && !forest.high[p]
            });
            let mut ep = MultiGraph::from_edges(n, picked);
            alter(ctx, &mut ep, forest, false);
            for e in h2.edges() {
                ep.push(e);
            }
            ep
        })
    })
}

/// The sparse increase variant: weld the sparse skeleton onto the forest
/// and alter the candidate edge set (loops kept) onto the merged roots.
pub fn increase_sparse(
    ctx: &mut Ctx,
    h1: &mut MultiGraph,
    h2: &MultiGraph,
    aux: &AuxiliaryArray,
    forest: &mut ParentForest,
    b: f64,
) -> Result<(), InstanceFail> {
    let mut h = sparse_build(ctx, h2, aux, forest, b);
    increase_core(ctx, &mut h, forest, b)?;
    ctx.labeled("stage2/increase", |ctx| alter(ctx, h1, forest, true));
    Ok(())
}

/// Finishing check after a candidate skeleton converged: the edges the
/// skeleton sample missed (by origin id) are deduplicated and solved under
/// a budget. Returns the number of distinct missed edges.
pub fn remain(
    ctx: &mut Ctx,
    gp: &MultiGraph,
    origins: &FxHashSet<u32>,
    forest: &mut ParentForest,
) -> usize {
    ctx.labeled("remain", |ctx| {
        ctx.scoped("remain", |ctx| {
            let n = forest.n();
            let mut copy = gp.clone();
            alter(ctx, &mut copy, forest, false);
            ctx.charge(1, copy.live_count() as u64);
            copy.retain(|e| !origins.contains(&e.origin));
            let es: Vec<(u32, u32, u32)> =
                copy.edges().filter(|e| !e.is_loop()).map(|e| (e.u, e.v, e.origin)).collect();
            let dedup = perfect_hash_dedup(ctx, n, &es);
            let count = dedup.len();
            let rest = MultiGraph::from_edges(
                n,
                dedup.into_iter().map(|(u, v, o)| Edge { u, v, origin: o }).collect(),
            );
            let limit = ctx.profile.ltz_round_budget(n);
            let budget = phase_budget(ctx, n, rest.live_count() as u64, 16.0);
            let copies = ctx.profile.boost_copies(n);
            let won = budgeted_instances(
                ctx,
                "remain-ltz",
                copies,
                budget,
                |c, _| {
                    let mut f = forest.clone();
                    let mut g = rest.clone();
                    ltz_rounds(c, &mut g, &mut f, limit)?;
                    Ok(f)
                },
                |f| f.depths().is_some(),
            );
            if let Ok(f) = won {
                *forest = f;
            }
            // a failed budget here is not fatal: the final fallback sweep
            // picks up whatever is left
            count
        })
    })
}

fn phase_budget(ctx: &Ctx, n: usize, m: u64, b: f64) -> InstanceBudget {
    let sweeps = ctx.profile.densify_rounds(b) as u64
        + ctx.profile.interweave_ltz_rounds(n) as u64
        + 16;
    let rounds = sweeps * 40;
    InstanceBudget {
        rounds,
        work: rounds.saturating_mul(4 * (n as u64 + m + 16)),
        // block budgets saturate at their cap, so the pool only exists to
        // bound runaway instances, not typical ones
        pool: Some(u64::MAX / 2),
    }
}

fn mark_active(ctx: &mut Ctx, forest: &mut ParentForest, g: &MultiGraph, reset: bool) {
    let vs = g.vertex_set();
    ctx.charge(1, vs.len() as u64);
    if reset {
        forest.active.iter_mut().for_each(|a| *a = false);
    }
    for v in vs {
        let r = forest.root_of(v);
        forest.active[r as usize] = true;
    }
}

/// Settle `verts` onto flat trees by repeated shortcutting.
fn settle_flat(ctx: &mut Ctx, forest: &mut ParentForest, verts: &[V]) {
    let mut guard = 0;
    while !forest.is_flat(verts.iter().copied()) {
        shortcut(ctx, forest, verts);
        guard += 1;
        assert!(guard <= 2 * crate::profile::clog2(forest.n().max(2)) + 4);
    }
}

pub struct PhaseOutcome {
    pub done: bool,
    pub remain_edges: Option<usize>,
}

/// One interleaved phase. First, boosted budgeted instances try to finish
/// the sampled skeleton outright (sparse increase, densifying sweeps, a
/// truncated finishing run); a converged instance is adopted and the phase
/// reports done after the remain check. Otherwise the instances are
/// discarded and the filtering half contracts the filter edges, wakes the
/// edges of freshly inactive regions, and contracts those too.
#[allow(clippy::too_many_arguments)]
pub fn interweave(
    ctx: &mut Ctx,
    gp: &MultiGraph,
    h1: &mut MultiGraph,
    h1_origins: &FxHashSet<u32>,
    h2: &mut MultiGraph,
    aux: &AuxiliaryArray,
    forest: &mut ParentForest,
    e_filter: &mut MultiGraph,
    i: u32,
) -> PhaseOutcome {
    let n = forest.n();
    let b = ctx.profile.phase_b(n, i);
    let copies = ctx.profile.boost_copies(n);
    let budget = phase_budget(ctx, n, gp.live_count() as u64, b);

    let attempt = budgeted_instances(
        ctx,
        "boost",
        copies,
        budget,
        |c, _| {
            let mut f = forest.clone();
            let mut hh1 = h1.clone();
            increase_sparse(c, &mut hh1, h2, aux, &mut f, b)?;
            for s in 0..c.profile.densify_rounds(b) {
                c.guard()?;
                c.scoped(&format!("grow{s}"), |c| {
                    expand_maxlink(c, &mut hh1, &mut f, true, false)
                })?;
            }
            let limit = c.profile.interweave_ltz_rounds(n);
            let all_loops = ltz_rounds(c, &mut hh1, &mut f, limit)?;
            alter(c, &mut hh1, &f, true);
            Ok((f, hh1, all_loops))
        },
        |(f, hh1, _)| f.depths().is_some() && f.is_flat(hh1.vertex_set()),
    );
    if let Ok((f, hh1, all_loops)) = attempt {
        if all_loops {
            *forest = f;
            *h1 = hh1;
            let cnt = remain(ctx, gp, h1_origins, forest);
            return PhaseOutcome { done: true, remain_edges: Some(cnt) };
        }
        // converged structurally but not to all-loops: discard and filter
    }

    // filtering half: contract the filter edges with light random deletion
    let rounds = ctx.profile.interweave_rounds(n, i);
    let del = ctx.profile.filter_delete_prob();
    let mut updated = Vec::new();
    for r in 0..rounds {
        ctx.scoped(&format!("filt{r}"), |ctx| {
            matching(ctx, e_filter, forest, &mut updated);
            alter(ctx, e_filter, forest, false);
            crate::stage1::dedup_scratch(ctx, e_filter);
            ctx.charge(1, e_filter.live_count() as u64);
            let mut rng = ctx.rng("del");
            for j in 0..e_filter.slot_count() {
                if e_filter.get(j).is_some() && rng.gen_bool(del) {
                    e_filter.delete(j);
                }
            }
        });
    }
    e_filter.maybe_compact(ctx);
    mark_active(ctx, forest, e_filter, true);

    let vgp = gp.vertex_set();
    for _ in 0..(i + 2) * loglog(n.max(2)) {
        shortcut(ctx, forest, &vgp);
    }

    // regions that dropped out of the filter graph get their edges woken up
    // and contracted on the spot
    let vg: FxHashSet<V> = vgp.iter().copied().collect();
    let vf: FxHashSet<V> = e_filter.vertex_set().into_iter().collect();
    let picked = low_edge_extract(ctx, aux, b, |u| {
        let p = forest.parent[u as usize];
        vg.contains(&p) && !vf.contains(&p)
    });
    let mut ep = MultiGraph::from_edges(n, picked);
    alter(ctx, &mut ep, forest, false);
    for r in 0..rounds {
        ctx.scoped(&format!("wake{r}"), |ctx| {
            matching(ctx, &ep, forest, &mut updated);
            shortcut(ctx, forest, &vgp);
            alter(ctx, &mut ep, forest, false);
            crate::stage1::dedup_scratch(ctx, &mut ep);
        });
    }
    mark_active(ctx, forest, &ep, false);

    let vfilter = e_filter.vertex_set();
    reverse(ctx, &vfilter, h2, forest);
    settle_flat(ctx, forest, &vfilter);
    ctx.check_boundary("interweave", forest, &vfilter);
    PhaseOutcome { done: false, remain_edges: None }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompletionReport {
    pub phases_run: u32,
    pub final_b: f64,
    pub components: usize,
    pub rounds: u64,
    pub work: u64,
    /// Distinct missed-edge counts reported by each remain check.
    pub remain_edges: Vec<usize>,
    /// |V(G')| after the reduce stage, for remain-bound checks.
    pub gprime_verts: usize,
    /// Probability used to draw the skeleton samples.
    pub skeleton_p: f64,
}

fn sample_with_origins(ctx: &mut Ctx, tag: &str, g: &MultiGraph, p: f64) -> MultiGraph {
    ctx.scoped(tag, |ctx| {
        ctx.charge(1, g.live_count() as u64);
        let mut rng = ctx.rng("sample");
        let kept: Vec<Edge> =
            g.edges().filter(|e| !e.is_loop()).filter(|_| rng.gen_bool(p)).collect();
        MultiGraph::from_edges(g.n, kept)
    })
}

/// Connected components of `g`. Reduces to a remainder graph, runs the
/// interleaved phases until a skeleton attempt converges, then settles
/// whatever survived with a deterministic fallback sweep. Returns the final
/// forest (every parent pointer names its component root) and a report.
pub fn connectivity(ctx: &mut Ctx, g: &mut MultiGraph) -> (ParentForest, CompletionReport) {
    let n = g.n.max(1);
    let mut forest = ParentForest::new(g.n);
    let mut report = CompletionReport {
        phases_run: 0,
        final_b: 0.0,
        components: 0,
        rounds: 0,
        work: 0,
        remain_edges: Vec::new(),
        gprime_verts: 0,
        skeleton_p: 0.0,
    };

    if g.live_non_loops() > 0 {
        reduce(ctx, g, &mut forest);
        let aux = build_auxiliary(ctx, g);
        mark_active(ctx, &mut forest, g, true);

        let p = ctx.profile.stage3_sample_prob(n);
        report.gprime_verts = g.vertex_set().len();
        report.skeleton_p = p;
        // the skeleton sample draws under its own path prefix so its
        // randomness can be isolated from the rest of the pipeline
        let mut h1 = sample_with_origins(ctx, "h1", g, p);
        let h1_origins: FxHashSet<u32> =
            h1.edges().map(|e| e.origin).filter(|&o| o != NO_ORIGIN).collect();
        let mut h2 = sample_with_origins(ctx, "h2", g, p);
        let mut e_filter = MultiGraph::from_edges(
            g.n,
            g.edges().filter(|e| !e.is_loop()).collect::<Vec<Edge>>(),
        );

        for i in 0..ctx.profile.phase_count(n) {
            report.phases_run = i + 1;
            report.final_b = ctx.profile.phase_b(n, i);
            let out = ctx.phased(&format!("phase/{i}"), |ctx| {
                ctx.scoped(&format!("phase{i}"), |ctx| {
                    interweave(
                        ctx,
                        g,
                        &mut h1,
                        &h1_origins,
                        &mut h2,
                        &aux,
                        &mut forest,
                        &mut e_filter,
                        i,
                    )
                })
            });
            if let Some(cnt) = out.remain_edges {
                report.remain_edges.push(cnt);
            }
            if out.done {
                break;
            }
        }

        // deterministic backstop: whatever the phases left unmerged is
        // contracted by plain matching sweeps
        let mut rest = MultiGraph::from_edges(
            g.n,
            g.edges().filter(|e| !e.is_loop()).collect::<Vec<Edge>>(),
        );
        alter(ctx, &mut rest, &forest, false);
        if rest.live_count() > 0 {
            ctx.phased("phase/final/fallback", |ctx| {
                ctx.scoped("fallback", |ctx| {
                    let cap = 8 * crate::profile::clog2(n) + 64;
                    let mut upd = Vec::new();
                    for s in 0..cap {
                        if rest.live_count() == 0 {
                            break;
                        }
                        ctx.scoped(&format!("sweep{s}"), |ctx| {
                            matching(ctx, &rest, &mut forest, &mut upd);
                            alter(ctx, &mut rest, &forest, false);
                            rest.maybe_compact(ctx);
                        });
                    }
                    assert!(rest.live_count() == 0, "fallback did not converge");
                });
            });
        }
    }

    crate::graph::flatten(ctx, &mut forest);
    let all: Vec<V> = (0..forest.n() as V).collect();
    ctx.check_boundary("connectivity", &forest, &all);
    report.components = crate::oracle::component_count(&crate::oracle::forest_labels(&forest));
    report.rounds = ctx.ledger.rounds;
    report.work = ctx.ledger.work;
    (forest, report)
}
