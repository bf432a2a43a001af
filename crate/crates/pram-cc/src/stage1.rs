//! Stage 1: randomized contraction. A constant-round matching step hooks
//! roots across edges, filter sweeps repeat it with light random edge
//! deletion, extract peels vertex sets whose trees are then flattened by
//! replaying the per-round update logs backwards, and reduce composes the
//! whole thing to shrink the input to a small remainder graph.
//!
//! Matching receives its edge set by value (it never mutates the edges it is
//! handed, only the forest); filter/extract own local copies and apply the
//! deletion and alter steps themselves.

use rand::Rng;

use crate::graph::{alter, shortcut, Edge, MultiGraph, ParentForest, V};
use crate::pram::{Ctx, FxHashMap, VertexCells};

/// One constant-round matching sweep. Hooks a constant expected fraction of
/// the roots touched by `edges` under their neighbors and shortcuts V(E).
/// Appends every vertex whose parent pointer changed to `updated`.
///
/// Every pre-call root ends as a root or a child of a root.
pub fn matching(
    ctx: &mut Ctx,
    g: &MultiGraph,
    forest: &mut ParentForest,
    updated: &mut Vec<V>,
) {
    ctx.labeled("stage1/matching", |ctx| {
        // step 1: drop loops and edges with a non-root end
        ctx.charge(1, g.live_count() as u64);
        let mut vset: Vec<V> = Vec::new();
        let mut arcs: Vec<(V, V)> = Vec::new(); // oriented large -> small
        for e in g.edges() {
            vset.push(e.u);
            vset.push(e.v);
            if !e.is_loop() && forest.is_root(e.u) && forest.is_root(e.v) {
                // step 2: orient from the larger endpoint to the smaller
                arcs.push((e.u.max(e.v), e.u.min(e.v)));
            }
        }
        ctx.charge(1, arcs.len() as u64);
        let d_before = arcs.clone(); // each arc processor keeps a private copy

        // step 3: every source keeps one arbitrary outgoing arc
        ctx.charge(1, arcs.len() as u64);
        let mut cells = VertexCells::for_ctx(ctx);
        for (i, &(src, _)) in arcs.iter().enumerate() {
            cells.write(src, i as u64, i as u64);
        }
        let mut kept: Vec<(V, V)> = cells
            .into_sorted()
            .into_iter()
            .map(|(_, idx)| arcs[idx as usize])
            .collect();
        kept.sort_unstable(); // deterministic order for later steps

        // step 4: singletons (incident before step 3, isolated after) hook
        // under an arbitrary former in-neighbor
        ctx.charge(1, d_before.len() as u64);
        let mut incident_now: FxHashMap<V, u32> = FxHashMap::default();
        for &(u, v) in &kept {
            *incident_now.entry(u).or_insert(0) += 1;
            *incident_now.entry(v).or_insert(0) += 1;
        }
        let mut cells = VertexCells::for_ctx(ctx);
        for (i, &(u, v)) in d_before.iter().enumerate() {
            if !incident_now.contains_key(&v) {
                cells.write(v, u as u64, i as u64);
            }
        }
        let hooks: Vec<(V, u64)> = cells.into_sorted();
        for (v, u) in hooks {
            let u = u as V;
            forest.parent[v as usize] = u;
            updated.push(v);
        }

        // step 5: roots with in-degree >= 2 drop their outgoing arc
        ctx.charge(1, kept.len() as u64);
        let mut indeg: FxHashMap<V, u32> = FxHashMap::default();
        for &(_, v) in &kept {
            *indeg.entry(v).or_insert(0) += 1;
        }
        let popular = |v: V, indeg: &FxHashMap<V, u32>| indeg.get(&v).copied().unwrap_or(0) >= 2;
        kept.retain(|&(u, _)| !popular(u, &indeg));

        // step 6: sources pointing at a popular root hook under it and leave
        ctx.charge(1, kept.len() as u64);
        let mut removed: crate::pram::FxHashSet<V> = Default::default();
        for &(u, v) in &kept {
            if popular(v, &indeg) {
                forest.parent[u as usize] = v;
                updated.push(u);
                removed.insert(u);
            }
        }
        kept.retain(|&(u, v)| {
            !popular(v, &indeg) && !removed.contains(&u) && !removed.contains(&v)
        });

        // step 7: coin-flip deletion of the survivors
        ctx.charge(1, kept.len() as u64);
        let mut rng = ctx.rng("matching-step7");
        let p = ctx.profile.matching_delete_prob();
        kept.retain(|_| !rng.gen_bool(p));

        // step 8: isolated arcs hook target under source
        ctx.charge(1, kept.len() as u64);
        let mut deg: FxHashMap<V, u32> = FxHashMap::default();
        for &(u, v) in &kept {
            *deg.entry(u).or_insert(0) += 1;
            *deg.entry(v).or_insert(0) += 1;
        }
        for &(u, v) in &kept {
            if deg[&u] == 1 && deg[&v] == 1 {
                forest.parent[v as usize] = u;
                updated.push(v);
            }
        }

        // step 9: shortcut V(E)
        vset.sort_unstable();
        vset.dedup();
        ctx.charge(1, vset.len() as u64);
        let news: Vec<V> = vset
            .iter()
            .map(|&v| forest.parent[forest.parent[v as usize] as usize])
            .collect();
        for (&v, &p) in vset.iter().zip(&news) {
            if forest.parent[v as usize] != p {
                forest.parent[v as usize] = p;
                updated.push(v);
            }
        }
    });
}

/// Collapse parallel edges of a scratch graph (one survivor per unordered
/// pair, loops untouched). Scratch copies only ever feed matching, which
/// cares about adjacency, not multiplicity; without this, contracted
/// multi-edges keep every sweep at full price.
pub(crate) fn dedup_scratch(ctx: &mut Ctx, g: &mut MultiGraph) {
    let vs = g.vertex_set().len();
    if g.live_non_loops() <= 2 * vs {
        return;
    }
    let keep_loops: Vec<Edge> = g.edges().filter(|e| e.is_loop()).collect();
    let es: Vec<(V, V, u32)> =
        g.edges().filter(|e| !e.is_loop()).map(|e| (e.u, e.v, e.origin)).collect();
    let mut ded: Vec<Edge> = crate::pram::perfect_hash_dedup(ctx, g.n, &es)
        .into_iter()
        .map(|(u, v, origin)| Edge { u, v, origin })
        .collect();
    // degree cap: a handful of distinct neighbors per vertex is enough to
    // keep contraction fast, and it makes per-sweep cost shrink with the
    // cluster count instead of staying at full edge price
    if ded.len() > 4 * vs {
        ctx.charge(1, ded.len() as u64);
        let mut quota: crate::pram::FxHashMap<V, u32> = Default::default();
        ded.retain(|e| {
            let qu = quota.entry(e.u).or_insert(0);
            if *qu < 6 {
                *qu += 1;
                *quota.entry(e.v).or_insert(0) += 1;
                return true;
            }
            let qv = quota.entry(e.v).or_insert(0);
            if *qv < 6 {
                *qv += 1;
                *quota.entry(e.u).or_insert(0) += 1;
                true
            } else {
                false
            }
        });
    }
    ded.extend(keep_loops);
    *g = MultiGraph::from_edges(g.n, ded);
}

/// Filter sweep: k+1 rounds of matching + alter + light random deletion on a
/// local copy of the edges, then the per-round update logs are replayed
/// backwards, shortcutting exactly the vertices that moved in each round.
/// Returns V(E) of the surviving local edges. All parent changes (including
/// the replay) are appended to `updated_out`.
pub fn filter(
    ctx: &mut Ctx,
    mut local: MultiGraph,
    forest: &mut ParentForest,
    k: u32,
    updated_out: &mut Vec<V>,
) -> Vec<V> {
    ctx.labeled("stage1/filter", |ctx| {
        let del = ctx.profile.filter_delete_prob();
        let mut logs: Vec<Vec<V>> = Vec::new();
        for j in 0..=k {
            let mut upd = Vec::new();
            ctx.scoped(&format!("filter-round{j}"), |ctx| {
                matching(ctx, &local, forest, &mut upd);
                alter(ctx, &mut local, forest, false);
                ctx.charge(1, local.live_count() as u64);
                let mut rng = ctx.rng("filter-del");
                let dead: Vec<usize> = local
                    .indexed_edges()
                    .filter(|_| rng.gen_bool(del))
                    .map(|(i, _)| i)
                    .collect();
                for i in dead {
                    local.delete(i);
                }
                dedup_scratch(ctx, &mut local);
                local.maybe_compact(ctx);
            });
            logs.push(upd);
        }
        for j in (0..=k as usize).rev() {
            let mut set = logs[j].clone();
            set.sort_unstable();
            set.dedup();
            let before: Vec<V> = set.iter().map(|&v| forest.parent[v as usize]).collect();
            shortcut(ctx, forest, &set);
            for (&v, &b) in set.iter().zip(&before) {
                if forest.parent[v as usize] != b {
                    updated_out.push(v);
                }
            }
            updated_out.extend(logs[j].iter().copied());
        }
        ctx.charge(1, local.live_count() as u64);
        local.vertex_set()
    })
}

/// Pointer reversal: vertices in `vs` pull their parents underneath them
/// (arbitrated), everyone shortcuts, and the edges are re-altered.
pub fn reverse(ctx: &mut Ctx, vs: &[V], g: &mut MultiGraph, forest: &mut ParentForest) {
    ctx.labeled("stage1/reverse", |ctx| {
        // step 1a: non-root v writes itself over its parent's pointer
        ctx.charge(1, vs.len() as u64);
        let mut cells = VertexCells::for_ctx(ctx);
        for &v in vs {
            if !forest.is_root(v) {
                cells.write(forest.parent[v as usize], v as u64, v as u64);
            }
        }
        for (u, v) in cells.into_sorted() {
            forest.parent[u as usize] = v as V;
        }
        // step 1b: the same vertices shortcut
        let movers: Vec<V> = vs.iter().copied().collect();
        shortcut(ctx, forest, &movers);
        // step 2: global shortcut
        let all: Vec<V> = (0..forest.n() as V).collect();
        shortcut(ctx, forest, &all);
        // step 3
        alter(ctx, g, forest, false);
    });
}

/// Extract: repeated filter passes over a local copy, collecting the peeled
/// vertex sets, then the same backwards replay and a final reversal over the
/// caller's edges. Postcondition: the trees under V(E) are flat.
pub fn extract(ctx: &mut Ctx, g: &mut MultiGraph, forest: &mut ParentForest, k: u32) {
    ctx.labeled("stage1/extract", |ctx| {
        ctx.charge(1, g.live_count() as u64);
        let mut local = MultiGraph::from_edges(
            g.n,
            g.edges().filter(|e| !e.is_loop()).collect::<Vec<Edge>>(),
        );
        let mut vprime: Vec<bool> = vec![false; g.n];
        let mut logs: Vec<Vec<V>> = Vec::new();
        for i in 0..=k {
            let mut upd = Vec::new();
            ctx.scoped(&format!("extract-round{i}"), |ctx| {
                ctx.charge(1, local.live_count() as u64); // pass-by-value copy
                let vs = filter(ctx, local.clone(), forest, k, &mut upd);
                for v in vs {
                    vprime[v as usize] = true;
                }
                alter(ctx, &mut local, forest, false);
                ctx.charge(1, local.live_count() as u64);
                local.retain(|e| !(vprime[e.u as usize] && vprime[e.v as usize]));
                local.maybe_compact(ctx);
            });
            logs.push(upd);
        }
        for i in (0..=k as usize).rev() {
            let mut set = logs[i].clone();
            set.sort_unstable();
            set.dedup();
            shortcut(ctx, forest, &set);
        }
        let vp: Vec<V> = (0..g.n as V).filter(|&v| vprime[v as usize]).collect();
        reverse(ctx, &vp, g, forest);
    });
}

/// The stage-1 pipeline: extract, one deep filter, a hook-everything loop on
/// the cross edges, and a final reversal. Leaves the caller's edges altered
/// onto roots of flat trees (the remainder graph G').
pub fn reduce(ctx: &mut Ctx, g: &mut MultiGraph, forest: &mut ParentForest) {
    let n = forest.n();
    let k_inner = ctx.profile.reduce_inner_k(n);
    let k = ctx.profile.reduce_outer_k(n);
    ctx.labeled("stage1/reduce", |ctx| {
        ctx.scoped("reduce", |ctx| {
            // step 1
            extract(ctx, g, forest, k_inner);
            ctx.check_boundary("reduce/extract", forest, &g.vertex_set());
            // step 2
            let mut scratch = Vec::new();
            let vp = ctx.scoped("deep-filter", |ctx| {
                ctx.charge(1, g.live_count() as u64);
                filter(ctx, g.clone(), forest, k, &mut scratch)
            });
            let in_vp = {
                let mut b = vec![false; n];
                for &v in &vp {
                    b[v as usize] = true;
                }
                b
            };
            // step 3
            let all: Vec<V> = (0..n as V).collect();
            shortcut(ctx, forest, &all);
            alter(ctx, g, forest, false);
            // step 4: cross edges with an end outside V'
            ctx.charge(1, g.live_count() as u64);
            let mut cross = MultiGraph::from_edges(
                g.n,
                g.edges()
                    .filter(|e| !in_vp[e.u as usize] || !in_vp[e.v as usize])
                    .collect::<Vec<Edge>>(),
            );
            // step 5
            for i in 0..=k {
                ctx.scoped(&format!("hook-round{i}"), |ctx| {
                    let mut upd = Vec::new();
                    matching(ctx, &cross, forest, &mut upd);
                    shortcut(ctx, forest, &all);
                    alter(ctx, &mut cross, forest, false);
                    dedup_scratch(ctx, &mut cross);
                    cross.maybe_compact(ctx);
                });
            }
            // step 6
            reverse(ctx, &vp, g, forest);
            // settle to the documented postcondition: flat trees, edges on roots
            let passes = crate::graph::flatten(ctx, forest);
            if passes > 0 {
                alter(ctx, g, forest, false);
            }
            g.maybe_compact(ctx);
            let all_flat: Vec<V> = (0..n as V).collect();
            ctx.check_boundary("reduce", forest, &all_flat);
        });
    });
}
