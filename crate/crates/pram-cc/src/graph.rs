//! Labeled multigraphs with tombstoned edge slots, and the parent forest the
//! pipeline contracts into. Edges carry the id of the input edge they were
//! altered from; synthetic edges (hash-table entries) carry `NO_ORIGIN`.

use crate::pram::Ctx;
use crate::profile::logstar;

pub type V = u32;

/// Origin id for edges the pipeline invents (never present in the input).
pub const NO_ORIGIN: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: V,
    pub v: V,
    pub origin: u32,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Edge array with tombstones. Deletions leave holes; a charged compaction
/// squeezes the array once the load factor drops below 1/2.
#[derive(Clone, Debug, Default)]
pub struct MultiGraph {
    pub n: usize,
    slots: Vec<Option<Edge>>,
    live: usize,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph { n, slots: Vec::new(), live: 0 }
    }

    /// Build from endpoint pairs; origin ids are the input positions.
    pub fn from_pairs(n: usize, pairs: &[(V, V)]) -> Self {
        let slots = pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| {
                assert!((u as usize) < n && (v as usize) < n, "endpoint out of range");
                Some(Edge { u, v, origin: i as u32 })
            })
            .collect::<Vec<_>>();
        MultiGraph { n, live: slots.len(), slots }
    }

    pub fn from_edges(n: usize, edges: Vec<Edge>) -> Self {
        let live = edges.len();
        MultiGraph { n, slots: edges.into_iter().map(Some).collect(), live }
    }

    pub fn push(&mut self, e: Edge) {
        self.slots.push(Some(e));
        self.live += 1;
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn get(&self, i: usize) -> Option<Edge> {
        self.slots.get(i).copied().flatten()
    }

    pub fn delete(&mut self, i: usize) {
        if self.slots[i].take().is_some() {
            self.live -= 1;
        }
    }

    pub fn set(&mut self, i: usize, e: Edge) {
        assert!(self.slots[i].is_some());
        self.slots[i] = Some(e);
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.slots.iter().filter_map(|s| *s)
    }

    pub fn indexed_edges(&self) -> impl Iterator<Item = (usize, Edge)> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, s)| s.map(|e| (i, e)))
    }

    pub fn is_all_loops(&self) -> bool {
        self.edges().all(|e| e.is_loop())
    }

    pub fn live_non_loops(&self) -> usize {
        self.edges().filter(|e| !e.is_loop()).count()
    }

    /// Sorted distinct endpoints of live edges: V(E).
    pub fn vertex_set(&self) -> Vec<V> {
        let mut vs: Vec<V> = self.edges().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Squeeze tombstones out when under half full, charged as an
    /// approximate compaction over the slot array.
    pub fn maybe_compact(&mut self, ctx: &mut Ctx) {
        if self.slots.len() >= 8 && self.live * 2 < self.slots.len() {
            ctx.charge(logstar(self.n.max(2)) as u64, self.slots.len() as u64);
            self.slots.retain(|s| s.is_some());
        }
    }

    /// Drop all but the first loop per vertex (loops carry no connectivity
    /// information beyond presence). Charged one round, |E| work.
    pub fn dedup_loops(&mut self, ctx: &mut Ctx) {
        ctx.charge(1, self.live as u64);
        let mut seen = vec![false; self.n];
        for s in self.slots.iter_mut() {
            if let Some(e) = *s {
                if e.is_loop() {
                    if seen[e.u as usize] {
                        *s = None;
                        self.live -= 1;
                    } else {
                        seen[e.u as usize] = true;
                    }
                }
            }
        }
    }

    pub fn retain(&mut self, mut f: impl FnMut(Edge) -> bool) {
        for s in self.slots.iter_mut() {
            if let Some(e) = *s {
                if !f(e) {
                    *s = None;
                    self.live -= 1;
                }
            }
        }
    }
}

/// Parent forest over [0, n) with levels, budget-bearing blocks, and the flag
/// set the densification stage uses. Level starts at 1 and never decreases
/// within a linear execution segment.
#[derive(Clone, Debug)]
pub struct ParentForest {
    pub parent: Vec<V>,
    pub level: Vec<u32>,
    pub dormant: Vec<bool>,
    pub high: Vec<bool>,
    pub head: Vec<bool>,
    pub leader: Vec<bool>,
    pub active: Vec<bool>,
    /// Per-epoch parent snapshots recorded by densify's alters. Each map
    /// covers every vertex whose pointer can still move in later epochs, so
    /// a miss means "parent unchanged since this epoch".
    pub snapshots: Vec<crate::pram::FxHashMap<V, V>>,
}

impl ParentForest {
    pub fn new(n: usize) -> Self {
        ParentForest {
            parent: (0..n as V).collect(),
            level: vec![1; n],
            dormant: vec![false; n],
            high: vec![false; n],
            head: vec![false; n],
            leader: vec![false; n],
            active: vec![false; n],
            snapshots: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn is_root(&self, v: V) -> bool {
        self.parent[v as usize] == v
    }

    /// Root of v's tree; panics if the chain does not terminate (cycle).
    pub fn root_of(&self, v: V) -> V {
        let mut x = v;
        for _ in 0..=self.parent.len() {
            let p = self.parent[x as usize];
            if p == x {
                return x;
            }
            x = p;
        }
        panic!("parent chain cycled at {v}");
    }

    pub fn roots(&self) -> impl Iterator<Item = V> + '_ {
        (0..self.parent.len() as V).filter(move |&v| self.is_root(v))
    }

    /// Depth of every vertex, or None if the parent structure has a cycle.
    pub fn depths(&self) -> Option<Vec<u32>> {
        let n = self.parent.len();
        let mut depth: Vec<i64> = vec![-1; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if depth[s] >= 0 {
                continue;
            }
            let mut x = s;
            loop {
                if depth[x] >= 0 {
                    break;
                }
                let p = self.parent[x] as usize;
                if p == x {
                    depth[x] = 0;
                    break;
                }
                if stack.contains(&x) {
                    return None; // cycle
                }
                stack.push(x);
                x = p;
            }
            while let Some(y) = stack.pop() {
                depth[y] = depth[self.parent[y] as usize] + 1;
            }
        }
        Some(depth.into_iter().map(|d| d as u32).collect())
    }

    /// Height of each root's tree (roots only present as keys).
    pub fn heights(&self) -> Option<std::collections::HashMap<V, u32>> {
        let depths = self.depths()?;
        let mut h: std::collections::HashMap<V, u32> = std::collections::HashMap::new();
        for v in 0..self.parent.len() {
            let r = self.root_of(v as V);
            let e = h.entry(r).or_insert(0);
            *e = (*e).max(depths[v]);
        }
        Some(h)
    }

    /// Record the current parents of `verts` as the next epoch snapshot.
    pub fn snapshot_now(&mut self, verts: &[V]) {
        let m = verts.iter().map(|&v| (v, self.parent[v as usize])).collect();
        self.snapshots.push(m);
    }

    /// Flat = every listed vertex is a root or a child of a root.
    pub fn is_flat(&self, verts: impl IntoIterator<Item = V>) -> bool {
        verts.into_iter().all(|v| {
            let p = self.parent[v as usize];
            self.parent[p as usize] == p
        })
    }
}

/// Replace every live edge (u, v) by (u.p, v.p); drop loops unless kept.
/// Charges one round and one unit of work per live edge.
pub fn alter(ctx: &mut Ctx, g: &mut MultiGraph, forest: &ParentForest, keep_loops: bool) {
    ctx.charge(1, g.live_count() as u64);
    let mut dead = Vec::new();
    for i in 0..g.slot_count() {
        if let Some(e) = g.get(i) {
            let u = forest.parent[e.u as usize];
            let v = forest.parent[e.v as usize];
            if u == v && !keep_loops {
                dead.push(i);
            } else {
                g.set(i, Edge { u, v, origin: e.origin });
            }
        }
    }
    for i in dead {
        g.delete(i);
    }
}

/// One pointer-jumping step v.p = v.p.p over `verts`, with snapshot reads
/// (all reads happen before any write). Charges one round, |verts| work.
pub fn shortcut(ctx: &mut Ctx, forest: &mut ParentForest, verts: &[V]) {
    ctx.charge(1, verts.len() as u64);
    let news: Vec<V> = verts
        .iter()
        .map(|&v| forest.parent[forest.parent[v as usize] as usize])
        .collect();
    for (&v, &p) in verts.iter().zip(&news) {
        forest.parent[v as usize] = p;
    }
}

/// Shortcut every vertex until the whole forest is flat; charged per pass.
pub fn flatten(ctx: &mut Ctx, forest: &mut ParentForest) -> u32 {
    let all: Vec<V> = (0..forest.n() as V).collect();
    let mut passes = 0;
    while !forest.is_flat(all.iter().copied()) {
        shortcut(ctx, forest, &all);
        passes += 1;
        assert!(passes <= 2 * crate::profile::clog2(forest.n().max(2)) + 4);
    }
    passes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pram::Policy;
    use crate::profile::Profile;

    fn ctx() -> Ctx {
        Ctx::new(Profile::desk(), Policy::Random, 1)
    }

    #[test]
    fn alter_on_identity_forest_is_identity() {
        let mut c = ctx();
        let mut g = MultiGraph::from_pairs(4, &[(0, 1), (2, 3), (1, 1)]);
        let f = ParentForest::new(4);
        alter(&mut c, &mut g, &f, false);
        // the pre-existing loop is dropped, other edges unchanged
        let es: Vec<(V, V)> = g.edges().map(|e| (e.u, e.v)).collect();
        assert_eq!(es, vec![(0, 1), (2, 3)]);
        assert_eq!(c.ledger.rounds, 1);
        assert_eq!(c.ledger.work, 3);
    }

    #[test]
    fn alter_moves_edges_to_parents_and_keeps_origins() {
        let mut c = ctx();
        let mut g = MultiGraph::from_pairs(4, &[(0, 1), (1, 2)]);
        let mut f = ParentForest::new(4);
        f.parent[1] = 0;
        alter(&mut c, &mut g, &f, false);
        let es: Vec<Edge> = g.edges().collect();
        // (0,1) became a loop at 0 and was dropped; (1,2) moved to (0,2)
        assert_eq!(es, vec![Edge { u: 0, v: 2, origin: 1 }]);
    }

    #[test]
    fn alter_keep_loops_variant() {
        let mut c = ctx();
        let mut g = MultiGraph::from_pairs(3, &[(0, 1)]);
        let mut f = ParentForest::new(3);
        f.parent[1] = 0;
        alter(&mut c, &mut g, &f, true);
        assert_eq!(g.live_count(), 1);
        assert!(g.is_all_loops());
        let mut g2 = MultiGraph::from_pairs(3, &[(0, 1)]);
        alter(&mut c, &mut g2, &f, false);
        assert_eq!(g2.live_count(), 0);
    }

    #[test]
    fn shortcut_halves_depth() {
        // path 0 <- 1 <- 2 <- ... <- 9
        let mut f = ParentForest::new(10);
        for v in 1..10 {
            f.parent[v] = (v - 1) as V;
        }
        let mut c = ctx();
        let all: Vec<V> = (0..10).collect();
        let d0 = *f.depths().unwrap().iter().max().unwrap();
        shortcut(&mut c, &mut f, &all);
        let d1 = *f.depths().unwrap().iter().max().unwrap();
        assert_eq!(d0, 9);
        assert_eq!(d1, 5); // ceil(9/2)
        let passes = flatten(&mut c, &mut f);
        assert!(passes <= 4);
        assert!(f.is_flat(0..10));
    }

    #[test]
    fn depths_detect_cycles() {
        let mut f = ParentForest::new(3);
        f.parent[0] = 1;
        f.parent[1] = 0;
        assert!(f.depths().is_none());
    }

    #[test]
    fn compaction_squeezes_tombstones_and_charges() {
        let mut c = ctx();
        let pairs: Vec<(V, V)> = (0..16).map(|i| (i as V, ((i + 1) % 16) as V)).collect();
        let mut g = MultiGraph::from_pairs(16, &pairs);
        for i in 0..12 {
            g.delete(i);
        }
        g.maybe_compact(&mut c);
        assert_eq!(g.slot_count(), 4);
        assert_eq!(g.live_count(), 4);
        assert!(c.ledger.work >= 16);
    }
}
