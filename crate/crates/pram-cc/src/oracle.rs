//! Independent reference answers: two connectivity oracles that cross-check
//! each other (union-find and BFS), partition comparison, forest invariant
//! checks, and exact/bounded diameter measurement. Nothing here touches the
//! ledger; oracles are free.

use std::collections::HashMap;

use crate::graph::{MultiGraph, ParentForest, V};

pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = x;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// Canonical component labels: each vertex mapped to the smallest vertex id
/// in its component.
pub fn components_union_find(n: usize, edges: impl Iterator<Item = (V, V)>) -> Vec<V> {
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    canonicalize((0..n).map(|v| uf.find(v as u32)).collect())
}

/// Same answer computed independently by BFS over adjacency lists.
pub fn components_bfs(n: usize, edges: &[(V, V)]) -> Vec<V> {
    let mut adj: Vec<Vec<V>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut label: Vec<V> = vec![V::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n as V {
        if label[s as usize] != V::MAX {
            continue;
        }
        label[s as usize] = s;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u as usize] {
                if label[w as usize] == V::MAX {
                    label[w as usize] = s;
                    queue.push_back(w);
                }
            }
        }
    }
    label
}

fn canonicalize(raw: Vec<V>) -> Vec<V> {
    let n = raw.len();
    let mut min_of: HashMap<V, V> = HashMap::new();
    for v in 0..n {
        let e = min_of.entry(raw[v]).or_insert(v as V);
        *e = (*e).min(v as V);
    }
    raw.into_iter().map(|r| min_of[&r]).collect()
}

/// Both oracles, cross-checked; panics if they ever disagree.
pub fn components_dual(g: &MultiGraph) -> Vec<V> {
    let pairs: Vec<(V, V)> = g.edges().map(|e| (e.u, e.v)).collect();
    let a = components_union_find(g.n, pairs.iter().copied());
    let b = components_bfs(g.n, &pairs);
    assert_eq!(a, b, "connectivity oracles disagree");
    a
}

pub fn component_count(labels: &[V]) -> usize {
    let mut ls: Vec<V> = labels.to_vec();
    ls.sort_unstable();
    ls.dedup();
    ls.len()
}

/// Do two labelings induce the same partition of [0, n)?
pub fn same_partition(a: &[V], b: &[V]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd: HashMap<V, V> = HashMap::new();
    let mut back: HashMap<V, V> = HashMap::new();
    for (&x, &y) in a.iter().zip(b.iter()) {
        if *fwd.entry(x).or_insert(y) != y || *back.entry(y).or_insert(x) != x {
            return false;
        }
    }
    true
}

/// Forest labels (root of each vertex), for comparing a contracted forest
/// against component oracles.
pub fn forest_labels(forest: &ParentForest) -> Vec<V> {
    canonicalize((0..forest.n() as V).map(|v| forest.root_of(v)).collect())
}

/// Invariant: every parent pointer stays within the input component of its
/// vertex. `input_labels` come from the untouched input graph.
pub fn parent_component_safe(forest: &ParentForest, input_labels: &[V]) -> bool {
    (0..forest.n()).all(|v| input_labels[forest.parent[v] as usize] == input_labels[v])
}

/// BFS distances from a source over an adjacency list.
pub fn bfs_dist(adj: &[Vec<V>], s: V) -> Vec<i64> {
    let mut dist = vec![-1i64; adj.len()];
    dist[s as usize] = 0;
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u as usize] {
            if dist[w as usize] < 0 {
                dist[w as usize] = dist[u as usize] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

pub fn adjacency(n: usize, edges: impl Iterator<Item = (V, V)>) -> Vec<Vec<V>> {
    let mut adj: Vec<Vec<V>> = vec![Vec::new(); n];
    for (u, v) in edges {
        if u != v {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    adj
}

/// Double-sweep eccentricity: a lower bound on the diameter of the component
/// containing `seed`, and exact on trees/paths.
pub fn double_sweep_diameter(adj: &[Vec<V>], seed: V) -> u32 {
    let d1 = bfs_dist(adj, seed);
    let a = argmax_reachable(&d1);
    let d2 = bfs_dist(adj, a);
    let b = argmax_reachable(&d2);
    let d3 = bfs_dist(adj, b);
    let m2 = d2.iter().copied().max().unwrap_or(0);
    let m3 = d3.iter().copied().max().unwrap_or(0);
    m2.max(m3).max(0) as u32
}

fn argmax_reachable(dist: &[i64]) -> V {
    let mut best = 0usize;
    for (i, &d) in dist.iter().enumerate() {
        if d > dist[best] {
            best = i;
        }
    }
    best as V
}

/// Largest double-sweep diameter over all components with >= `min_size`
/// vertices.
pub fn max_component_diameter(n: usize, edges: &[(V, V)], min_size: usize) -> u32 {
    let adj = adjacency(n, edges.iter().copied());
    let labels = components_bfs(n, edges);
    let mut size: HashMap<V, usize> = HashMap::new();
    for &l in &labels {
        *size.entry(l).or_insert(0) += 1;
    }
    let mut best = 0;
    for (&l, &s) in &size {
        if s >= min_size {
            best = best.max(double_sweep_diameter(&adj, l));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_agree_on_mixed_graph() {
        // two components {0,1,2}, {3,4}; 5 isolated; parallel + loop edges
        let g = MultiGraph::from_pairs(6, &[(0, 1), (1, 2), (0, 1), (2, 2), (3, 4)]);
        let labels = components_dual(&g);
        assert_eq!(labels, vec![0, 0, 0, 3, 3, 5]);
        assert_eq!(component_count(&labels), 3);
    }

    #[test]
    fn partition_comparison_ignores_label_names() {
        assert!(same_partition(&[0, 0, 2, 2], &[7, 7, 1, 1]));
        assert!(!same_partition(&[0, 0, 2, 2], &[7, 7, 7, 1]));
        assert!(!same_partition(&[0, 1], &[5, 5]));
    }

    #[test]
    fn path_diameter_exact() {
        // path on 10 vertices: diameter 9
        let edges: Vec<(V, V)> = (0..9).map(|i| (i, i + 1)).collect();
        let adj = adjacency(10, edges.iter().copied());
        assert_eq!(double_sweep_diameter(&adj, 4), 9);
        assert_eq!(max_component_diameter(10, &edges, 2), 9);
    }

    #[test]
    fn parent_safety_detects_cross_component_links() {
        let g = MultiGraph::from_pairs(4, &[(0, 1), (2, 3)]);
        let labels = components_dual(&g);
        let mut f = ParentForest::new(4);
        f.parent[1] = 0;
        assert!(parent_component_safe(&f, &labels));
        f.parent[2] = 1;
        assert!(!parent_component_safe(&f, &labels));
    }
}
