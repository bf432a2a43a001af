//! Instance generators. All randomness is explicit (caller-provided seeds)
//! so every instance is reproducible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{MultiGraph, V};
use crate::profile::{clog2, Mode, Profile};

pub fn path(n: usize) -> MultiGraph {
    let pairs: Vec<(V, V)> = (0..n.saturating_sub(1)).map(|i| (i as V, (i + 1) as V)).collect();
    MultiGraph::from_pairs(n, &pairs)
}

pub fn cycle(n: usize) -> MultiGraph {
    assert!(n >= 2);
    let mut pairs: Vec<(V, V)> = (0..n - 1).map(|i| (i as V, (i + 1) as V)).collect();
    pairs.push(((n - 1) as V, 0));
    MultiGraph::from_pairs(n, &pairs)
}

/// Random d-regular multigraph via the configuration model. Loops would break
/// exact degrees (a loop counts once), so stub pairings producing loops are
/// repaired by swaps; parallel edges are allowed.
pub fn random_regular(n: usize, d: usize, seed: u64) -> MultiGraph {
    assert!(n * d % 2 == 0, "n*d must be even");
    assert!(d < n, "degree must be below n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<V> = (0..n).flat_map(|v| std::iter::repeat(v as V).take(d)).collect();
    stubs.shuffle(&mut rng);
    // repair loops: swap one endpoint with a random position elsewhere
    let m = stubs.len() / 2;
    let mut guard = 0;
    loop {
        let mut fixed = true;
        for i in 0..m {
            if stubs[2 * i] == stubs[2 * i + 1] {
                let j = rng.gen_range(0..stubs.len());
                stubs.swap(2 * i + 1, j);
                fixed = false;
            }
        }
        if fixed {
            break;
        }
        guard += 1;
        assert!(guard < 10_000, "could not repair loops in configuration model");
    }
    let pairs: Vec<(V, V)> = (0..m).map(|i| (stubs[2 * i], stubs[2 * i + 1])).collect();
    MultiGraph::from_pairs(n, &pairs)
}

pub fn gnp(n: usize, p: f64, seed: u64) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                pairs.push((u as V, v as V));
            }
        }
    }
    MultiGraph::from_pairs(n, &pairs)
}

/// Disjoint union of cycles of the given sizes plus `isolated` extra
/// vertices, with component vertex ranges shuffled into a random id
/// permutation so components are interleaved.
pub fn component_union(cycle_sizes: &[usize], isolated: usize, seed: u64) -> MultiGraph {
    let n: usize = cycle_sizes.iter().sum::<usize>() + isolated;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<V> = (0..n as V).collect();
    ids.shuffle(&mut rng);
    let mut pairs = Vec::new();
    let mut base = 0usize;
    for &s in cycle_sizes {
        assert!(s >= 2);
        // s == 2 naturally emits two parallel edges (C_2 convention)
        for i in 0..s {
            pairs.push((ids[base + i], ids[base + (i + 1) % s]));
        }
        base += s;
    }
    MultiGraph::from_pairs(n, &pairs)
}

/// The 2-cycle family: either one cycle C_n or two disjoint C_{n/2}.
/// C_2 is realized as two parallel edges.
pub fn two_cycle(n: usize, split: bool) -> MultiGraph {
    assert!(n >= 4 && n % 2 == 0);
    let mut pairs: Vec<(V, V)> = Vec::new();
    let add_cycle = |lo: usize, len: usize, pairs: &mut Vec<(V, V)>| {
        if len == 2 {
            pairs.push((lo as V, (lo + 1) as V));
            pairs.push((lo as V, (lo + 1) as V));
        } else {
            for i in 0..len {
                pairs.push(((lo + i) as V, (lo + (i + 1) % len) as V));
            }
        }
    };
    if split {
        add_cycle(0, n / 2, &mut pairs);
        add_cycle(n / 2, n / 2, &mut pairs);
    } else {
        add_cycle(0, n, &mut pairs);
    }
    MultiGraph::from_pairs(n, &pairs)
}

pub struct DiameterBlowup {
    pub g: MultiGraph,
    pub hub: V,
    /// z_i vertices are ids 1..=spokes
    pub spokes: usize,
    pub path_len: usize,
    pub band_width: usize,
    pub band_multiplicity: usize,
}

/// Hub-plus-paths-plus-band construction: a hub x, `k` vertex-disjoint paths
/// of length L from x to band vertices z_1..z_k, and band edges between z_i
/// and z_j for |i-j| <= W. The paper profile uses L = ceil(log2 n),
/// W = L^3, single band edges; the desk profile shrinks L and W and uses
/// multi-edges in the band so the post-sampling blowup survives at n ~ 1e4.
pub fn diameter_blowup(n_target: usize, profile: Profile) -> DiameterBlowup {
    let lg = clog2(n_target) as usize;
    let (path_len, band_width, band_multiplicity) = match profile.mode {
        Mode::Paper => (lg, lg * lg * lg, 1),
        Mode::Desk => (4, 6, 8),
    };
    let k = ((n_target - 1) / path_len).max(2);
    let n = 1 + k * path_len; // hub + (L-1 internals + z) per spoke
    let mut pairs: Vec<(V, V)> = Vec::new();
    let mut next = (1 + k) as V;
    for i in 1..=k {
        let mut prev = 0 as V; // hub
        for _ in 0..path_len - 1 {
            pairs.push((prev, next));
            prev = next;
            next += 1;
        }
        pairs.push((prev, i as V));
    }
    assert_eq!(next as usize, n);
    for i in 1..=k {
        for j in (i + 1)..=(i + band_width).min(k) {
            for _ in 0..band_multiplicity {
                pairs.push((i as V, j as V));
            }
        }
    }
    DiameterBlowup {
        g: MultiGraph::from_pairs(n, &pairs),
        hub: 0,
        spokes: k,
        path_len,
        band_width,
        band_multiplicity,
    }
}

/// Keep each edge independently with probability p.
pub fn sample_edges(g: &MultiGraph, p: f64, seed: u64) -> Vec<(V, V)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g.edges()
        .filter(|_| rng.gen_bool(p))
        .map(|e| (e.u, e.v))
        .collect()
}
