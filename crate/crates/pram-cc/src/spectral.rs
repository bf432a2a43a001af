//! Normalized-Laplacian machinery: per-component spectral gaps (dense below
//! a size cutoff, deflated Lanczos above), brute-force conductance for tiny
//! components, and the edge-sampling concentration experiment.
//!
//! Convention: a self-loop contributes once to its vertex's degree and
//! appears as +w on the adjacency diagonal, so L stays symmetric PSD with
//! spectrum in [0, 2] and contracting an edge (keeping the loop) preserves
//! volume.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, MultiGraph, V};
use crate::oracle;
use crate::profile::Profile;

/// Largest component solved densely; larger ones go through Lanczos.
pub const DENSE_GAP_LIMIT: usize = 2000;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("component has {n} vertices; brute-force conductance is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// Degrees with self-loops counted once.
pub fn degrees(g: &MultiGraph) -> Vec<f64> {
    let mut d = vec![0.0; g.n];
    for e in g.edges() {
        if e.is_loop() {
            d[e.u as usize] += 1.0;
        } else {
            d[e.u as usize] += 1.0;
            d[e.v as usize] += 1.0;
        }
    }
    d
}

/// L = I − D^{-1/2} A D^{-1/2}, with zero rows for isolated vertices and
/// diagonal 1 − w(v,v)/deg(v) at looped vertices.
pub fn normalized_laplacian(g: &MultiGraph) -> DMatrix<f64> {
    let n = g.n;
    let d = degrees(g);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        if e.is_loop() {
            a[(e.u as usize, e.u as usize)] += 1.0;
        } else {
            a[(e.u as usize, e.v as usize)] += 1.0;
            a[(e.v as usize, e.u as usize)] += 1.0;
        }
    }
    let mut l = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        if d[i] == 0.0 {
            continue;
        }
        l[(i, i)] = 1.0 - a[(i, i)] / d[i];
        for j in 0..n {
            if j != i && a[(i, j)] != 0.0 {
                l[(i, j)] = -a[(i, j)] / (d[i] * d[j]).sqrt();
            }
        }
    }
    l
}

/// All eigenvalues of the normalized Laplacian, ascending (dense solve).
pub fn dense_eigenvalues(g: &MultiGraph) -> Vec<f64> {
    let l = normalized_laplacian(g);
    let mut ev: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// One connected component in local coordinates.
pub struct CompGraph {
    /// Original vertex ids, index = local id.
    pub verts: Vec<V>,
    /// Local-id edges, loops included.
    pub edges: Vec<(usize, usize)>,
    pub deg: Vec<f64>,
}

impl CompGraph {
    pub fn n(&self) -> usize {
        self.verts.len()
    }

    fn laplacian(&self) -> DMatrix<f64> {
        let g = self.to_graph();
        normalized_laplacian(&g)
    }

    pub fn to_graph(&self) -> MultiGraph {
        let pairs: Vec<(V, V)> =
            self.edges.iter().map(|&(a, b)| (a as V, b as V)).collect();
        MultiGraph::from_pairs(self.n(), &pairs)
    }

    /// y = (2I − L − 2φφᵀ)x with φ the normalized √deg vector, without
    /// materializing L.
    fn apply_deflated(&self, phi: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let mut y = DVector::<f64>::zeros(n);
        // (I − L)x = D^{-1/2} A D^{-1/2} x, restricted to positive degrees
        for &(a, b) in &self.edges {
            if a == b {
                y[a] += x[a] / self.deg[a];
            } else {
                let s = (self.deg[a] * self.deg[b]).sqrt();
                y[a] += x[b] / s;
                y[b] += x[a] / s;
            }
        }
        for i in 0..n {
            // 2x − Lx = x + (I − L)x, except degree-0 rows where Lx = 0
            y[i] += if self.deg[i] > 0.0 { x[i] } else { 2.0 * x[i] };
        }
        let c = 2.0 * phi.dot(x);
        y - phi * c
    }
}

/// Split into connected components (only those with ≥ `min_size` vertices).
pub fn split_components(g: &MultiGraph, min_size: usize) -> Vec<CompGraph> {
    let labels = oracle::components_union_find(g.n, g.edges().map(|e| (e.u, e.v)));
    let mut local: Vec<usize> = vec![usize::MAX; g.n];
    let mut comps: std::collections::BTreeMap<V, CompGraph> = Default::default();
    for v in 0..g.n {
        let c = comps.entry(labels[v]).or_insert_with(|| CompGraph {
            verts: Vec::new(),
            edges: Vec::new(),
            deg: Vec::new(),
        });
        local[v] = c.verts.len();
        c.verts.push(v as V);
        c.deg.push(0.0);
    }
    for e in g.edges() {
        let c = comps.get_mut(&labels[e.u as usize]).unwrap();
        let (a, b) = (local[e.u as usize], local[e.v as usize]);
        c.edges.push((a, b));
        if a == b {
            c.deg[a] += 1.0;
        } else {
            c.deg[a] += 1.0;
            c.deg[b] += 1.0;
        }
    }
    comps.into_values().filter(|c| c.n() >= min_size).collect()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GapEstimate {
    pub gap: f64,
    pub residual: f64,
    pub converged: bool,
}

fn gap_dense(c: &CompGraph) -> GapEstimate {
    let l = c.laplacian();
    let mut ev: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    GapEstimate { gap: ev[1].max(0.0), residual: 0.0, converged: true }
}

/// Lanczos with full reorthogonalization on 2I − L − 2φφᵀ; the top Ritz
/// value μ gives gap = 2 − μ. Extra kernel directions of L (a component
/// that fell apart) surface as μ → 2, i.e. gap → 0, as they should.
fn gap_lanczos(c: &CompGraph, tol: f64, max_steps: usize, seed: u64) -> GapEstimate {
    let n = c.n();
    let vol: f64 = c.deg.iter().sum();
    let phi = DVector::<f64>::from_iterator(
        n,
        c.deg.iter().map(|&d| if vol > 0.0 { (d / vol).sqrt() } else { 0.0 }),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = DVector::<f64>::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
    q -= &phi * phi.dot(&q);
    let nq = q.norm();
    if nq < 1e-12 {
        return GapEstimate { gap: 2.0, residual: 0.0, converged: true };
    }
    q /= nq;

    let mut basis: Vec<DVector<f64>> = vec![q.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last = GapEstimate { gap: 2.0, residual: f64::INFINITY, converged: false };
    for step in 0..max_steps {
        let qk = basis.last().unwrap().clone();
        let mut w = c.apply_deflated(&phi, &qk);
        let alpha = qk.dot(&w);
        alphas.push(alpha);
        w -= &qk * alpha;
        if let Some(beta_prev) = betas.last() {
            let qprev = &basis[basis.len() - 2];
            w -= qprev * *beta_prev;
        }
        // full reorthogonalization (and against the deflated direction)
        for b in &basis {
            let c2 = b.dot(&w);
            w -= b * c2;
        }
        w -= &phi * phi.dot(&w);
        let beta = w.norm();

        // Ritz values of the tridiagonal so far
        let k = alphas.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alphas[i];
            if i + 1 < k {
                t[(i, i + 1)] = betas.get(i).copied().unwrap_or(beta);
                t[(i + 1, i)] = t[(i, i + 1)];
            }
        }
        let se = t.symmetric_eigen();
        let (mut mu, mut top) = (f64::NEG_INFINITY, 0usize);
        for (i, &ev) in se.eigenvalues.iter().enumerate() {
            if ev > mu {
                mu = ev;
                top = i;
            }
        }
        let resid = beta * se.eigenvectors[(k - 1, top)].abs();
        last = GapEstimate {
            gap: (2.0 - mu).max(0.0),
            residual: resid,
            converged: resid <= tol * mu.abs().max(1e-12),
        };
        if last.converged || beta < 1e-12 || step + 1 == max_steps {
            if beta < 1e-12 {
                last.converged = true;
            }
            break;
        }
        betas.push(beta);
        basis.push(w / beta);
    }
    last
}

/// λ₁ of one component, dense or iterative depending on size.
pub fn component_gap(c: &CompGraph) -> GapEstimate {
    if c.n() <= DENSE_GAP_LIMIT {
        gap_dense(c)
    } else {
        gap_lanczos(c, 1e-6, 400, 0x5eed)
    }
}

/// Per-component λ₁ for components with ≥ 2 vertices, plus the
/// component-wise minimum (None when no such component exists).
pub fn spectral_gap(g: &MultiGraph) -> (Vec<GapEstimate>, Option<f64>) {
    let comps = split_components(g, 2);
    let gaps: Vec<GapEstimate> = comps.iter().map(component_gap).collect();
    let min = gaps
        .iter()
        .map(|e| e.gap)
        .min_by(|a, b| a.partial_cmp(b).unwrap());
    (gaps, min)
}

/// Minimum over cuts S (vol(S) ≤ vol(V)/2) of |E(S, S̄)| / vol(S), by
/// enumerating every subset. Capped at 20 vertices.
pub fn conductance_bruteforce(c: &CompGraph) -> Result<f64, SpectralError> {
    let n = c.n();
    let cap = 20;
    if n > cap {
        return Err(SpectralError::TooLarge { n, cap });
    }
    let vol_all: f64 = c.deg.iter().sum();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) - 1 {
        let in_s = |v: usize| mask >> v & 1 == 1;
        let vol: f64 = (0..n).filter(|&v| in_s(v)).map(|v| c.deg[v]).sum();
        if vol == 0.0 || vol > vol_all / 2.0 {
            continue;
        }
        let cut = c
            .edges
            .iter()
            .filter(|&&(a, b)| a != b && in_s(a) != in_s(b))
            .count() as f64;
        best = best.min(cut / vol);
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSpectrum {
    pub vertices: usize,
    pub edges: usize,
    pub gap: f64,
    pub residual: f64,
    pub converged: bool,
    pub conductance: Option<f64>,
    pub diameter: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralReport {
    pub components: Vec<ComponentSpectrum>,
    pub min_gap: Option<f64>,
}

/// Per-component gap / conductance / diameter report. Conductance is
/// computed only for loop-free components small enough to brute-force.
pub fn spectral_report(g: &MultiGraph) -> SpectralReport {
    let comps = split_components(g, 2);
    let mut out = Vec::new();
    let mut min_gap: Option<f64> = None;
    for c in &comps {
        let est = component_gap(c);
        min_gap = Some(min_gap.map_or(est.gap, |m: f64| m.min(est.gap)));
        let loop_free = c.edges.iter().all(|&(a, b)| a != b);
        let cond = if loop_free { conductance_bruteforce(c).ok() } else { None };
        let pairs: Vec<(V, V)> = c.edges.iter().map(|&(a, b)| (a as V, b as V)).collect();
        let adj = oracle::adjacency(c.n(), pairs.iter().copied());
        let diameter = oracle::double_sweep_diameter(&adj, 0);
        out.push(ComponentSpectrum {
            vertices: c.n(),
            edges: c.edges.len(),
            gap: est.gap,
            residual: est.residual,
            converged: est.converged,
            conductance: cond,
            diameter,
        });
    }
    SpectralReport { components: out, min_gap }
}

/// Merge vertex `b` into vertex `a`, keeping the resulting loops.
pub fn contract_pair(g: &MultiGraph, a: V, b: V) -> MultiGraph {
    let map = |v: V| if v == b { a } else { v };
    MultiGraph::from_edges(
        g.n,
        g.edges().map(|e| Edge { u: map(e.u), v: map(e.v), origin: e.origin }).collect(),
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingRow {
    pub n: usize,
    pub p: f64,
    pub delta: f64,
    pub bound: f64,
    pub max_dev: f64,
    pub frac_within: f64,
    pub seeds: u64,
    /// Set when p·deg falls below the profile's C·ln n precondition.
    pub precondition_warning: bool,
}

/// Sample every edge with probability p, `trials` times, and compare each
/// original component's gap against the gap of the sampled subgraph on the
/// same vertices. Reports the trial fraction within the theorem's bound
/// 13√(ln(4n/δ)/(p·deg)) and the worst observed deviation.
pub fn sampling_concentration_experiment(
    g: &MultiGraph,
    profile: Profile,
    p: f64,
    trials: u32,
    delta: f64,
    seed: u64,
) -> SamplingRow {
    let n = g.n;
    let deg = degrees(g)
        .into_iter()
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min)
        .max(1.0);
    let bound = 13.0 * ((4.0 * n as f64 / delta).ln() / (p * deg)).sqrt();
    let warned = p * deg < profile.sampling_precondition_c() * (n.max(2) as f64).ln();

    let comps = split_components(g, 2);
    let originals: Vec<(Vec<usize>, f64)> = comps
        .iter()
        .map(|c| {
            let idx: Vec<usize> = c.verts.iter().map(|&v| v as usize).collect();
            (idx, component_gap(c).gap)
        })
        .collect();

    let mut within = 0u32;
    let mut max_dev: f64 = 0.0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let sampled = MultiGraph::from_edges(
            g.n,
            g.edges().filter(|e| !e.is_loop()).filter(|_| rng.gen_bool(p)).collect(),
        );
        let mut trial_dev: f64 = 0.0;
        for (idx, gap0) in &originals {
            // the sampled subgraph induced on the original component
            let mut back = vec![usize::MAX; g.n];
            for (i, &v) in idx.iter().enumerate() {
                back[v] = i;
            }
            let edges: Vec<(usize, usize)> = sampled
                .edges()
                .filter(|e| back[e.u as usize] != usize::MAX && back[e.v as usize] != usize::MAX)
                .map(|e| (back[e.u as usize], back[e.v as usize]))
                .collect();
            let mut deg_l = vec![0.0; idx.len()];
            for &(a, b) in &edges {
                if a == b {
                    deg_l[a] += 1.0;
                } else {
                    deg_l[a] += 1.0;
                    deg_l[b] += 1.0;
                }
            }
            let c = CompGraph {
                verts: idx.iter().map(|&v| v as V).collect(),
                edges,
                deg: deg_l,
            };
            let gap1 = component_gap(&c).gap;
            trial_dev = trial_dev.max((gap0 - gap1).abs());
        }
        max_dev = max_dev.max(trial_dev);
        if trial_dev <= bound {
            within += 1;
        }
    }
    SamplingRow {
        n,
        p,
        delta,
        bound,
        max_dev,
        frac_within: within as f64 / trials.max(1) as f64,
        seeds: trials as u64,
        precondition_warning: warned,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use approx::assert_relative_eq;

    #[test]
    fn k2_laplacian_and_gap() {
        let g = MultiGraph::from_pairs(2, &[(0, 1)]);
        let l = normalized_laplacian(&g);
        assert_relative_eq!(l[(0, 0)], 1.0);
        assert_relative_eq!(l[(0, 1)], -1.0);
        let ev = dense_eigenvalues(&g);
        assert_relative_eq!(ev[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(ev[1], 2.0, epsilon = 1e-9);
        let (gaps, min) = spectral_gap(&g);
        assert_relative_eq!(gaps[0].gap, 2.0, epsilon = 1e-9);
        assert_relative_eq!(min.unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn single_self_loop_gives_zero_matrix() {
        let g = MultiGraph::from_pairs(1, &[(0, 0)]);
        let l = normalized_laplacian(&g);
        assert_relative_eq!(l[(0, 0)], 0.0);
    }

    #[test]
    fn triangle_eigenvalues() {
        let g = gen::cycle(3);
        let ev = dense_eigenvalues(&g);
        assert_relative_eq!(ev[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(ev[1], 1.5, epsilon = 1e-9);
        assert_relative_eq!(ev[2], 1.5, epsilon = 1e-9);
    }

    #[test]
    fn cycle_gap_matches_closed_form() {
        for n in [8usize, 16, 33] {
            let g = gen::cycle(n);
            let (gaps, _) = spectral_gap(&g);
            let want = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
            assert_relative_eq!(gaps[0].gap, want, epsilon = 1e-6);
        }
    }

    #[test]
    fn union_min_gap_is_cycles() {
        let mut g = MultiGraph::from_pairs(2, &[(0, 1)]);
        let mut pairs: Vec<(V, V)> = g.edges().map(|e| (e.u, e.v)).collect();
        for (u, v) in gen::cycle(8).edges().map(|e| (e.u + 2, e.v + 2)) {
            pairs.push((u, v));
        }
        g = MultiGraph::from_pairs(10, &pairs);
        let (_, min) = spectral_gap(&g);
        assert_relative_eq!(min.unwrap(), 1.0 - (std::f64::consts::PI / 4.0).cos(), epsilon = 1e-6);
    }

    #[test]
    fn conductance_examples() {
        let k2 = split_components(&MultiGraph::from_pairs(2, &[(0, 1)]), 2);
        assert_relative_eq!(conductance_bruteforce(&k2[0]).unwrap(), 1.0);
        let p3 = split_components(&gen::path(3), 2);
        assert_relative_eq!(conductance_bruteforce(&p3[0]).unwrap(), 1.0);
        let c4 = split_components(&gen::cycle(4), 2);
        assert_relative_eq!(conductance_bruteforce(&c4[0]).unwrap(), 0.5);
        let big = split_components(&gen::cycle(30), 2);
        assert!(conductance_bruteforce(&big[0]).is_err());
    }

    #[test]
    fn cheeger_sandwich_on_small_graphs() {
        for g in [gen::cycle(6), gen::path(5), gen::gnp(10, 0.5, 3)] {
            for c in split_components(&g, 2) {
                if c.n() > 20 {
                    continue;
                }
                let gap = component_gap(&c).gap;
                let phi = conductance_bruteforce(&c).unwrap();
                assert!(phi * phi / 2.0 <= gap + 1e-9, "lower cheeger failed");
                assert!(gap <= 2.0 * phi + 1e-9, "upper cheeger failed");
            }
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let g = gen::random_regular(256, 8, 5);
        let comps = split_components(&g, 2);
        let dense = gap_dense(&comps[0]);
        let lan = gap_lanczos(&comps[0], 1e-8, 400, 1);
        assert!(lan.converged, "lanczos did not converge, residual {}", lan.residual);
        assert_relative_eq!(dense.gap, lan.gap, epsilon = 1e-5);
    }

    #[test]
    fn identity_sampling_has_zero_deviation() {
        let g = gen::random_regular(64, 8, 2);
        let row =
            sampling_concentration_experiment(&g, Profile::desk(), 1.0, 3, 0.1, 4);
        assert!(row.max_dev <= 1e-9, "p=1 deviated: {}", row.max_dev);
        assert_relative_eq!(row.frac_within, 1.0);
    }

    #[test]
    fn contraction_never_decreases_gap_small() {
        for g in [gen::cycle(6), gen::path(6), gen::gnp(7, 0.5, 9)] {
            let labels = oracle::components_dual(&g);
            let (_, min0) = spectral_gap(&g);
            let Some(min0) = min0 else { continue };
            for a in 0..g.n as V {
                for b in (a + 1)..g.n as V {
                    if labels[a as usize] != labels[b as usize] {
                        continue;
                    }
                    let h = contract_pair(&g, a, b);
                    let (_, min1) = spectral_gap(&h);
                    if let Some(m1) = min1 {
                        assert!(
                            m1 >= min0 - 1e-9,
                            "contracting ({a},{b}) dropped the gap: {min0} -> {m1}"
                        );
                    }
                }
            }
        }
    }
}
