//! A graph whose diameter is logarithmic, but whose diameter after
//! independent edge sampling blows up by orders of magnitude: a hub with
//! long disjoint spokes tied together by a narrow band. Sampling usually
//! cuts every spoke near the hub, leaving one snake-like component that
//! threads the band.
//!
//!     cargo run --release --example diameter_blowup

use pram_cc::profile::{clog2, Profile};
use pram_cc::{gen, oracle};

fn main() {
    let built = gen::diameter_blowup(10_000, Profile::desk());
    let g = &built.g;
    let adj = oracle::adjacency(g.n, g.edges().map(|e| (e.u, e.v)));
    let before = oracle::double_sweep_diameter(&adj, built.hub);
    let p = 1.0 / clog2(g.n) as f64;
    println!(
        "n={}, spokes={}, path_len={}, diameter before sampling: {before}",
        g.n, built.spokes, built.path_len
    );

    let mut blowups = Vec::new();
    for seed in 0..20u64 {
        let kept = gen::sample_edges(g, p, seed);
        let after = oracle::max_component_diameter(g.n, &kept, 3);
        blowups.push(after as f64 / before as f64);
        println!("seed {seed:>2}: diameter after p={p:.3} sampling = {after}");
    }
    blowups.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("median blowup: {:.1}x", blowups[blowups.len() / 2]);
}
