//! Edge sampling barely moves the spectral gap of a regular graph: keep
//! each edge with probability p and compare per-component gaps against the
//! concentration bound 13·sqrt(ln(4n/δ)/(p·deg)).
//!
//!     cargo run --release --example sampling_concentration

use pram_cc::profile::Profile;
use pram_cc::{gen, spectral};

fn main() {
    let (p, delta, trials) = (0.5, 0.1, 10);
    for n in [512usize, 1024] {
        let g = gen::random_regular(n, 64, 17);
        let row =
            spectral::sampling_concentration_experiment(&g, Profile::desk(), p, trials, delta, 5);
        println!("{}", serde_json::to_string(&row).unwrap());
        assert!(row.frac_within >= 1.0 - delta);
    }
    println!("all trials stayed within the concentration bound");
}
