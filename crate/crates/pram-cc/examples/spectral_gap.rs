//! Normalized-Laplacian gaps: cycles against the closed form
//! 1 - cos(2π/n), and the component-wise minimum on a disjoint union.
//!
//!     cargo run --example spectral_gap

use pram_cc::{gen, spectral};

fn main() {
    println!("{:>6} {:>12} {:>12}", "n", "gap", "1-cos(2pi/n)");
    for n in [8usize, 16, 64, 256, 1024] {
        let g = gen::cycle(n);
        let (gaps, _) = spectral::spectral_gap(&g);
        let closed = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
        println!("{n:>6} {:>12.8} {closed:>12.8}", gaps[0].gap);
    }

    let union = gen::component_union(&[8, 40, 100], 3, 1);
    let report = spectral::spectral_report(&union);
    for c in &report.components {
        println!(
            "component with {} vertices: gap {:.6}, diameter {}",
            c.vertices, c.gap, c.diameter
        );
    }
    println!("minimum gap over components: {:.6}", report.min_gap.unwrap());
}
