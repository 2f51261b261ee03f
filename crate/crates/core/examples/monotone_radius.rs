//! For `g = log(1 + S)` the mean curvature of large spheres is positive, so
//! only small initial spheres collapse. Locate the sign change and check
//! that |A|² only blows up at the divisor.

use blowup_mcf::flow::{self, MonotoneRadius};
use blowup_mcf::{curvature, KahlerPotential};

fn main() {
    let pot = KahlerPotential::parse("log(1+S)").unwrap();
    for m in 2..=4u32 {
        let k = 2.0 * m as f64 - 1.0;
        // 1 + (2m-1) S - 2 S² = 0
        let s_star = (k + (k * k + 8.0).sqrt()) / 4.0;
        match flow::monotone_radius(&pot, m, 100.0).unwrap() {
            MonotoneRadius::Finite(r) => println!(
                "m = {m}: H < 0 for R < {r:.10} (exact {:.10}); H(2R*) = {:.4}",
                s_star.sqrt(),
                curvature::mean_curvature(&pot, m, 2.0 * r).unwrap()
            ),
            MonotoneRadius::Unbounded => println!("m = {m}: H < 0 on the whole probe range"),
        }
    }
    let burns = KahlerPotential::burns();
    println!("Burns: {:?}", flow::monotone_radius(&burns, 2, 100.0).unwrap());

    let hits = flow::blow_up_locus_scan(&burns, 2, 10.0, 10_000, 1e2).unwrap();
    println!(
        "Burns |A|² > 100 at {} of 10000 grid radii, all below R = {}",
        hits.len(),
        hits.iter().copied().fold(0.0, f64::max)
    );
}
