//! Principal curvatures, mean curvature and |A|² of the spheres `|z| = R`
//! for a chosen potential, with the limits predicted at the divisor.
//!
//!     cargo run --example curvature_profile -- "2*S" 3

use blowup_mcf::{curvature, flow, KahlerPotential};

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "S".to_string());
    let m: u32 = args.next().map(|a| a.parse().unwrap()).unwrap_or(2);
    let pot = KahlerPotential::parse(&text).unwrap();

    println!("{:>10} {:>14} {:>14} {:>14} {:>14} {:>10} {:>10}", "R", "lambda_tan", "lambda_last", "H", "A_sq", "R*H", "R^2*A_sq");
    for k in -5..=2 {
        let r = 10f64.powi(k);
        match curvature::sample(&pot, m, r) {
            Ok(s) => println!(
                "{r:>10.0e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.6} {:>10.6}",
                s.lambda_tan, s.lambda_last, s.h, s.a_sq, r * s.h, r * r * s.a_sq
            ),
            Err(e) => println!("{r:>10.0e} {e}"),
        }
    }
    match flow::asymptotic_constants(&pot, m) {
        Ok(c) => println!("\npredicted: R*H -> {:.6}, R^2*A_sq -> {:.6}", -c.c, c.w0),
        Err(e) => println!("\n{e}"),
    }
}
