//! Classify the collapse for several potentials and dimensions: the product
//! `(T - t)|A|²` stays bounded (Type I) and tends to `(2m-1)/(2√g_S(0))`.

use blowup_mcf::flow::{self, FlowOptions};
use blowup_mcf::KahlerPotential;

fn main() {
    let cases = [("S", 2), ("S", 3), ("2*S", 2), ("S + 0.1*S^2", 2), ("log(1+S) + S", 4)];
    println!("{:>14} {:>2} {:>12} {:>12} {:>10} {:>10} {:>8}", "g", "m", "T (flow)", "T (quad)", "limit", "predicted", "sup");
    for (text, m) in cases {
        let pot = KahlerPotential::parse(text).unwrap();
        let traj = flow::integrate(&pot, m, 1.0, &FlowOptions::default()).unwrap();
        let rep = flow::classify(&pot, m, 1.0, &traj).unwrap();
        println!(
            "{text:>14} {m:>2} {:>12.8} {:>12.8} {:>10.6} {:>10.6} {:>8.4}  {}",
            rep.t_sing_trajectory,
            rep.t_sing_quadrature,
            rep.limit_estimate,
            rep.limit_predicted,
            rep.sup_product,
            rep.verdict.label()
        );
    }
}
