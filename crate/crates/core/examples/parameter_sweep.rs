//! Independent flows over a range of initial radii, run in parallel. The
//! Type I limit does not depend on `R0`.

use blowup_mcf::flow::{self, FlowOptions};
use blowup_mcf::{oracles, KahlerPotential};
use rayon::prelude::*;

fn main() {
    let pot = KahlerPotential::burns();
    let radii: Vec<f64> = (1..=12).map(|i| 0.25 * i as f64).collect();
    let rows: Vec<_> = radii
        .par_iter()
        .map(|&r0| {
            let traj = flow::integrate(&pot, 2, r0, &FlowOptions::default()).unwrap();
            (r0, flow::classify(&pot, 2, r0, &traj).unwrap())
        })
        .collect();
    println!("{:>6} {:>14} {:>10} {:>10}", "R0", "T_sing", "T error", "limit");
    for (r0, rep) in rows {
        println!(
            "{r0:>6.2} {:>14.10} {:>10.1e} {:>10.6}",
            rep.t_sing_trajectory,
            (rep.t_sing_trajectory - oracles::burns_t_sing(r0)).abs(),
            rep.limit_estimate
        );
    }
}
