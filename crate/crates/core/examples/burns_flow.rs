//! Flow of the Burns metric from `R0 = 1` compared against its exact
//! implicit solution `R²/2 + (1/3) log(3R² + 1) = T - t`.

use blowup_mcf::flow::{self, FlowOptions};
use blowup_mcf::{oracles, KahlerPotential};

fn main() {
    let pot = KahlerPotential::burns();
    let r0 = 1.0;
    let t_sing = oracles::burns_t_sing(r0);
    let opts = FlowOptions {
        output_stride: Some(t_sing / 10.0),
        ..FlowOptions::default()
    };
    let traj = flow::integrate(&pot, 2, r0, &opts).unwrap();

    println!("{:>10} {:>20} {:>20} {:>10}", "t", "R numeric", "R exact", "error");
    for s in &traj.samples {
        // Near T the radius is ill-conditioned in t (dR/dt ~ 1/R); stop one stride short.
        if s.t > 0.95 * t_sing {
            break;
        }
        let exact = oracles::burns_radius(r0, s.t).unwrap();
        println!("{:>10.6} {:>20.15} {:>20.15} {:>10.1e}", s.t, s.r, exact, (s.r - exact).abs());
    }
    let quad = flow::singularity_time_quadrature(&pot, 2, r0).unwrap();
    println!("\nstatus {:?} after {} steps", traj.status, traj.steps);
    println!("T_sing exact      {t_sing:.15}");
    println!("T_sing trajectory {:.15}", traj.t_sing.unwrap());
    println!("T_sing quadrature {quad:.15}");
}
