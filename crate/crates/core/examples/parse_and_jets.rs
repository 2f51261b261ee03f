//! Parse a potential `g(S)` and evaluate its 3-jets and the full `f = log S + g`.
//!
//!     cargo run --example parse_and_jets -- "S + 0.1*S^2" 0.5

use blowup_mcf::PotentialExpr;

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "log(1+S) + S".to_string());
    let s: f64 = args.next().map(|a| a.parse().expect("S must be a number")).unwrap_or(0.5);

    let g = match PotentialExpr::parse(&text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("g(S) = {g}");
    for (name, jet) in [("g", g.g_jet(s)), ("f", g.f_jet(s))] {
        match jet {
            Ok(j) => println!(
                "{name} at S = {s}: value {:.12e}, d/dS {:.12e}, d²/dS² {:.12e}, d³/dS³ {:.12e}",
                j.v0, j.v1, j.v2, j.v3
            ),
            Err(e) => println!("{name} at S = {s}: {e}"),
        }
    }
    match g.g_jet(0.0) {
        Ok(j) => println!("g_S(0) = {}", j.v1),
        Err(e) => println!("g is not smooth at S = 0: {e}"),
    }
}
