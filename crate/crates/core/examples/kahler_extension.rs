//! Which potentials `log S + g(S)` extend across the exceptional divisor, and
//! what the metric looks like in the blow-up charts of `Bl₀ℂ²`.

use blowup_mcf::blowup::{self, Chart, ChartPoint};
use blowup_mcf::PotentialExpr;
use num_complex::Complex64;

fn main() {
    for text in ["S", "S + 0.1*S^2", "log(1+S) + S", "S^2", "0", "-log(1+S)"] {
        let g = PotentialExpr::parse(text).unwrap();
        let report = blowup::check_validity(&g, blowup::DEFAULT_S_MAX, blowup::DEFAULT_SAMPLES).unwrap();
        let verdict = if report.is_valid() {
            "extends".to_string()
        } else {
            format!("fails {:?}", report.failing_conditions())
        };
        println!("{text:>14}: g_S(0) = {:>5}, {verdict}", report.g_s_at_0);
    }

    let g = PotentialExpr::parse("S").unwrap();
    println!("\nBurns metric in chart U1, closed form against finite differences:");
    for (fiber, base) in [(0.5, 0.3), (1.0, 0.0), (0.2, -1.5)] {
        let p = ChartPoint::new(Chart::U1, Complex64::new(fiber, 0.0), Complex64::new(base, 0.0));
        let closed = blowup::pullback_matrix_closed(&g, &p).unwrap();
        let numeric = blowup::pullback_matrix_numeric(&g, &p, 1e-4).unwrap();
        println!(
            "  (z1, z2) = ({fiber}, {base}): a11 = {:.6}, a22 = {:.6}, |a12| = {:.6}, max deviation {:.1e}, positive = {}",
            closed.a11,
            closed.a22,
            closed.a12.norm(),
            closed.max_abs_diff(&numeric),
            closed.is_positive_definite()
        );
    }

    println!("\nRestriction to the divisor z1 = 0:");
    for w in [0.0, 1.0, 3.0] {
        let r = blowup::restriction_to_divisor(&g, Chart::U1, Complex64::new(w, 0.0)).unwrap();
        println!(
            "  w = {w}: diag({}, {}), Fubini–Study coefficient {}",
            r.a11,
            r.a22,
            blowup::fubini_study_check(Complex64::new(w, 0.0))
        );
    }
}
