use blowup_mcf::blowup::{self, pullback_matrix_closed, Chart, ChartPoint};
use blowup_mcf::curvature;
use blowup_mcf::flow::{self, FlowOptions, FlowStatus};
use blowup_mcf::oracles;
use blowup_mcf::potential::{BinOp, Expr, Func};
use blowup_mcf::{KahlerPotential, PotentialExpr};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0..100.0f64).prop_map(Expr::Num),
        Just(Expr::Var),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (
                prop_oneof![
                    Just(Func::Exp),
                    Just(Func::Log),
                    Just(Func::Sqrt),
                    Just(Func::Sin),
                    Just(Func::Cos)
                ],
                inner
            )
                .prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
        ]
    })
}

/// Valid potentials `g = a S + b S² + c log(1 + S)` with `a + c > 0` and `b, c ≥ 0`.
fn arb_valid_potential() -> impl Strategy<Value = (KahlerPotential, f64)> {
    (0.1..5.0f64, 0.0..2.0f64, 0.0..2.0f64).prop_map(|(a, b, c)| {
        let text = format!("{a:?}*S + {b:?}*S^2 + {c:?}*log(1+S)");
        (KahlerPotential::parse(&text).unwrap(), a + c)
    })
}

/// Richardson-refined central differences of `f` at `x`: first and second derivative.
fn fd12(f: impl Fn(f64) -> f64, x: f64, h: f64) -> [f64; 2] {
    let d = |h: f64| {
        let (p, m, c) = (f(x + h), f(x - h), f(x));
        [(p - m) / (2.0 * h), (p - 2.0 * c + m) / (h * h)]
    };
    let (a, b, c) = (d(h), d(0.5 * h), d(0.25 * h));
    [0, 1].map(|k| {
        let ab = (4.0 * b[k] - a[k]) / 3.0;
        let bc = (4.0 * c[k] - b[k]) / 3.0;
        (16.0 * bc - ab) / 15.0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_expressions_parse_back(e in arb_expr()) {
        let text = e.to_string();
        let parsed = PotentialExpr::parse(&text).unwrap();
        prop_assert_eq!(parsed.root(), &e);
    }

    #[test]
    fn composite_jets_match_differences(s in 0.2..5.0f64, k in 0usize..4) {
        let text = ["exp(sin(S))*S", "log(1+S^2)/sqrt(S)", "cos(S)^3 - S/(1+S)", "pow(S, 1.5)*exp(-S)"][k];
        let expr = PotentialExpr::parse(text).unwrap();
        let jet = expr.g_jet(s).unwrap();
        prop_assert!(rel(jet.v0, expr.eval(s).unwrap()) < 1e-14);
        let [d1, d2] = fd12(|x| expr.eval(x).unwrap(), s, 0.05 * s.min(1.0));
        prop_assert!((jet.v1 - d1).abs() <= 1e-7 * d1.abs().max(1.0), "{} {} {}", text, jet.v1, d1);
        prop_assert!((jet.v2 - d2).abs() <= 1e-6 * d2.abs().max(1.0), "{} {} {}", text, jet.v2, d2);
    }

    #[test]
    fn eigenvalues_recombine((pot, _) in arb_valid_potential(), m in 2u32..8, r in 1e-3..20.0f64) {
        let s = curvature::sample(&pot, m, r).unwrap();
        let k = 2.0 * m as f64 - 1.0;
        prop_assert!(rel(((k - 1.0) * s.lambda_tan + s.lambda_last) / k, s.h) < 1e-12);
        prop_assert!(rel((k - 1.0) * s.lambda_tan.powi(2) + s.lambda_last.powi(2), s.a_sq) < 1e-12);
    }

    #[test]
    fn principal_curvatures_match_the_second_fundamental_form((pot, _) in arb_valid_potential(), r in 1e-2..10.0f64) {
        // Shape operator eigenvalues from the unnormalized second fundamental form.
        let [eta, mu, a, tau, dn_eta, dn_mu] = curvature::hypersphere_frame_inputs(&pot, r).unwrap();
        let (pi_tan, pi_last) = curvature::second_fundamental_form_diag(eta, mu, a, tau, dn_eta, dn_mu, 3).unwrap();
        let (l_tan, l_last) = curvature::shape_operator_eigenvalues(pi_tan, pi_last, eta, mu);
        let (want_tan, want_last) = curvature::principal_curvatures(&pot, 2, r).unwrap();
        prop_assert!(rel(l_tan, want_tan) < 1e-10, "{} {}", l_tan, want_tan);
        prop_assert!(rel(l_last, want_last) < 1e-10, "{} {}", l_last, want_last);
    }

    #[test]
    fn burns_reduction(r in 1e-3..100.0f64) {
        let s = curvature::sample(&KahlerPotential::burns(), 2, r).unwrap();
        let q = r * r + 1.0;
        prop_assert!(rel(s.lambda_tan, -r / q) < 1e-12);
        prop_assert!(rel(s.lambda_last, -1.0 / r) < 1e-12);
        prop_assert!(rel(s.h, -(3.0 * r * r + 1.0) / (3.0 * r * q)) < 1e-12);
        prop_assert!(rel(s.a_sq, (2.0 * r.powi(4) + q * q) / (r * r * q * q)) < 1e-12);
    }

    #[test]
    fn asymptotic_constants_are_attained((pot, a) in arb_valid_potential(), m in 2u32..6) {
        let consts = flow::asymptotic_constants(&pot, m).unwrap();
        let k = 2.0 * m as f64 - 1.0;
        prop_assert!(rel(consts.c, 1.0 / (k * a.sqrt())) < 1e-12);
        let r = 1e-4;
        let s = curvature::sample(&pot, m, r).unwrap();
        prop_assert!((r * s.h + consts.c).abs() < 1e-3 * consts.c);
        prop_assert!((r * r * s.a_sq - consts.w0).abs() < 1e-3 * consts.w0);
        // Tangential curvatures vanish on the divisor, the last one blows up like 1/R.
        prop_assert!(s.lambda_tan.abs() < 1e-3);
        prop_assert!((s.lambda_last * r + 1.0 / a.sqrt()).abs() < 1e-2);
    }

    #[test]
    fn charts_agree_on_overlap(
        x1 in (0.05..2.0f64, 0.0..6.3f64),
        x2 in (0.05..2.0f64, 0.0..6.3f64),
        k in 0usize..3,
    ) {
        let expr = PotentialExpr::parse(["S", "S + 0.1*S^2", "-0.5*S"][k]).unwrap();
        let p = [Complex64::from_polar(x1.0, x1.1), Complex64::from_polar(x2.0, x2.1)];
        let u1 = ChartPoint::lift(Chart::U1, p).unwrap();
        let u2 = ChartPoint::lift(Chart::U2, p).unwrap();
        prop_assert!(rel(u1.s(), u2.s()) < 1e-12);
        let m1 = pullback_matrix_closed(&expr, &u1).unwrap();
        let m2 = pullback_matrix_closed(&expr, &u2).unwrap();
        prop_assert_eq!(m1.is_positive_definite(), m2.is_positive_definite());
        prop_assert_eq!(m1.det() > 0.0, m2.det() > 0.0);
    }

    #[test]
    fn divisor_restriction_is_positive_iff_extension_holds(a in -2.0..2.0f64, re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let expr = PotentialExpr::parse(&format!("{a:?}*S + S^2")).unwrap();
        let rest = blowup::restriction_to_divisor(&expr, Chart::U1, Complex64::new(re, im)).unwrap();
        prop_assert_eq!(rest.is_positive_definite(), a > 0.0);
    }

    #[test]
    fn validity_report_is_consistent(a in -2.0..2.0f64, b in -1.0..1.0f64) {
        let expr = PotentialExpr::parse(&format!("{a:?}*S + {b:?}*S^2")).unwrap();
        let r = blowup::check_validity(&expr, 10.0, 256).unwrap();
        prop_assert_eq!(r.cond_extension, r.g_s_at_0 > 0.0);
        prop_assert_eq!(r.first_violation_s.is_some(), !(r.cond_positive_1 && r.cond_positive_2));
    }

    #[test]
    fn burns_oracle_is_monotone_and_solves_the_flow(r0 in 0.3..3.0f64, frac in 0.05..0.9f64) {
        let t_sing = oracles::burns_t_sing(r0);
        let t = frac * t_sing;
        let r = oracles::burns_radius(r0, t).unwrap();
        prop_assert!(oracles::burns_radius(r0, t + 1e-3 * t_sing).unwrap() < r);
        let h = 1e-6;
        let dr = (oracles::burns_radius(r0, t + h).unwrap() - oracles::burns_radius(r0, t - h).unwrap()) / (2.0 * h);
        let mean = curvature::mean_curvature(&KahlerPotential::burns(), 2, r).unwrap();
        prop_assert!((dr - mean).abs() < 1e-6, "{} {}", dr, mean);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn singularity_times_agree(r0 in 0.3..3.0f64) {
        let pot = KahlerPotential::burns();
        let closed = oracles::burns_t_sing(r0);
        let traj = flow::integrate(&pot, 2, r0, &FlowOptions::default()).unwrap();
        let quad = flow::singularity_time_quadrature(&pot, 2, r0).unwrap();
        prop_assert!((quad - closed).abs() < 1e-10);
        prop_assert!((traj.t_sing.unwrap() - closed).abs() < 1e-6);
    }

    #[test]
    fn collapsing_trajectories_are_monotone((pot, _) in arb_valid_potential(), m in 2u32..5, r0 in 0.2..3.0f64) {
        let traj = flow::integrate(&pot, m, r0, &FlowOptions::default()).unwrap();
        prop_assert_eq!(traj.status, FlowStatus::Collapsed);
        prop_assert!(traj.last().r <= 1e-8);
        prop_assert_eq!(traj.samples[0].r, r0);
        for w in traj.samples.windows(2) {
            prop_assert!(w[1].t > w[0].t && w[1].r < w[0].r);
        }
    }

    #[test]
    fn type_one_limit_matches_prediction((pot, _) in arb_valid_potential(), m in 2u32..5, r0 in 0.2..3.0f64) {
        let traj = flow::integrate(&pot, m, r0, &FlowOptions::default()).unwrap();
        let rep = flow::classify(&pot, m, r0, &traj).unwrap();
        prop_assert_eq!(rep.verdict, flow::TypeVerdict::TypeI);
        prop_assert!(rel(rep.limit_estimate, rep.limit_predicted) < 1e-3, "{} {}", rep.limit_estimate, rep.limit_predicted);
        prop_assert!(rel(rep.t_sing_trajectory, rep.t_sing_quadrature) < 1e-6);
    }
}

#[test]
fn burns_type_one_bound() {
    let pot = KahlerPotential::burns();
    let traj = flow::integrate(&pot, 2, 1.0, &FlowOptions::default()).unwrap();
    let rep = flow::classify(&pot, 2, 1.0, &traj).unwrap();
    assert!(rep.sup_product <= 1.6, "{}", rep.sup_product);
    assert!((rep.limit_estimate - rep.limit_predicted).abs() < 1e-3);
}

#[test]
fn backward_flow_recovers_the_initial_radius() {
    let pot = KahlerPotential::burns();
    let opts = FlowOptions::default();
    let traj = flow::integrate(&pot, 2, 1.0, &opts).unwrap();
    let end = traj.last();
    let back = flow::evolve(&pot, 2, end.r, end.t, flow::Direction::Backward, &opts).unwrap();
    assert!((back - 1.0).abs() < 1e-6, "{back}");
}
