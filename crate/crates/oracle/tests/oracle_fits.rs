use smallsphere_core::rational::q;
use smallsphere_core::CurvatureJet;
use smallsphere_oracle::{run_oracle, Check, Grid, OracleConfig, OracleSummary};

fn run(label: &str, jet: &CurvatureJet) -> OracleSummary {
    let s = run_oracle(label, jet, &OracleConfig::default()).unwrap().summary;
    for c in &s.checks {
        println!("{label} {} rel {:.3e} pass {}", c.name, c.rel_error.0, c.pass);
    }
    for c in &s.convergence {
        println!("{label} order {} {:?}", c.quantity, c.orders.iter().map(|o| o.map(|x| x.0)).collect::<Vec<_>>());
    }
    println!("{label} scale {} cond {:.3e} verdict {}", s.jet_scale, s.fit_condition.0, s.kdot_arbiter.verdict);
    assert!(s.pass, "{label}: {:?}", s.flags);
    s
}

fn check<'a>(s: &'a OracleSummary, name: &str) -> &'a Check {
    s.checks.iter().find(|c| c.name == name).unwrap()
}

#[test]
fn flat_deltas_are_tiny() {
    let s = run("flat", &CurvatureJet::flat());
    for c in &s.checks {
        assert!(c.max_abs_delta.0 < 1e-10, "{}", c.name);
    }
}

#[test]
fn round_sphere_fits() {
    let s = run("round", &CurvatureJet::round(&q(1, 1)).unwrap());
    assert!((check(&s, "KDot").mean_numeric.0 - 1.0 / 3.0).abs() < 1e-6);
    assert!((check(&s, "HDot").mean_numeric.0 + 2.0 / 3.0).abs() < 1e-6);
    // Einstein jets cannot tell the two Gauss-curvature linearizations apart.
    assert_eq!(s.kdot_arbiter.verdict, "indistinguishable");
}

#[test]
fn random_jets_fit_and_pick_standard_operator() {
    for seed in 1..=5 {
        let s = run(&format!("random:{seed}"), &CurvatureJet::random(seed));
        assert_eq!(s.kdot_arbiter.verdict, "standard");
        for c in &s.convergence {
            let last = c.orders.last().unwrap().unwrap().0;
            assert!(last > 1.9, "{} order {last}", c.quantity);
        }
    }
}

#[test]
fn small_grid_is_rejected() {
    let cfg = OracleConfig { grid: Grid::new(8, 16), ..Default::default() };
    assert!(run_oracle("x", &CurvatureJet::flat(), &cfg).is_err());
    let cfg = OracleConfig { radii: vec![0.16, 0.08, 0.08, 0.02], ..Default::default() };
    assert!(run_oracle("x", &CurvatureJet::flat(), &cfg).is_err());
}
