use smallsphere_core::bartnik::{self, BoundaryExpansion};
use smallsphere_core::curvature::random_derivative_jet;
use smallsphere_core::mass::{self, full_expansion};
use smallsphere_core::rational::q;
use smallsphere_core::{CurvatureJet, DerivativeJet};

#[test]
fn fifty_random_jets_pass_every_entry() {
    for seed in 0..50 {
        let jet = CurvatureJet::random(seed);
        let d = random_derivative_jet(seed);
        let report = full_expansion(&format!("random:{seed}"), &jet, &d, &[]).unwrap();
        let failed: Vec<_> = report.failures().map(|e| e.name.clone()).collect();
        assert!(failed.is_empty(), "seed {seed}: {failed:?}");
    }
}

#[test]
fn single_quantity_operations_agree_with_report() {
    let jet = CurvatureJet::random(21);
    let report = full_expansion("r", &jet, &DerivativeJet::zero(), &[]).unwrap();
    assert_eq!(mass::mass_first_order(&jet).unwrap(), report.coefficients.m_dot);
    assert_eq!(mass::mass_second_order(&jet).unwrap(), report.coefficients.m_ddot);
    assert_eq!(mass::i_terms(&jet).unwrap(), report.i_terms);
    assert_eq!(mass::bulk_terms(&jet).unwrap(), report.bulk_terms);
    assert_eq!(mass::second_term(&jet).unwrap(), report.second_term);
}

#[test]
fn scaling_the_jet_scales_coefficients() {
    let jet = CurvatureJet::random(8);
    let s = q(3, 2);
    let a = full_expansion("a", &jet, &DerivativeJet::zero(), &[]).unwrap();
    let b = full_expansion("b", &jet.scaled(&s), &DerivativeJet::zero(), &[]).unwrap();
    assert_eq!(b.coefficients.m_dot, &a.coefficients.m_dot * &s);
    assert_eq!(b.coefficients.m_ddot, &a.coefficients.m_ddot * &(&s * &s));
}

#[test]
fn boundary_expansion_codazzi_on_many_jets() {
    for seed in 200..230 {
        let jet = CurvatureJet::random(seed);
        let b = BoundaryExpansion::compute(&jet).unwrap();
        assert!(b.codazzi_residual().unwrap().is_zero().unwrap());
        assert_eq!(b.k_potential, bartnik::k_potential_closed(&jet));
    }
}
