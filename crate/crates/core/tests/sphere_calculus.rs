use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallsphere_core::rational::q;
use smallsphere_core::sphere::{
    harmonic_decompose, monomial_mean, quadrature_mean, Mono, Poly3, MAX_DEGREE,
};
use smallsphere_core::{Rational, SpherePoly, TangentField1, TangentField2};

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> SpherePoly {
    let mut p = Poly3::zero();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                if rng.gen_bool(0.6) {
                    let v = q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
                    p.add_term([a as u8, b as u8, c as u8], &v);
                }
            }
        }
    }
    SpherePoly::from_poly(&p)
}

fn arb_poly(max_degree: usize) -> impl Strategy<Value = SpherePoly> {
    (any::<u64>(), 0..=max_degree).prop_map(|(seed, d)| random_poly(&mut ChaCha8Rng::seed_from_u64(seed), d))
}

#[test]
fn second_and_fourth_moments() {
    let delta = |i: usize, j: usize| if i == j { 1 } else { 0 };
    for i in 0..3 {
        for j in 0..3 {
            let mut m: Mono = [0; 3];
            m[i] += 1;
            m[j] += 1;
            assert_eq!(monomial_mean(m), q(delta(i, j), 3));
            for k in 0..3 {
                for l in 0..3 {
                    let mut m4 = m;
                    m4[k] += 1;
                    m4[l] += 1;
                    let e = delta(i, j) * delta(k, l) + delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k);
                    assert_eq!(monomial_mean(m4), q(e, 15));
                }
            }
        }
    }
}

#[test]
fn odd_monomials_vanish() {
    for a in 0..=MAX_DEGREE as u8 {
        for b in 0..=MAX_DEGREE as u8 - a {
            for c in 0..=MAX_DEGREE as u8 - a - b {
                if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
                    assert!(monomial_mean([a, b, c]).is_zero());
                }
            }
        }
    }
}

#[test]
fn quadrature_agrees_with_exact_means() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for degree in 0..=MAX_DEGREE {
        for _ in 0..100 {
            let p = random_poly(&mut rng, degree);
            let exact = p.integrate_mean().to_f64();
            let numeric = quadrature_mean(&p, 6);
            let scale = 1.0 + exact.abs();
            assert!((exact - numeric).abs() < 1e-12 * scale, "degree {degree}: {exact} vs {numeric}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integration_by_parts(f in arb_poly(4), g in arb_poly(4)) {
        let lhs = f.try_mul(&g.laplacian()).unwrap().integrate_mean();
        let rhs = -f.grad_pair(&g).unwrap().integrate_mean();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn divergence_theorem(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
        let v = TangentField1::from_ambient([a, b, c]);
        prop_assert!(v.divergence().unwrap().integrate_mean().is_zero());
    }

    #[test]
    fn tensor_divergence_integrates_to_zero(f in arb_poly(3), g in arb_poly(2)) {
        let h = &TangentField2::hessian(&f) + &TangentField2::conformal(g.clone());
        prop_assert!(h.divdiv().unwrap().integrate_mean().is_zero());
        let w = h.divergence().unwrap();
        let pairing = w.pair(&TangentField1::gradient(&g)).unwrap().integrate_mean();
        let by_parts = -h.contract(&TangentField2::hessian(&g)).unwrap().integrate_mean();
        prop_assert_eq!(pairing, by_parts);
    }

    #[test]
    fn harmonic_pieces_are_eigenfunctions(f in arb_poly(MAX_DEGREE)) {
        let parts = harmonic_decompose(&f);
        let mut sum = SpherePoly::zero();
        for (ell, p) in &parts {
            let lam = Rational::from_int(-((ell * (ell + 1)) as i64));
            prop_assert_eq!(p.laplacian(), p.scale(&lam));
            sum = &sum + p;
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn harmonic_pieces_are_orthogonal(f in arb_poly(4)) {
        let parts = harmonic_decompose(&f);
        for (i, (_, a)) in parts.iter().enumerate() {
            for (_, b) in &parts[i + 1..] {
                prop_assert!(a.try_mul(b).unwrap().integrate_mean().is_zero());
            }
        }
    }
}
