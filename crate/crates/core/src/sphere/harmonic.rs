//! Spherical-harmonic splitting of polynomial functions on `S²`.
//!
//! Each homogeneous part `p` of degree `m` is written as
//! `p = h_m + |x|² h_{m−2} + |x|⁴ h_{m−4} + …` with every `h_ℓ` harmonic.
//! The harmonic head is `h_m = Σ_j c_j |x|^{2j} Δ^j p` with `c_0 = 1` and
//! `c_{j+1} = −c_j / (2(j+1)(2m−2j−1))`; the remainder divided by `|x|²` is
//! decomposed recursively. On the sphere `|x| = 1`, so the restriction of
//! `h_ℓ` is the degree-ℓ component.

use crate::rational::Rational;
use crate::sphere::poly::{Poly3, SpherePoly};

/// `(|x|²)^j · p`. Degrees stay within the cap because `2j + deg p ≤ m`.
fn times_radius_power(p: &Poly3, j: usize) -> Poly3 {
    let r2 = Poly3::radius_squared();
    let mut out = p.clone();
    for _ in 0..j {
        out = out.try_mul(&r2).expect("homogenization stays within degree cap");
    }
    out
}

fn sum(terms: impl Iterator<Item = Poly3>) -> Poly3 {
    let mut acc = Poly3::zero();
    for t in terms {
        for (m, c) in t.terms() {
            acc.add_term(m, c);
        }
    }
    acc
}

/// Split a homogeneous polynomial of degree `m` into harmonic pieces,
/// returned as `(ℓ, h_ℓ)` with `ℓ = m, m−2, …`.
fn split_homogeneous(p: &Poly3, m: usize) -> Vec<(usize, Poly3)> {
    if p.is_zero() {
        return Vec::new();
    }
    let mut coeffs = vec![Rational::one()];
    let mut laps = vec![p.clone()];
    for j in 0..m / 2 {
        let denom = 2 * (j + 1) as i64 * (2 * m as i64 - 2 * j as i64 - 1);
        let next = -&coeffs[j] * Rational::frac(1, denom);
        coeffs.push(next);
        laps.push(laps[j].laplacian());
    }
    let head = sum(
        (0..coeffs.len()).map(|j| times_radius_power(&laps[j], j).scale(&coeffs[j])),
    );
    // (p − h_m)/|x|² = −Σ_{j≥1} c_j |x|^{2j−2} Δ^j p
    let rest = sum(
        (1..coeffs.len()).map(|j| times_radius_power(&laps[j], j - 1).scale(&-&coeffs[j])),
    );
    let mut out = vec![(m, head)];
    if m >= 2 {
        out.extend(split_homogeneous(&rest, m - 2));
    }
    out
}

/// Components `(ℓ, f_ℓ)` of `f`, ascending in ℓ, omitting zero components.
/// Each `f_ℓ` satisfies `Δ̃ f_ℓ = −ℓ(ℓ+1) f_ℓ` and the components sum to `f`.
pub fn harmonic_decompose(f: &SpherePoly) -> Vec<(usize, SpherePoly)> {
    let degree = f.degree();
    let mut by_ell: Vec<Poly3> = vec![Poly3::zero(); degree + 1];
    for n in 0..=degree {
        let part = f.poly().homogeneous_part(n);
        for (ell, h) in split_homogeneous(&part, n) {
            for (m, c) in h.terms() {
                by_ell[ell].add_term(m, c);
            }
        }
    }
    by_ell
        .into_iter()
        .enumerate()
        .map(|(ell, p)| (ell, SpherePoly::from_poly(&p)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn constant_is_pure_monopole() {
        let c = SpherePoly::constant(q(5, 7));
        assert_eq!(harmonic_decompose(&c), vec![(0, c)]);
        assert!(harmonic_decompose(&SpherePoly::zero()).is_empty());
    }

    #[test]
    fn quadratic_form_splits_into_trace_and_tracefree() {
        // Ric = diag(1, 2, 3) plus an off-diagonal entry.
        let mut ric: [[Rational; 3]; 3] = Default::default();
        ric[0][0] = q(1, 1);
        ric[1][1] = q(2, 1);
        ric[2][2] = q(3, 1);
        ric[0][1] = q(1, 2);
        ric[1][0] = q(1, 2);
        let f = SpherePoly::quadratic_form(&ric);
        let parts = harmonic_decompose(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (0, SpherePoly::constant(q(2, 1))));
        assert_eq!(parts[1].0, 2);
        assert_eq!(parts[1].1, &f - &SpherePoly::constant(q(2, 1)));
    }

    #[test]
    fn components_are_eigenfunctions() {
        let x = |i| SpherePoly::coord(i);
        let f = &(&x(0).try_mul(&x(0)).unwrap().try_mul(&x(1)).unwrap().try_mul(&x(2)).unwrap()
            + &x(2).scale(&q(3, 2)))
            + &x(1).try_mul(&x(1)).unwrap().try_mul(&x(1)).unwrap();
        let parts = harmonic_decompose(&f);
        let mut total = SpherePoly::zero();
        for (ell, p) in &parts {
            let lambda = Rational::from_int(-((ell * (ell + 1)) as i64));
            assert_eq!(p.laplacian(), p.scale(&lambda), "l = {ell}");
            total = &total + p;
        }
        assert_eq!(total, f);
    }
}
