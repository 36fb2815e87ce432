//! Product quadrature on the sphere: Gauss–Legendre in `cos θ` times a
//! uniform azimuthal rule. With `n` polar and `m` azimuthal nodes it is exact
//! for polynomials of degree ≤ min(2n − 1, m − 1).

use std::f64::consts::PI;

use crate::sphere::poly::SpherePoly;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d != 0.0 { d } else { dp };
        out.push((t, 2.0 / ((1.0 - t * t) * dp * dp)));
    }
    out
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Floating approximation of `(1/4π) ∫_{S²} f` with `n` polar nodes and
/// `2n` azimuthal nodes (at least nine).
pub fn quadrature_mean(f: &SpherePoly, n: usize) -> f64 {
    let n_az = (2 * n).max(9);
    let mut acc = 0.0;
    for (t, w) in gauss_legendre(n) {
        let s = (1.0 - t * t).sqrt();
        let mut ring = 0.0;
        for k in 0..n_az {
            let phi = 2.0 * PI * k as f64 / n_az as f64;
            ring += f.eval_f64([s * phi.cos(), s * phi.sin(), t]);
        }
        acc += w * ring / n_az as f64;
    }
    acc / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in 1..12 {
            let total: f64 = gauss_legendre(n).iter().map(|(_, w)| w).sum();
            assert!((total - 2.0).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn polar_square_mean() {
        let z2 = SpherePoly::coord(2).try_mul(&SpherePoly::coord(2)).unwrap();
        assert!((quadrature_mean(&z2, 5) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn odd_monomial_vanishes() {
        let x = |i| SpherePoly::coord(i);
        let f = x(0).try_mul(&x(1)).unwrap().try_mul(&x(2)).unwrap();
        assert!(quadrature_mean(&f, 5).abs() < 1e-14);
        assert!(quadrature_mean(&x(2), 5).abs() < 1e-14);
    }
}
