use smallsphere_core::rational::q;
use smallsphere_core::{CurvatureJet, Rational};

/// `g_ij(x) = δ_ij − (1/3) R_ikjl x^k x^l + (2/45) R_ikpl R_jmpn x^k x^l x^m x^n`.
#[derive(Clone, Debug)]
pub struct NormalCoordMetric {
    jet: CurvatureJet,
    rm: [[[[f64; 3]; 3]; 3]; 3],
}

impl NormalCoordMetric {
    pub fn new(jet: CurvatureJet) -> Self {
        let mut rm = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        rm[i][j][k][l] = jet.rm[i][j][k][l].to_f64();
                    }
                }
            }
        }
        Self { jet, rm }
    }

    pub fn jet(&self) -> &CurvatureJet {
        &self.jet
    }

    pub fn eval(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        // m[i][p] = R_ikpl x^k x^l
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for p in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        acc += self.rm[i][k][p][l] * x[k] * x[l];
                    }
                }
                m[i][p] = acc;
            }
        }
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let quartic: f64 = (0..3).map(|p| m[i][p] * m[j][p]).sum();
                g[i][j] = f64::from(u8::from(i == j)) - m[i][j] / 3.0 + 2.0 / 45.0 * quartic;
            }
        }
        g
    }

    /// Largest entry of `g(x) − δ`.
    pub fn correction(&self, x: [f64; 3]) -> f64 {
        let g = self.eval(x);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((g[i][j] - f64::from(u8::from(i == j))).abs());
            }
        }
        worst
    }

    /// `max_i |g(x)x − x|_i`; zero up to rounding for a genuine jet.
    pub fn gauss_lemma_residual(&self, x: [f64; 3]) -> f64 {
        let g = self.eval(x);
        (0..3)
            .map(|i| ((0..3).map(|j| g[i][j] * x[j]).sum::<f64>() - x[i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Halve the jet until the metric correction on the sphere of radius `r` is at
/// most `bound` at every sample direction. Returns the scaled jet and the
/// factor applied.
pub fn scale_to_radius(
    jet: &CurvatureJet,
    r: f64,
    bound: f64,
    directions: &[[f64; 3]],
) -> (CurvatureJet, Rational) {
    let mut factor = Rational::one();
    let mut current = jet.clone();
    for _ in 0..64 {
        let m = NormalCoordMetric::new(current.clone());
        let worst = directions
            .iter()
            .map(|d| m.correction([r * d[0], r * d[1], r * d[2]]))
            .fold(0.0, f64::max);
        if worst <= bound {
            break;
        }
        factor = &factor * &q(1, 2);
        current = jet.scaled(&factor);
    }
    (current, factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_metric_is_identity() {
        let m = NormalCoordMetric::new(CurvatureJet::flat());
        assert_eq!(m.correction([0.3, -0.1, 0.2]), 0.0);
    }

    #[test]
    fn gauss_lemma_holds() {
        let m = NormalCoordMetric::new(CurvatureJet::random(4));
        for x in [[0.1, 0.2, -0.05], [0.0, -0.13, 0.07], [0.11, 0.0, 0.0]] {
            assert!(m.gauss_lemma_residual(x) < 1e-14);
        }
    }

    #[test]
    fn scaling_meets_bound() {
        let dirs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.6, 0.8, 0.0]];
        let jet = CurvatureJet::random(1).scaled(&q(50, 1));
        let (scaled, f) = scale_to_radius(&jet, 0.16, 0.1, &dirs);
        assert!(f < Rational::one());
        let m = NormalCoordMetric::new(scaled);
        assert!(dirs.iter().all(|d| m.correction(d.map(|c| 0.16 * c)) <= 0.1));
    }
}
