use nalgebra::DMatrix;
use smallsphere_core::{Error, Result};

/// Per-node least-squares fit of samples to `c₀ + c₁ r² + c₂ r⁴ + c₃ r⁶`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    /// `coefficients[node] = [c₀, c₁, c₂, c₃]`.
    pub coefficients: Vec<[f64; 4]>,
    /// Euclidean norm of the fit residual at each node.
    pub residuals: Vec<f64>,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
    pub ill_conditioned: bool,
}

const TERMS: usize = 4;
const MAX_CONDITION: f64 = 1e10;

/// `samples[k][node]` is the value at `radii[k]`.
pub fn fit_expansion(radii: &[f64], samples: &[Vec<f64>]) -> Result<FitResult> {
    if radii.len() < TERMS {
        return Err(Error::Input(format!("need at least {TERMS} radii, got {}", radii.len())));
    }
    if samples.len() != radii.len() {
        return Err(Error::Input("one sample vector per radius required".into()));
    }
    let n_nodes = samples[0].len();
    if samples.iter().any(|s| s.len() != n_nodes) {
        return Err(Error::Input("sample vectors differ in length".into()));
    }
    let eps_max = radii.iter().map(|r| r * r).fold(0.0, f64::max);
    let design = DMatrix::from_fn(radii.len(), TERMS, |k, j| (radii[k] * radii[k] / eps_max).powi(j as i32));
    let rhs = DMatrix::from_fn(radii.len(), n_nodes, |k, n| samples[k][n]);

    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    let solution = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Input(format!("fit failed: {e}")))?;
    let residual = &design * &solution - &rhs;

    let mut coefficients = Vec::with_capacity(n_nodes);
    let mut residuals = Vec::with_capacity(n_nodes);
    for n in 0..n_nodes {
        let mut c = [0.0; TERMS];
        for (j, cj) in c.iter_mut().enumerate() {
            *cj = solution[(j, n)] / eps_max.powi(j as i32);
        }
        coefficients.push(c);
        residuals.push(residual.column(n).norm());
    }
    Ok(FitResult {
        coefficients,
        residuals,
        condition,
        ill_conditioned: !(condition.is_finite() && condition < MAX_CONDITION),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cubic_in_r_squared() {
        let radii = [0.16, 0.08, 0.04, 0.02];
        let f = |r: f64| 2.0 - 0.5 * r * r + 3.0 * r.powi(4) - 7.0 * r.powi(6);
        let samples: Vec<Vec<f64>> = radii.iter().map(|&r| vec![f(r), 2.0 * f(r)]).collect();
        let fit = fit_expansion(&radii, &samples).unwrap();
        let c = fit.coefficients[0];
        assert!((c[0] - 2.0).abs() < 1e-12);
        assert!((c[1] + 0.5).abs() < 1e-9);
        assert!((c[2] - 3.0).abs() < 1e-6);
        assert!((fit.coefficients[1][1] + 1.0).abs() < 1e-9);
        assert!(!fit.ill_conditioned);
    }

    #[test]
    fn too_few_radii() {
        assert!(fit_expansion(&[0.1, 0.05], &[vec![1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn repeated_radii_are_flagged() {
        let radii = [0.1, 0.1, 0.05, 0.02];
        let samples = vec![vec![1.0]; 4];
        let fit = fit_expansion(&radii, &samples).unwrap();
        assert!(fit.ill_conditioned);
    }
}
