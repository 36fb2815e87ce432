//! Boundary data of rescaled geodesic spheres and the linearized static
//! exterior problem.
//!
//! With `ρ = R_ij X^i X^j`, the first-order data are
//! `σ̇_ab = −(1/3) R_ikjl X^k X^l ∂_aX^i ∂_bX^j` and `Ḣ = −ρ/3`; the second
//! order metric term (curvature-squared part only) is
//! `σ̈_ab = (2/45) R_ikpl R_jmpn X^k X^l X^m X^n ∂_aX^i ∂_bX^j`.
//!
//! Everything downstream of these two tensors is computed by sphere calculus
//! (operator paths) and then compared with the known closed forms.

use crate::curvature::{CurvatureJet, Tensor4};
use crate::error::{Error, Result};
use crate::rational::{q, Rational};
use crate::sphere::{harmonic_decompose, Mat3, SpherePoly, TangentField1, TangentField2};

/// `R_ij X^i X^j`.
pub fn ricci_form(jet: &CurvatureJet) -> SpherePoly {
    SpherePoly::quadratic_form(&jet.ric)
}

/// `R_ij (X^i X^j − δ^ij/3)`: the ℓ = 2 part of the Ricci form.
pub fn tracefree_ricci_form(jet: &CurvatureJet) -> SpherePoly {
    &ricci_form(jet) - &SpherePoly::constant(&jet.scalar * &q(1, 3))
}

/// `M_ip = Σ_kl R_ikpl X^k X^l`.
fn curvature_operator(jet: &CurvatureJet) -> Mat3 {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for p in 0..3 {
            let mut c: [[Rational; 3]; 3] = Default::default();
            for k in 0..3 {
                for l in 0..3 {
                    c[k][l] = jet.rm[i][k][p][l].clone();
                }
            }
            out[i][p] = SpherePoly::quadratic_form(&c);
        }
    }
    out
}

pub(crate) fn mat_mul(a: &Mat3, b: &Mat3) -> Result<Mat3> {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = SpherePoly::zero();
            for k in 0..3 {
                acc = &acc + &a[i][k].try_mul(&b[k][j])?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

fn mat_lin(a: &Mat3, sa: &Rational, b: &Mat3, sb: &Rational) -> Mat3 {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = &a[i][j].scale(sa) + &b[i][j].scale(sb);
        }
    }
    out
}

pub(crate) fn tangential_trace(m: &Mat3) -> Result<SpherePoly> {
    TangentField2::from_ambient(m.clone()).trace()
}

/// `σ̇`.
pub fn sigma_dot(jet: &CurvatureJet) -> TangentField2 {
    let m = curvature_operator(jet);
    TangentField2::from_ambient(m.map(|row| row.map(|p| p.scale(&q(-1, 3)))))
}

/// `σ̈` (curvature-squared part).
pub fn sigma_ddot(jet: &CurvatureJet) -> Result<TangentField2> {
    let m = curvature_operator(jet);
    let mut p: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = SpherePoly::zero();
            for k in 0..3 {
                acc = &acc + &m[i][k].try_mul(&m[j][k])?;
            }
            p[i][j] = acc.scale(&q(2, 45));
        }
    }
    Ok(TangentField2::from_ambient(p))
}

/// `Ḣ = −ρ/3`.
pub fn h_dot(jet: &CurvatureJet) -> SpherePoly {
    ricci_form(jet).scale(&q(-1, 3))
}

/// `Ḧ = −(1/45) R_ikjl R_imjn X^k X^l X^m X^n`.
pub fn h_ddot_closed(jet: &CurvatureJet) -> SpherePoly {
    let mut c: Tensor4 = Default::default();
    for k in 0..3 {
        for l in 0..3 {
            for m in 0..3 {
                for n in 0..3 {
                    let mut acc = Rational::zero();
                    for i in 0..3 {
                        for j in 0..3 {
                            acc += &jet.rm[i][k][j][l] * &jet.rm[i][m][j][n];
                        }
                    }
                    c[k][l][m][n] = acc;
                }
            }
        }
    }
    SpherePoly::quartic_form(&c).scale(&q(-1, 45))
}

/// Rescaled mean curvature `2 + ε Ḣ + ε² Ḧ` (`ε = r²`) of the sphere whose
/// induced metric is `G(ε) = I + ε A₁ + ε² A₂` in ambient tangential form.
///
/// `H = tr(G⁻¹ (G + ε G'))` with `G⁻¹ = I − εA₁ + ε²(A₁² − A₂) + …`, so the
/// coefficients are `tr A₁` and `2 tr A₂ − tr A₁²`.
pub fn mean_curvature_series(a1: &Mat3, a2: &Mat3) -> Result<(SpherePoly, SpherePoly)> {
    let a1_sq = mat_mul(a1, a1)?;
    let first = tangential_trace(a1)?;
    let second = tangential_trace(&mat_lin(a2, &q(2, 1), &a1_sq, &q(-1, 1)))?;
    Ok((first, second))
}

/// `Ḧ` recomputed from the metric series and compared with the closed form.
pub fn h_ddot(jet: &CurvatureJet) -> Result<SpherePoly> {
    let closed = h_ddot_closed(jet);
    let series = h_ddot_series(jet)?;
    ensure_equal("HDdot", &series, &closed)?;
    Ok(closed)
}

fn h_ddot_series(jet: &CurvatureJet) -> Result<SpherePoly> {
    let s1 = sigma_dot(jet);
    let s2 = sigma_ddot(jet)?;
    let (_, hdd) = mean_curvature_series(&s1.ambient, &s2.ambient)?;
    Ok(hdd)
}

fn ensure_equal(name: &str, computed: &SpherePoly, expected: &SpherePoly) -> Result<()> {
    if computed != expected {
        return Err(Error::Verification {
            name: name.into(),
            computed: computed.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(())
}

/// Which linearization of the Gauss curvature to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussVariation {
    /// `δK = ½(∇̃^a∇̃^b h_ab − Δ̃ tr h − tr h)`.
    Standard,
    /// The same with `+Δ̃ tr h`.
    PlusLaplacianTrace,
}

/// First variation of the Gauss curvature of the round unit sphere in the
/// direction `h`.
pub fn gauss_curvature_variation(h: &TangentField2, variant: GaussVariation) -> Result<SpherePoly> {
    let tr = h.trace()?;
    let lap = tr.laplacian();
    let lap = match variant {
        GaussVariation::Standard => -&lap,
        GaussVariation::PlusLaplacianTrace => lap,
    };
    Ok((&(&h.divdiv()? + &lap) - &tr).scale(&q(1, 2)))
}

/// `K̇ = R/2 − (4/3)ρ`.
pub fn k_dot_closed(jet: &CurvatureJet) -> SpherePoly {
    &SpherePoly::constant(&jet.scalar * &q(1, 2)) - &ricci_form(jet).scale(&q(4, 3))
}

/// `K̇` from the operator path, compared with the closed form.
pub fn k_dot(jet: &CurvatureJet) -> Result<SpherePoly> {
    let op = gauss_curvature_variation(&sigma_dot(jet), GaussVariation::Standard)?;
    ensure_equal("KDot", &op, &k_dot_closed(jet))?;
    Ok(op)
}

/// Boundary coefficient convention for the exterior operator `Δ̃ + 2∂_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCoefficients {
    /// `c_ℓ = −ℓ(ℓ+1) − 2(ℓ+1)` from acting on `φ_ℓ s^{−(ℓ+1)}`.
    FirstPrinciples,
    /// `c₀ = −2`, `c_ℓ = −ℓ(ℓ+2)` for ℓ ≥ 1.
    InlineDisplay,
}

impl BoundaryCoefficients {
    pub fn coefficient(self, ell: usize) -> Rational {
        let l = ell as i64;
        match self {
            Self::FirstPrinciples => Rational::from_int(-l * (l + 1) - 2 * (l + 1)),
            Self::InlineDisplay if ell == 0 => Rational::from_int(-2),
            Self::InlineDisplay => Rational::from_int(-l * (l + 2)),
        }
    }
}

/// Decaying harmonic function `u = Σ φ_ℓ s^{−(ℓ+1)}` on `s ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicExterior {
    pub components: Vec<(usize, SpherePoly)>,
}

impl HarmonicExterior {
    /// `u` at `s = 1`.
    pub fn boundary_value(&self) -> SpherePoly {
        self.components
            .iter()
            .fold(SpherePoly::zero(), |acc, (_, p)| &acc + p)
    }

    /// `∂_s u` at `s = 1`: `Σ −(ℓ+1) φ_ℓ`.
    pub fn normal_derivative(&self) -> SpherePoly {
        self.components.iter().fold(SpherePoly::zero(), |acc, (ell, p)| {
            &acc + &p.scale(&Rational::from_int(-(*ell as i64 + 1)))
        })
    }

    pub fn eval_f64(&self, x: [f64; 3], s: f64) -> f64 {
        self.components
            .iter()
            .map(|(ell, p)| p.eval_f64(x) * s.powi(-(*ell as i32 + 1)))
            .sum()
    }
}

/// Solve `Δ̃u + 2∂_s u = rhs` at `s = 1` for a decaying exterior harmonic `u`.
pub fn exterior_solve(rhs: &SpherePoly) -> Result<HarmonicExterior> {
    exterior_solve_with(rhs, BoundaryCoefficients::FirstPrinciples)
}

pub fn exterior_solve_with(
    rhs: &SpherePoly,
    convention: BoundaryCoefficients,
) -> Result<HarmonicExterior> {
    let mut components = Vec::new();
    for (ell, part) in harmonic_decompose(rhs) {
        let c = convention.coefficient(ell);
        if c.is_zero() {
            return Err(Error::NoSolution { ell });
        }
        components.push((ell, part.scale(&c.inv()?)));
    }
    Ok(HarmonicExterior { components })
}

/// Closed forms `V̇ = −R/9 + ρ/12` and `(∂V/∂ν)˙ = R/6 − ρ/4`.
pub fn v_dot_closed(jet: &CurvatureJet) -> (SpherePoly, SpherePoly) {
    let rho = ricci_form(jet);
    let v = &SpherePoly::constant(&jet.scalar * &q(-1, 9)) + &rho.scale(&q(1, 12));
    let dv = &SpherePoly::constant(&jet.scalar * &q(1, 6)) - &rho.scale(&q(1, 4));
    (v, dv)
}

fn v_dot_operator(jet: &CurvatureJet, k_dot: &SpherePoly) -> Result<HarmonicExterior> {
    exterior_solve(&(k_dot - &h_dot(jet)))
}

/// `(V̇, (∂V/∂ν)˙)` from the exterior solve, compared with the closed forms.
pub fn v_dot(jet: &CurvatureJet) -> Result<(SpherePoly, SpherePoly)> {
    let ext = v_dot_operator(jet, &k_dot(jet)?)?;
    let (v, dv) = (ext.boundary_value(), ext.normal_derivative());
    let (vc, dvc) = v_dot_closed(jet);
    ensure_equal("VDot", &v, &vc)?;
    ensure_equal("dVdnuDot", &dv, &dvc)?;
    Ok((v, dv))
}

/// `k = (1/12) R_ij (X^i X^j − δ^ij/3)`.
pub fn k_potential_closed(jet: &CurvatureJet) -> SpherePoly {
    tracefree_ricci_form(jet).scale(&q(1, 12))
}

/// `ḣ = ½ tr ḣ σ̃ + ∇̃∇̃k − ½ Δ̃k σ̃`.
pub fn h_dot_from_potential(trace: &SpherePoly, k: &SpherePoly) -> TangentField2 {
    let half = q(1, 2);
    let traceless = &TangentField2::hessian(k)
        - &TangentField2::conformal(k.laplacian().scale(&half));
    &TangentField2::conformal(trace.scale(&half)) + &traceless
}

/// Residual of the linearized Codazzi equation
/// `∇̃·ḣ − ∇̃·σ̇ − ∇̃Ḣ − ∇̃((∂V/∂ν)˙ − V̇)`.
pub fn codazzi_residual(
    h: &TangentField2,
    s: &TangentField2,
    h_dot: &SpherePoly,
    v: &SpherePoly,
    dv: &SpherePoly,
) -> Result<TangentField1> {
    let lhs = &(&h.divergence()? - &s.divergence()?) - &TangentField1::gradient(h_dot);
    Ok(&lhs - &TangentField1::gradient(&(dv - v)))
}

/// Solve for the potential `k` of the traceless part of `ḣ`.
///
/// Taking the divergence of the Codazzi balance with `ḣ` of the form above
/// gives `½ Δ̃(Δ̃+2) k = ∇̃·∇̃·σ̇ + Δ̃(Ḣ + (∂V/∂ν)˙ − V̇ − ½ tr ḣ)`, solved
/// mode by mode. The ℓ = 0, 1 modes do not affect `ḣ` and are set to zero.
pub fn solve_k_potential(
    s: &TangentField2,
    trace_h: &SpherePoly,
    h_dot: &SpherePoly,
    v: &SpherePoly,
    dv: &SpherePoly,
) -> Result<SpherePoly> {
    let scalar = &(&(h_dot + dv) - v) - &trace_h.scale(&q(1, 2));
    let rhs = &s.divdiv()? + &scalar.laplacian();
    let mut k = SpherePoly::zero();
    for (ell, part) in harmonic_decompose(&rhs) {
        let lam = Rational::from_int(-((ell * (ell + 1)) as i64));
        let symbol = &lam * &(&lam + &Rational::from_int(2)) * q(1, 2);
        if symbol.is_zero() {
            // Solvability: a divergence has no ℓ = 0 or ℓ = 1 content here.
            if !part.is_zero() {
                return Err(Error::NoSolution { ell });
            }
            continue;
        }
        k = &k + &part.scale(&symbol.inv()?);
    }
    Ok(k)
}

/// Everything on the boundary sphere, computed along operator paths.
#[derive(Clone, Debug)]
pub struct BoundaryExpansion {
    pub sigma_dot: TangentField2,
    pub sigma_ddot: TangentField2,
    pub h_dot: SpherePoly,
    pub h_ddot: SpherePoly,
    pub k_dot: SpherePoly,
    pub v_dot: SpherePoly,
    pub dvdnu_dot: SpherePoly,
    pub hdot_tensor: TangentField2,
    pub k_potential: SpherePoly,
    pub exterior: HarmonicExterior,
}

impl BoundaryExpansion {
    /// Compute all boundary quantities without comparing to closed forms.
    pub fn compute(jet: &CurvatureJet) -> Result<Self> {
        let sigma_dot = sigma_dot(jet);
        let sigma_ddot = sigma_ddot(jet)?;
        let (h_first, h_ddot) = mean_curvature_series(&sigma_dot.ambient, &sigma_ddot.ambient)?;
        let k_dot = gauss_curvature_variation(&sigma_dot, GaussVariation::Standard)?;
        let exterior = exterior_solve(&(&k_dot - &h_first))?;
        let v_dot = exterior.boundary_value();
        let dvdnu_dot = exterior.normal_derivative();
        // Ḣ = tr(ḣ − σ̇)
        let trace_h = &h_first + &sigma_dot.trace()?;
        let k_potential = solve_k_potential(&sigma_dot, &trace_h, &h_first, &v_dot, &dvdnu_dot)?;
        let hdot_tensor = h_dot_from_potential(&trace_h, &k_potential);
        Ok(Self {
            sigma_dot,
            sigma_ddot,
            h_dot: h_first,
            h_ddot,
            k_dot,
            v_dot,
            dvdnu_dot,
            hdot_tensor,
            k_potential,
            exterior,
        })
    }

    pub fn codazzi_residual(&self) -> Result<TangentField1> {
        codazzi_residual(
            &self.hdot_tensor,
            &self.sigma_dot,
            &self.h_dot,
            &self.v_dot,
            &self.dvdnu_dot,
        )
    }

    /// `½ ∇̃(Δ̃+2)k + (1/6) ∇̃ R_ij(X^iX^j − δ^ij/3)`.
    pub fn solving_equation_residual(&self, jet: &CurvatureJet) -> TangentField1 {
        let k = &self.k_potential;
        let lhs = TangentField1::gradient(&(&k.laplacian() + &k.scale(&q(2, 1))).scale(&q(1, 2)));
        let rhs = TangentField1::gradient(&tracefree_ricci_form(jet).scale(&q(-1, 6)));
        &lhs - &rhs
    }
}

/// `ḣ` and `k`, verified against the closed forms, the solving equation and
/// the Codazzi balance.
pub fn h_dot_tensor(jet: &CurvatureJet) -> Result<(TangentField2, SpherePoly)> {
    let b = BoundaryExpansion::compute(jet)?;
    ensure_equal("k", &b.k_potential, &k_potential_closed(jet))?;
    ensure_equal("trace hDot", &b.hdot_tensor.trace()?, &ricci_form(jet).scale(&q(-2, 3)))?;
    if !b.solving_equation_residual(jet).is_zero()? {
        return Err(Error::Verification {
            name: "k solving equation".into(),
            computed: "nonzero residual".into(),
            expected: "0".into(),
        });
    }
    let residual = b.codazzi_residual()?;
    if !residual.is_zero()? {
        return Err(Error::Verification {
            name: "Codazzi residual".into(),
            computed: format!("{:?}", residual.projected()?),
            expected: "0".into(),
        });
    }
    Ok((b.hdot_tensor, b.k_potential))
}

/// First-order perturbation of the Laplace–Beltrami operator,
/// `Δ̇f = ½⟨∇̃ tr s, ∇̃f⟩ − ∇̃_a(s^{ab} ∇̃_b f)`.
pub fn laplace_perturbation(f: &SpherePoly, s: &TangentField2) -> Result<SpherePoly> {
    let first = s.trace()?.grad_pair(f)?.scale(&q(1, 2));
    let flux = s.apply(&TangentField1::gradient(f))?;
    Ok(&first - &flux.divergence()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::riemann_from_ricci;

    fn round() -> CurvatureJet {
        CurvatureJet::round(&Rational::one()).unwrap()
    }

    fn c(v: Rational) -> SpherePoly {
        SpherePoly::constant(v)
    }

    #[test]
    fn flat_everything_vanishes() {
        let b = BoundaryExpansion::compute(&CurvatureJet::flat()).unwrap();
        assert!(b.sigma_dot.is_zero().unwrap());
        assert!(b.sigma_ddot.is_zero().unwrap());
        for p in [&b.h_dot, &b.h_ddot, &b.k_dot, &b.v_dot, &b.dvdnu_dot, &b.k_potential] {
            assert!(p.is_zero());
        }
        assert!(b.hdot_tensor.is_zero().unwrap());
    }

    #[test]
    fn round_sphere_values() {
        let j = round();
        assert_eq!(sigma_dot(&j).trace().unwrap(), c(q(-2, 3)));
        assert_eq!(h_dot(&j), c(q(-2, 3)));
        assert_eq!(k_dot(&j).unwrap(), c(q(1, 3)));
        let (v, dv) = v_dot(&j).unwrap();
        assert_eq!(v, c(q(-1, 2)));
        assert_eq!(dv, c(q(1, 2)));
        let (h, k) = h_dot_tensor(&j).unwrap();
        assert!(k.is_zero());
        assert!((&h - &TangentField2::round_metric().scale(&q(-2, 3))).is_zero().unwrap());
        // mean of Ḧ = −(2/90) A with A = 2
        assert_eq!(h_ddot(&j).unwrap().integrate_mean(), q(-2, 45));
    }

    #[test]
    fn random_jets_dual_paths() {
        for seed in 100..106 {
            let j = CurvatureJet::random(seed);
            assert_eq!(sigma_dot(&j).trace().unwrap(), h_dot(&j));
            k_dot(&j).unwrap();
            v_dot(&j).unwrap();
            h_ddot(&j).unwrap();
            h_dot_tensor(&j).unwrap();
        }
    }

    #[test]
    fn divergence_of_sigma_dot() {
        let j = CurvatureJet::random(7);
        let s = sigma_dot(&j);
        let expected = TangentField1::gradient(&ricci_form(&j).scale(&q(1, 6)));
        assert!((&s.divergence().unwrap() - &expected).is_zero().unwrap());
        assert_eq!(s.divdiv().unwrap(), -&tracefree_ricci_form(&j));
    }

    #[test]
    fn gauss_variation_conformal_case() {
        // h = 2u σ̃ gives δK = −Δ̃u − 2u.
        let u = &SpherePoly::coord(0).try_mul(&SpherePoly::coord(1)).unwrap() + &SpherePoly::coord(2);
        let h = TangentField2::conformal(u.scale(&q(2, 1)));
        let dk = gauss_curvature_variation(&h, GaussVariation::Standard).unwrap();
        assert_eq!(dk, &(-&u.laplacian()) - &u.scale(&q(2, 1)));
    }

    #[test]
    fn displayed_gauss_variation_misses_closed_form() {
        let j = CurvatureJet::random(5);
        let alt = gauss_curvature_variation(&sigma_dot(&j), GaussVariation::PlusLaplacianTrace).unwrap();
        assert_ne!(alt, k_dot_closed(&j));
        // It lands on 2ρ/3 − R/6 instead.
        let expected = &ricci_form(&j).scale(&q(2, 3)) - &c(&j.scalar * &q(1, 6));
        assert_eq!(alt, expected);
    }

    #[test]
    fn exterior_solve_examples() {
        let j = CurvatureJet::random(9);
        let r = j.scalar.clone();
        let mono = exterior_solve(&c(&r * &q(1, 6))).unwrap();
        assert_eq!(mono.components, vec![(0, c(&r * &q(-1, 12)))]);
        let quad = exterior_solve(&-&tracefree_ricci_form(&j)).unwrap();
        assert_eq!(quad.components, vec![(2, tracefree_ricci_form(&j).scale(&q(1, 12)))]);
        assert!(exterior_solve(&SpherePoly::zero()).unwrap().components.is_empty());
    }

    #[test]
    fn inline_boundary_coefficients_disagree_at_quadrupole() {
        let j = CurvatureJet::random(2);
        let rhs = &k_dot_closed(&j) - &h_dot(&j);
        let ext = exterior_solve_with(&rhs, BoundaryCoefficients::InlineDisplay).unwrap();
        assert_ne!(ext.boundary_value(), v_dot_closed(&j).0);
        assert_eq!(BoundaryCoefficients::FirstPrinciples.coefficient(0), q(-2, 1));
        assert_eq!(BoundaryCoefficients::FirstPrinciples.coefficient(2), q(-12, 1));
        assert_eq!(BoundaryCoefficients::InlineDisplay.coefficient(2), q(-8, 1));
    }

    #[test]
    fn einstein_jet_has_trivial_potential() {
        let j = riemann_from_ricci(&crate::curvature::scalar_sym3(&q(2, 1))).unwrap();
        let k = k_potential_closed(&j);
        assert!(k.is_zero());
        assert!(TangentField2::hessian(&k).is_zero().unwrap());
    }

    #[test]
    fn laplace_perturbation_examples() {
        let f = SpherePoly::coord(0).try_mul(&SpherePoly::coord(2)).unwrap();
        let s = TangentField2::round_metric();
        // Δ for (1+ε)σ̃ is (1+ε)^{-1}Δ̃, first order −Δ̃f.
        assert_eq!(laplace_perturbation(&f, &s).unwrap(), -&f.laplacian());
        let sd = sigma_dot(&CurvatureJet::random(4));
        assert!(laplace_perturbation(&c(q(3, 1)), &sd).unwrap().is_zero());
    }
}
