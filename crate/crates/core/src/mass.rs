//! Assembly of the `r³` and `r⁵` mass coefficients.
//!
//! Each quantity is first computed from the boundary expansion by sphere
//! calculus (`*_from` functions), and only then compared with its closed form
//! (`*_closed`). The public single-quantity operations fail with
//! [`Error::Verification`] on mismatch; [`full_expansion`] instead records every
//! comparison in a ledger so that a report can show all of them at once.

use std::fmt::Display;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::bartnik::{
    self, gauss_curvature_variation, mat_mul, tangential_trace, BoundaryCoefficients,
    BoundaryExpansion, GaussVariation,
};
use crate::curvature::{CurvatureJet, DerivativeJet};
use crate::error::{Error, Result};
use crate::rational::{q, Rational};
use crate::sphere::{SpherePoly, TangentField2};

fn mean(p: &SpherePoly) -> Rational {
    p.integrate_mean()
}

fn mismatch(name: &str, computed: &impl Display, expected: &impl Display) -> Error {
    Error::Verification {
        name: name.into(),
        computed: computed.to_string(),
        expected: expected.to_string(),
    }
}

fn check(name: &str, computed: Rational, expected: &Rational) -> Result<Rational> {
    if &computed != expected {
        return Err(mismatch(name, &computed, expected));
    }
    Ok(computed)
}

/// `R²` and `|Rc|²`.
fn squares(jet: &CurvatureJet) -> (Rational, Rational) {
    (&jet.scalar * &jet.scalar, jet.norm_sq_ric.clone())
}

/// `ṁ` computed as `mean(K̇ − Ḣ)/2` and cross-checked against the Komar flux
/// `mean((∂V/∂ν)˙)`.
pub fn mass_first_order(jet: &CurvatureJet) -> Result<Rational> {
    let b = BoundaryExpansion::compute(jet)?;
    let (gauss, komar) = first_order_paths(&b);
    let expected = &jet.scalar * &q(1, 12);
    check("mDot (Komar)", komar, &expected)?;
    check("mDot", gauss, &expected)
}

fn first_order_paths(b: &BoundaryExpansion) -> (Rational, Rational) {
    let gauss = mean(&(&b.k_dot - &b.h_dot)) * q(1, 2);
    (gauss, mean(&b.dvdnu_dot))
}

/// `T(X⁴) = T_ijmn X^i X^j X^m X^n`.
fn derivative_quartic(d: &DerivativeJet) -> SpherePoly {
    SpherePoly::quartic_form(&d.t)
}

/// Fourth-order metric and mean-curvature perturbations carried by the second
/// derivatives of curvature, `(s, H⁽⁴⁾)`.
///
/// `s` is tangential with ambient part `−(1/20) T_ijmn X^m X^n` plus the
/// conformal part `−(1/20)(T(X⁴) − ½ T_kkmn X^m X^n) σ̃`, and
/// `H⁽⁴⁾ = −(1/10) T(X⁴)`.
pub fn grad_r_perturbation(d: &DerivativeJet) -> (TangentField2, SpherePoly) {
    let c = q(-1, 20);
    let mut ambient: crate::sphere::Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut form: [[Rational; 3]; 3] = Default::default();
            for m in 0..3 {
                for n in 0..3 {
                    form[m][n] = d.t[i][j][m][n].clone();
                }
            }
            ambient[i][j] = SpherePoly::quadratic_form(&form).scale(&c);
        }
    }
    let mut traced: [[Rational; 3]; 3] = Default::default();
    for m in 0..3 {
        for n in 0..3 {
            traced[m][n] = (0..3).map(|k| d.t[k][k][m][n].clone()).sum();
        }
    }
    let quartic = derivative_quartic(d);
    let conformal = &quartic - &SpherePoly::quadratic_form(&traced).scale(&q(1, 2));
    let s = TangentField2 {
        ambient,
        metric: conformal.scale(&c),
    };
    (s, quartic.scale(&q(-1, 10)))
}

/// Signed `r⁵` coefficient from the `∇∇Ric` terms of the metric,
/// `mean(δK(s) − H⁽⁴⁾)/2`. Its magnitude is checked against `ΔR/120`.
pub fn grad_r_contribution(d: &DerivativeJet) -> Result<Rational> {
    let g = grad_r_from(d)?;
    if g.h4_from_trace != g.h4 {
        return Err(mismatch("gradR H perturbation", &g.h4_from_trace, &g.h4));
    }
    let magnitude = &d.delta_r * &q(1, 120);
    if g.coefficient.abs() != magnitude.abs() {
        return Err(mismatch("|gradR coefficient|", &g.coefficient.abs(), &magnitude.abs()));
    }
    Ok(g.coefficient)
}

struct GradR {
    coefficient: Rational,
    h4: SpherePoly,
    h4_from_trace: SpherePoly,
    /// Mean of `H⁽⁴⁾ + ½ tr s`, which feeds the Hawking mass.
    hawking_source: Rational,
}

fn grad_r_from(d: &DerivativeJet) -> Result<GradR> {
    let (s, h4) = grad_r_perturbation(d);
    let tr = s.trace()?;
    let dk = gauss_curvature_variation(&s, GaussVariation::Standard)?;
    let coefficient = mean(&(&dk - &h4)) * q(1, 2);
    let hawking_source = mean(&(&h4 + &tr.scale(&q(1, 2))));
    Ok(GradR {
        coefficient,
        h4,
        h4_from_trace: tr.scale(&q(2, 1)),
        hawking_source,
    })
}

/// `I₁ … I₆` computed from the boundary expansion.
pub fn i_terms_from(b: &BoundaryExpansion) -> Result<[Rational; 6]> {
    Ok([
        gauss_bonnet_second_variation(b)? * q(1, 2),
        mean(&b.h_dot.try_mul(&b.h_dot)?) * q(-1, 4),
        mean(&b.h_ddot) * q(-1, 2),
        mean(&b.sigma_dot.contract(&b.sigma_dot)?) * q(1, 4),
        mean(&b.hdot_tensor.contract(&b.hdot_tensor)?) * q(1, 4),
        mean(&b.sigma_dot.contract(&b.hdot_tensor)?) * q(-1, 2),
    ])
}

/// `mean(K̈) = mean(−½K̇ tr σ̇ − ½ tr σ̈ − ⅛(tr σ̇)² + ¼|σ̇|²)`.
fn gauss_bonnet_second_variation(b: &BoundaryExpansion) -> Result<Rational> {
    let tr1 = b.sigma_dot.trace()?;
    let tr2 = b.sigma_ddot.trace()?;
    let p = &(&b.k_dot.try_mul(&tr1)?.scale(&q(-1, 2)) - &tr2.scale(&q(1, 2)))
        + &(&tr1.try_mul(&tr1)?.scale(&q(-1, 8))
            + &b.sigma_dot.contract(&b.sigma_dot)?.scale(&q(1, 4)));
    Ok(mean(&p))
}

/// Closed forms of `I₁ … I₆`.
pub fn i_terms_closed(jet: &CurvatureJet) -> Result<[Rational; 6]> {
    let (a, b) = jet.invariants_ab()?;
    let (r2, rc) = squares(jet);
    Ok([
        &r2 * &q(1, 72) + &a * &q(1, 360) - &b * &q(17, 144),
        &b * &q(-1, 36),
        &a * &q(1, 90),
        &a * &q(1, 36),
        &b * &q(11, 144) - &r2 * &q(1, 432),
        &b * &q(-1, 24) + &rc * &q(1, 108) - &r2 * &q(1, 216),
    ])
}

pub fn i_terms(jet: &CurvatureJet) -> Result<[Rational; 6]> {
    let computed = i_terms_from(&BoundaryExpansion::compute(jet)?)?;
    let closed = i_terms_closed(jet)?;
    for (n, (c, e)) in computed.iter().zip(&closed).enumerate() {
        if c != e {
            return Err(mismatch(&format!("I{}", n + 1), c, e));
        }
    }
    Ok(computed)
}

/// `mean(−½Δ̇V̇)`, `mean(½V̇(K̇ − Ḣ))`, `mean(−½Ḣ(∂V/∂ν)˙)`.
pub fn bulk_terms_from(b: &BoundaryExpansion) -> Result<[Rational; 3]> {
    let lap = bartnik::laplace_perturbation(&b.v_dot, &b.sigma_dot)?;
    Ok([
        mean(&lap) * q(-1, 2),
        mean(&b.v_dot.try_mul(&(&b.k_dot - &b.h_dot))?) * q(1, 2),
        mean(&b.h_dot.try_mul(&b.dvdnu_dot)?) * q(-1, 2),
    ])
}

pub fn bulk_terms_closed(jet: &CurvatureJet) -> [Rational; 3] {
    let (r2, rc) = squares(jet);
    [
        &rc * &q(1, 180) - &r2 * &q(1, 540),
        &r2 * &q(-11, 2160) - &rc * &q(1, 180),
        &r2 * &q(7, 1080) - &rc * &q(1, 180),
    ]
}

pub fn bulk_terms(jet: &CurvatureJet) -> Result<[Rational; 3]> {
    let computed = bulk_terms_from(&BoundaryExpansion::compute(jet)?)?;
    for (n, (c, e)) in computed.iter().zip(&bulk_terms_closed(jet)).enumerate() {
        if c != e {
            return Err(mismatch(&format!("bulk term {}", n + 1), c, e));
        }
    }
    Ok(computed)
}

/// `mean(½(∂V/∂ν)˙ tr σ̇)`.
pub fn second_term_from(b: &BoundaryExpansion) -> Result<Rational> {
    Ok(mean(&b.dvdnu_dot.try_mul(&b.sigma_dot.trace()?)?) * q(1, 2))
}

pub fn second_term_closed(jet: &CurvatureJet) -> Rational {
    let (r2, rc) = squares(jet);
    &r2 * &q(-7, 1080) + &rc * &q(1, 180)
}

pub fn second_term(jet: &CurvatureJet) -> Result<Rational> {
    let b = BoundaryExpansion::compute(jet)?;
    check("second term", second_term_from(&b)?, &second_term_closed(jet))
}

/// `|Rc|²/72 − 5R²/432`.
pub fn mass_second_order_closed(jet: &CurvatureJet) -> Rational {
    let (r2, rc) = squares(jet);
    &rc * &q(1, 72) - &r2 * &q(5, 432)
}

/// `m̈` as the second term plus the three bulk terms plus `ΣI`.
pub fn mass_second_order(jet: &CurvatureJet) -> Result<Rational> {
    let b = BoundaryExpansion::compute(jet)?;
    let total = second_term_from(&b)?
        + bulk_terms_from(&b)?.into_iter().sum::<Rational>()
        + i_terms_from(&b)?.into_iter().sum::<Rational>();
    check("mDdot", total, &mass_second_order_closed(jet))
}

/// Rescaled Hawking-mass coefficients `(ε, ε²)` from the boundary data.
///
/// With area factor `μ = 1 + εμ₁ + ε²μ₂` and `H = 2 + εḢ + ε²Ḧ`,
/// `m_H/r = ½ √(mean μ) (1 − ¼ mean(H²μ))`.
fn hawking_from(b: &BoundaryExpansion) -> Result<(Rational, Rational)> {
    let tr1 = b.sigma_dot.trace()?;
    let tr1_sq = tangential_trace(&mat_mul(&b.sigma_dot.ambient, &b.sigma_dot.ambient)?)?;
    let mu1 = tr1.scale(&q(1, 2));
    let mu2 = &(&b.sigma_ddot.trace()?.scale(&q(1, 2)) + &tr1.try_mul(&tr1)?.scale(&q(1, 8)))
        - &tr1_sq.scale(&q(1, 4));
    let w1 = mean(&(&b.h_dot + &mu1));
    let w2 = mean(&(&(&b.h_dot.try_mul(&b.h_dot)?.scale(&q(1, 4)) + &b.h_ddot)
        + &(&b.h_dot.try_mul(&mu1)? + &mu2)));
    let a1 = mean(&mu1);
    let first = &w1 * &q(-1, 2);
    let second = (w2 + &a1 * &w1 * q(1, 2)) * q(-1, 2);
    Ok((first, second))
}

/// One comparison between a computed value and its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub name: String,
    pub computed: String,
    pub paper: String,
    pub pass: bool,
}

impl LedgerEntry {
    fn new<T: Display + PartialEq>(name: &str, computed: &T, paper: &T) -> Self {
        Self {
            name: name.into(),
            computed: computed.to_string(),
            paper: paper.to_string(),
            pass: computed == paper,
        }
    }
}

/// Float with 17 significant digits in JSON.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JetSummary {
    /// Upper triangle `R11 R12 R13 R22 R23 R33`.
    pub ricci: [Rational; 6],
    pub scalar: Rational,
    pub norm_sq_ric: Rational,
    pub norm_sq_rm: Rational,
    pub delta_r: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coefficients {
    #[serde(rename = "mDot")]
    pub m_dot: Rational,
    /// Curvature-squared part of the `r⁵` coefficient.
    #[serde(rename = "mDdot")]
    pub m_ddot: Rational,
    #[serde(rename = "deltaRCoeff")]
    pub delta_r_coeff: Rational,
    #[serde(rename = "A")]
    pub a: Rational,
    #[serde(rename = "B")]
    pub b: Rational,
    #[serde(rename = "hawkingDot")]
    pub hawking_dot: Rational,
    #[serde(rename = "hawkingDdot")]
    pub hawking_ddot: Rational,
    /// `r²` and `r⁴` coefficients of `m/r`.
    pub rescaled: [Rational; 2],
    /// `r³` and `r⁵` coefficients of `m`.
    pub unscaled: [Rational; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusValue {
    pub r: Sig17,
    #[serde(rename = "static")]
    pub static_mass: Sig17,
    pub hawking: Sig17,
}

/// Full report for one jet.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MassReport {
    pub label: String,
    pub jet: JetSummary,
    pub coefficients: Coefficients,
    pub i_terms: [Rational; 6],
    pub bulk_terms: [Rational; 3],
    pub second_term: Rational,
    pub ric_nu_nu: Rational,
    pub ledger: Vec<LedgerEntry>,
    pub flags: Vec<String>,
    pub per_radius: Vec<RadiusValue>,
    pub pass: bool,
}

impl MassReport {
    pub fn failures(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.ledger.iter().filter(|e| !e.pass)
    }

    /// Unscaled expansion `m(r) = a r³ + b r⁵`.
    pub fn expansion_string(&self) -> String {
        format_r_poly(&self.coefficients.unscaled)
    }

    pub fn hawking_string(&self) -> String {
        format_r_poly(&[
            self.coefficients.hawking_dot.clone(),
            self.coefficients.hawking_ddot.clone(),
        ])
    }
}

/// `[a, b]` as `"a r^3 + b r^5"`, dropping zero terms.
pub fn format_r_poly(c: &[Rational; 2]) -> String {
    let mut out = String::new();
    for (coef, pow) in c.iter().zip([3, 5]) {
        if coef.is_zero() {
            continue;
        }
        if out.is_empty() {
            if coef.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if coef.is_negative() { " - " } else { " + " });
        }
        out.push_str(&format!("{} r^{pow}", coef.abs()));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub const GRAD_R_SIGN_FLAG: &str = "gradR-sign";
pub const KDOT_VARIANT_FLAG: &str = "kdot-display-variant";
pub const BOUNDARY_COEFF_FLAG: &str = "exterior-boundary-coefficient";

/// Every ledger entry for one jet, plus coefficients, flags and per-radius
/// values. Verification mismatches are recorded, not raised.
pub fn full_expansion(
    label: &str,
    jet: &CurvatureJet,
    d: &DerivativeJet,
    radii: &[f64],
) -> Result<MassReport> {
    let b = BoundaryExpansion::compute(jet)?;
    let (r2, rc) = squares(jet);
    let a = (&rc * &q(7, 1) - &r2 * &q(3, 2)) * q(1, 15);
    let bb = (&r2 + &rc * &q(2, 1)) * q(1, 15);
    let mut ledger = Vec::new();
    let mut push = |e: LedgerEntry| ledger.push(e);

    // Curvature jet.
    let violations = jet.symmetry_violations().join("; ");
    push(LedgerEntry::new("Rm.identities", &violations.as_str(), &""));
    let a_rm = (&rc + &jet.norm_sq_rm + jet.cross_contraction()) * q(1, 15);
    push(LedgerEntry::new("A.dual", &a_rm, &a));
    push(LedgerEntry::new("Rm.normSq", &jet.norm_sq_rm, &(&rc * &q(4, 1) - &r2)));

    // Boundary data.
    let rho = bartnik::ricci_form(jet);
    push(LedgerEntry::new("sigmaDot.trace", &b.sigma_dot.trace()?, &bartnik::h_dot(jet)));
    push(LedgerEntry::new("HDot", &b.h_dot, &rho.scale(&q(-1, 3))));
    push(LedgerEntry::new("HDdot", &b.h_ddot, &bartnik::h_ddot_closed(jet)));
    push(LedgerEntry::new("sigmaDdot.meanTrace", &mean(&b.sigma_ddot.trace()?), &(&a * &q(2, 45))));
    push(LedgerEntry::new("KDot", &b.k_dot, &bartnik::k_dot_closed(jet)));
    let (v_closed, dv_closed) = bartnik::v_dot_closed(jet);
    push(LedgerEntry::new("VDot", &b.v_dot, &v_closed));
    push(LedgerEntry::new("dVdnuDot", &b.dvdnu_dot, &dv_closed));
    push(LedgerEntry::new("k", &b.k_potential, &bartnik::k_potential_closed(jet)));
    let zero = "0".to_string();
    let solving = if b.solving_equation_residual(jet).is_zero()? { zero.clone() } else { "nonzero".into() };
    push(LedgerEntry::new("k.solvingEquation", &solving, &zero));
    let codazzi = if b.codazzi_residual()?.is_zero()? { zero.clone() } else { "nonzero".into() };
    push(LedgerEntry::new("codazzi.residual", &codazzi, &zero));

    // First order.
    let m_dot_expected = &jet.scalar * &q(1, 12);
    let (m_dot, komar) = first_order_paths(&b);
    push(LedgerEntry::new("mDot", &m_dot, &m_dot_expected));
    push(LedgerEntry::new("mDot.komar", &komar, &m_dot_expected));

    // Second order.
    let bulk = bulk_terms_from(&b)?;
    let bulk_closed = bulk_terms_closed(jet);
    for (n, name) in ["bulk.laplacePerturbation", "bulk.potentialSource", "bulk.meanCurvatureFlux"]
        .iter()
        .enumerate()
    {
        push(LedgerEntry::new(name, &bulk[n], &bulk_closed[n]));
    }
    let second = second_term_from(&b)?;
    push(LedgerEntry::new("secondTerm", &second, &second_term_closed(jet)));
    push(LedgerEntry::new(
        "gaussBonnet.meanKDdot",
        &gauss_bonnet_second_variation(&b)?,
        &(&r2 * &q(1, 36) + &a * &q(1, 180) - &bb * &q(17, 72)),
    ));
    let i_terms = i_terms_from(&b)?;
    let i_closed = i_terms_closed(jet).unwrap_or_else(|_| Default::default());
    for n in 0..6 {
        push(LedgerEntry::new(&format!("I{}", n + 1), &i_terms[n], &i_closed[n]));
    }
    let ric_nu_nu: Rational = i_terms.iter().cloned().sum();
    let ric_nu_nu_closed = &rc * &q(1, 72) - &r2 * &q(1, 216);
    push(LedgerEntry::new("ricNuNu", &ric_nu_nu, &ric_nu_nu_closed));
    let table = &r2 * &q(11, 2160) + &a * &q(1, 24) - &bb * &q(1, 12) + &rc * &q(1, 180);
    push(LedgerEntry::new("table.recombination", &table, &ric_nu_nu_closed));
    let m_ddot_temp = &r2 * &q(-1, 144) + &ric_nu_nu;
    let m_ddot_closed = mass_second_order_closed(jet);
    push(LedgerEntry::new("mDdot.temp", &m_ddot_temp, &m_ddot_closed));
    let m_ddot = &second + &bulk.iter().cloned().sum::<Rational>() + &ric_nu_nu;
    push(LedgerEntry::new("mDdot", &m_ddot, &m_ddot_closed));
    let display_form = &rc * &q(1, 72) - &r2 * &q(25, 2160);
    push(LedgerEntry::new("mDdot.reduction", &display_form, &m_ddot_closed));

    // Derivative-of-curvature path.
    let g = grad_r_from(d)?;
    push(LedgerEntry::new("gradR.HPerturbation", &g.h4_from_trace, &g.h4));
    let grad_mag = (&d.delta_r * &q(1, 120)).abs();
    push(LedgerEntry::new("gradR.magnitude", &g.coefficient.abs(), &grad_mag));

    // Hawking mass.
    let (h_dot, h_ddot_sq) = hawking_from(&b)?;
    let hawking_ddot = h_ddot_sq - &g.hawking_source * &q(1, 2);
    push(LedgerEntry::new("hawking.dot", &h_dot, &m_dot_expected));
    push(LedgerEntry::new(
        "hawking.ddot",
        &hawking_ddot,
        &(&r2 * &q(-1, 144) + &d.delta_r * &q(1, 120)),
    ));

    // Scaling: the unscaled mass is r times the rescaled one, checked at r = 1/10.
    let r5 = &m_ddot + &g.coefficient;
    let rescaled = [m_dot.clone(), r5.clone()];
    let unscaled = [m_dot.clone(), r5.clone()];
    let t = q(1, 10);
    let m_resc = &t * &(&rescaled[0] * &t.pow(2) + &rescaled[1] * &t.pow(4));
    let m_uns = &unscaled[0] * &t.pow(3) + &unscaled[1] * &t.pow(5);
    push(LedgerEntry::new("scaling", &m_uns, &m_resc));

    let mut flags = Vec::new();
    if !d.delta_r.is_zero() {
        flags.push(format!(
            "{GRAD_R_SIGN_FLAG}: computed deltaRCoeff = {} = {}ΔR/120; the first-order ∇R \
             derivation in the source states −ΔR/120 while the main expansion and the Hawking \
             expansion state +ΔR/120",
            g.coefficient,
            if g.coefficient.is_negative() { "−" } else { "+" },
        ));
    }
    let alt = gauss_curvature_variation(&b.sigma_dot, GaussVariation::PlusLaplacianTrace)?;
    if alt != b.k_dot {
        flags.push(format!(
            "{KDOT_VARIANT_FLAG}: the +Δ̃tr variant of the linearized Gauss curvature gives {alt}, \
             not R/2 − (4/3)R_ijX^iX^j; the −Δ̃tr operator is used"
        ));
    }
    let inline = bartnik::exterior_solve_with(&(&b.k_dot - &b.h_dot), BoundaryCoefficients::InlineDisplay)?;
    if inline.boundary_value() != b.v_dot {
        flags.push(format!(
            "{BOUNDARY_COEFF_FLAG}: the inline coefficient −ℓ(ℓ+2) gives V̇ = {}, not the closed \
             form; −(ℓ+1)(ℓ+2) is used",
            inline.boundary_value()
        ));
    }

    let eval = |c: &[Rational; 2], r: f64| c[0].to_f64() * r.powi(3) + c[1].to_f64() * r.powi(5);
    let hawking = [h_dot.clone(), hawking_ddot.clone()];
    let per_radius = radii
        .iter()
        .map(|&r| RadiusValue {
            r: Sig17(r),
            static_mass: Sig17(eval(&unscaled, r)),
            hawking: Sig17(eval(&hawking, r)),
        })
        .collect();

    let pass = ledger.iter().all(|e| e.pass);
    let ric = &jet.ric;
    Ok(MassReport {
        label: label.into(),
        jet: JetSummary {
            ricci: [
                ric[0][0].clone(),
                ric[0][1].clone(),
                ric[0][2].clone(),
                ric[1][1].clone(),
                ric[1][2].clone(),
                ric[2][2].clone(),
            ],
            scalar: jet.scalar.clone(),
            norm_sq_ric: rc,
            norm_sq_rm: jet.norm_sq_rm.clone(),
            delta_r: d.delta_r.clone(),
        },
        coefficients: Coefficients {
            m_dot,
            m_ddot,
            delta_r_coeff: g.coefficient,
            a,
            b: bb,
            hawking_dot: h_dot,
            hawking_ddot,
            rescaled,
            unscaled,
        },
        i_terms,
        bulk_terms: bulk,
        second_term: second,
        ric_nu_nu,
        ledger,
        flags,
        per_radius,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::random_derivative_jet;

    fn round() -> CurvatureJet {
        CurvatureJet::round(&Rational::one()).unwrap()
    }

    #[test]
    fn flat_is_all_zero() {
        let j = CurvatureJet::flat();
        assert!(mass_first_order(&j).unwrap().is_zero());
        assert!(i_terms(&j).unwrap().iter().all(Rational::is_zero));
        assert!(bulk_terms(&j).unwrap().iter().all(Rational::is_zero));
        assert!(second_term(&j).unwrap().is_zero());
        assert!(mass_second_order(&j).unwrap().is_zero());
        let r = full_expansion("flat", &j, &DerivativeJet::zero(), &[0.1]).unwrap();
        assert!(r.pass);
        assert_eq!(r.expansion_string(), "0");
        assert!(r.flags.is_empty());
    }

    #[test]
    fn round_spot_values() {
        let j = round();
        assert_eq!(mass_first_order(&j).unwrap(), q(1, 2));
        assert_eq!(
            i_terms(&j).unwrap(),
            [q(1, 30), q(-1, 9), q(1, 45), q(1, 18), q(2, 9), q(-2, 9)]
        );
        assert_eq!(bulk_terms(&j).unwrap(), [q(0, 1), q(-1, 4), q(1, 6)]);
        assert_eq!(second_term(&j).unwrap(), q(-1, 6));
        assert_eq!(mass_second_order(&j).unwrap(), q(-1, 4));
        let r = full_expansion("round:1", &j, &DerivativeJet::zero(), &[]).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.expansion_string(), "1/2 r^3 - 1/4 r^5");
        assert_eq!(r.hawking_string(), "1/2 r^3 - 1/4 r^5");
    }

    #[test]
    fn random_jet_ledger_passes() {
        for seed in 0..4 {
            let j = CurvatureJet::random(seed);
            let d = random_derivative_jet(seed);
            let r = full_expansion("random", &j, &d, &[0.1, 0.05]).unwrap();
            assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
            assert!(r.ledger.len() >= 15);
            let gap = &r.coefficients.m_ddot - &(&r.jet.scalar * &r.jet.scalar * q(-1, 144));
            assert_eq!(gap, mass_second_order_closed(&j) + &j.scalar * &j.scalar * q(1, 144));
        }
    }

    #[test]
    fn grad_r_magnitude_and_sign() {
        let d = random_derivative_jet(3).with_delta_r(q(120, 1));
        let c = grad_r_contribution(&d).unwrap();
        assert_eq!(c, q(1, 1));
        assert!(grad_r_contribution(&DerivativeJet::zero()).unwrap().is_zero());
    }

    #[test]
    fn grad_r_ignores_trace_free_part() {
        let dr = q(7, 3);
        let a = grad_r_contribution(&random_derivative_jet(1).with_delta_r(dr.clone())).unwrap();
        let b = grad_r_contribution(&random_derivative_jet(2).with_delta_r(dr.clone())).unwrap();
        let c = grad_r_contribution(&DerivativeJet::isotropic(dr)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn sign_flag_only_with_delta_r() {
        let j = CurvatureJet::random(3);
        let with = full_expansion("x", &j, &DerivativeJet::isotropic(q(1, 1)), &[]).unwrap();
        assert!(with.flags.iter().any(|f| f.starts_with(GRAD_R_SIGN_FLAG)));
        let without = full_expansion("x", &j, &DerivativeJet::zero(), &[]).unwrap();
        assert!(!without.flags.iter().any(|f| f.starts_with(GRAD_R_SIGN_FLAG)));
    }

    #[test]
    fn report_json_shape() {
        let r = full_expansion("round:1", &round(), &DerivativeJet::zero(), &[0.5]).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["coefficients"]["mDot"], "1/2");
        assert_eq!(v["iTerms"][0], "1/30");
        assert_eq!(v["ledger"][0]["pass"], true);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"r\":5.0000000000000000e-1"));
    }

    #[test]
    fn r_poly_formatting() {
        assert_eq!(format_r_poly(&[q(0, 1), q(-3, 4)]), "-3/4 r^5");
        assert_eq!(format_r_poly(&[q(1, 12), q(1, 1)]), "1/12 r^3 + 1 r^5");
    }
}
