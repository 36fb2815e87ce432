//! Polynomials in three variables and their restriction to the unit sphere.
//!
//! [`Poly3`] is an ambient polynomial in `x, y, z` of total degree at most
//! [`MAX_DEGREE`], stored densely in the monomial basis. A monomial coefficient
//! is the multinomial-weighted entry of the corresponding fully symmetric
//! coefficient array, so this is the canonical storage of a symmetric tensor.
//!
//! [`SpherePoly`] is a function on `S²`. Its representative is reduced with
//! `z² = 1 − x² − y²` until every monomial has `z`-degree at most one; these
//! monomials form a basis of polynomial functions on the sphere, so equal
//! functions have equal representatives and the representative's degree is the
//! function's true degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MAX_DEGREE: usize = 8;

/// Number of monomials of degree ≤ 8 in three variables.
const N_MONO: usize = (MAX_DEGREE + 1) * (MAX_DEGREE + 2) * (MAX_DEGREE + 3) / 6;

pub type Mono = [u8; 3];

fn mono_index(m: Mono) -> usize {
    let d = (m[0] + m[1] + m[2]) as usize;
    let e = (m[1] + m[2]) as usize;
    d * (d + 1) * (d + 2) / 6 + e * (e + 1) / 2 + m[2] as usize
}

fn monomials() -> &'static [Mono] {
    static TABLE: OnceLock<Vec<Mono>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = vec![[0u8; 3]; N_MONO];
        for d in 0..=MAX_DEGREE as u8 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    let m = [a, b, d - a - b];
                    out[mono_index(m)] = m;
                }
            }
        }
        out
    })
}

fn mono_degree(m: Mono) -> usize {
    (m[0] + m[1] + m[2]) as usize
}

fn double_factorial(n: i64) -> i64 {
    if n <= 0 {
        1
    } else {
        n * double_factorial(n - 2)
    }
}

/// Mean of `x^a y^b z^c` over the unit sphere: by the pairing formula, the
/// number of perfect matchings of the index multiset that pair equal indices,
/// divided by `(2n+1)!!`. Odd exponents give zero.
pub fn monomial_mean(m: Mono) -> Rational {
    if m.iter().any(|e| e % 2 == 1) {
        return Rational::zero();
    }
    let matchings: i64 = m
        .iter()
        .map(|&e| double_factorial(e as i64 - 1))
        .product();
    Rational::frac(matchings, double_factorial(mono_degree(m) as i64 + 1))
}

/// Ambient polynomial in `x, y, z` with degree at most [`MAX_DEGREE`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly3 {
    coeffs: Vec<Rational>,
}

impl Default for Poly3 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Poly3 {
    pub fn zero() -> Self {
        Self {
            coeffs: vec![Rational::zero(); N_MONO],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    /// The coordinate function `x^i` (`i` in `0..3`).
    pub fn coord(i: usize) -> Self {
        let mut m = [0u8; 3];
        m[i] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        let mut p = Self::zero();
        p.coeffs[mono_index(m)] = c;
        p
    }

    /// `|x|² = x² + y² + z²`.
    pub fn radius_squared() -> Self {
        let mut p = Self::zero();
        for i in 0..3 {
            let mut m = [0u8; 3];
            m[i] = 2;
            p.coeffs[mono_index(m)] = Rational::one();
        }
        p
    }

    pub fn coeff(&self, m: Mono) -> &Rational {
        &self.coeffs[mono_index(m)]
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &Rational)> + '_ {
        monomials()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms().map(|(m, _)| mono_degree(m)).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Mono, c: &Rational) {
        if !c.is_zero() {
            self.coeffs[mono_index(m)] += c;
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let degree = self.degree() + other.degree();
        if degree > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeOverflow {
                degree,
                cap: MAX_DEGREE,
            });
        }
        let rhs: Vec<(Mono, &Rational)> = other.terms().collect();
        let mut out = Self::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in &rhs {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                out.coeffs[mono_index(m)] += ca * *cb;
            }
        }
        Ok(out)
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m;
            dm[i] -= 1;
            out.coeffs[mono_index(dm)] += c * &Rational::from_int(m[i] as i64);
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            for i in 0..3 {
                if m[i] >= 2 {
                    let mut dm = m;
                    dm[i] -= 2;
                    let k = (m[i] as i64) * (m[i] as i64 - 1);
                    out.coeffs[mono_index(dm)] += c * &Rational::from_int(k);
                }
            }
        }
        out
    }

    /// Homogeneous component of degree `n`.
    pub fn homogeneous_part(&self, n: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            if mono_degree(m) == n {
                out.coeffs[mono_index(m)] = c.clone();
            }
        }
        out
    }

    /// `x · ∇p`, i.e. each homogeneous part multiplied by its degree.
    pub fn euler(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.coeffs[mono_index(m)] = c * &Rational::from_int(mono_degree(m) as i64);
        }
        out
    }

    pub fn eval_f64(&self, x: [f64; 3]) -> f64 {
        self.terms()
            .map(|(m, c)| {
                c.to_f64() * x[0].powi(m[0] as i32) * x[1].powi(m[1] as i32) * x[2].powi(m[2] as i32)
            })
            .sum()
    }

    pub fn eval(&self, x: &[Rational; 3]) -> Rational {
        self.terms()
            .map(|(m, c)| c * &(x[0].pow(m[0] as u32) * x[1].pow(m[1] as u32) * x[2].pow(m[2] as u32)))
            .sum()
    }

    /// Apply `z² → 1 − x² − y²` until every monomial has `z`-degree ≤ 1.
    fn reduced_on_sphere(&self) -> Self {
        let mut work = self.clone();
        // Highest z-powers first so each pass strictly lowers them.
        for zpow in (2..=MAX_DEGREE as u8).rev() {
            let hits: Vec<(Mono, Rational)> = work
                .terms()
                .filter(|(m, _)| m[2] == zpow)
                .map(|(m, c)| (m, c.clone()))
                .collect();
            for (m, c) in hits {
                work.coeffs[mono_index(m)] = Rational::zero();
                let base = [m[0], m[1], m[2] - 2];
                work.add_term(base, &c);
                work.add_term([base[0] + 2, base[1], base[2]], &-&c);
                work.add_term([base[0], base[1] + 2, base[2]], &-&c);
            }
        }
        work
    }
}

impl fmt::Debug for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly3) -> fmt::Result {
    let mut first = true;
    for (m, c) in p.terms() {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let vars: Vec<String> = ["x", "y", "z"]
            .iter()
            .zip(m)
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        if vars.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{}", vars.join("*"))?;
        } else {
            write!(f, "{mag}*{}", vars.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Polynomial function on the unit sphere in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SpherePoly(Poly3);

impl SpherePoly {
    pub fn zero() -> Self {
        Self(Poly3::zero())
    }

    pub fn constant(c: Rational) -> Self {
        Self(Poly3::constant(c))
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The direction function `X^i` (`i` in `0..3`).
    pub fn coord(i: usize) -> Self {
        Self(Poly3::coord(i))
    }

    pub fn from_poly(p: &Poly3) -> Self {
        Self(p.reduced_on_sphere())
    }

    /// `Σ c_ij X^i X^j` for a 3×3 coefficient array.
    pub fn quadratic_form(c: &[[Rational; 3]; 3]) -> Self {
        let mut p = Poly3::zero();
        for (i, row) in c.iter().enumerate() {
            for (j, cij) in row.iter().enumerate() {
                let mut m = [0u8; 3];
                m[i] += 1;
                m[j] += 1;
                p.add_term(m, cij);
            }
        }
        Self::from_poly(&p)
    }

    /// `Σ c_klmn X^k X^l X^m X^n`.
    pub fn quartic_form(c: &[[[[Rational; 3]; 3]; 3]; 3]) -> Self {
        let mut p = Poly3::zero();
        for k in 0..3 {
            for l in 0..3 {
                for m_ in 0..3 {
                    for n in 0..3 {
                        let mut m = [0u8; 3];
                        m[k] += 1;
                        m[l] += 1;
                        m[m_] += 1;
                        m[n] += 1;
                        p.add_term(m, &c[k][l][m_][n]);
                    }
                }
            }
        }
        Self::from_poly(&p)
    }

    pub fn poly(&self) -> &Poly3 {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    /// The value if this function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.degree() == 0).then(|| self.0.coeff([0, 0, 0]).clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.scale(s))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_poly(&self.0.try_mul(&other.0)?))
    }

    /// `(1/4π) ∫_{S²} f`.
    pub fn integrate_mean(&self) -> Rational {
        self.0.terms().map(|(m, c)| c * &monomial_mean(m)).sum()
    }

    /// Laplace–Beltrami operator of the round metric. For each homogeneous
    /// part `P_n` of the representative, `Δ̃P_n = (ΔP_n − n(n+1)P_n)|_{S²}`.
    pub fn laplacian(&self) -> Self {
        let mut out = Poly3::zero();
        for n in 0..=self.degree() {
            let part = self.0.homogeneous_part(n);
            if part.is_zero() {
                continue;
            }
            let shifted = part.scale(&Rational::from_int(-((n * (n + 1)) as i64)));
            for (m, c) in part.laplacian().terms().chain(shifted.terms()) {
                out.add_term(m, c);
            }
        }
        Self::from_poly(&out)
    }

    /// Ambient gradient components `∂_i F` of the representative. Only their
    /// tangential projection is meaningful on the sphere.
    pub fn ambient_gradient(&self) -> [Self; 3] {
        [0, 1, 2].map(|i| Self::from_poly(&self.0.partial(i)))
    }

    /// `X · ∇F` of the representative (the Euler operator).
    pub fn radial_derivative(&self) -> Self {
        Self(self.0.euler())
    }

    /// `⟨∇̃f, ∇̃g⟩ = ∇F·∇G − (X·∇F)(X·∇G)`.
    pub fn grad_pair(&self, other: &Self) -> Result<Self> {
        let gf = self.ambient_gradient();
        let gg = other.ambient_gradient();
        let mut acc = Self::zero();
        for i in 0..3 {
            acc = &acc + &gf[i].try_mul(&gg[i])?;
        }
        let radial = self.radial_derivative().try_mul(&other.radial_derivative())?;
        Ok(&acc - &radial)
    }

    pub fn eval_f64(&self, x: [f64; 3]) -> f64 {
        self.0.eval_f64(x)
    }

    pub fn eval(&self, x: &[Rational; 3]) -> Rational {
        self.0.eval(x)
    }

    /// One line per nonzero coefficient: the sorted index multiset of the
    /// monomial (indices 1..=3) and the coefficient as `p/q`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.0.terms() {
            let idx: Vec<String> = (0..3)
                .flat_map(|i| std::iter::repeat_n((i + 1).to_string(), m[i] as usize))
                .collect();
            out.push_str(&format!("({}) {}\n", idx.join(","), c));
        }
        out
    }
}

impl fmt::Display for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.0)
    }
}

impl fmt::Debug for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.0)
    }
}

impl Add<&SpherePoly> for &SpherePoly {
    type Output = SpherePoly;
    fn add(self, rhs: &SpherePoly) -> SpherePoly {
        let mut out = self.0.clone();
        for (m, c) in rhs.0.terms() {
            out.add_term(m, c);
        }
        SpherePoly(out)
    }
}

impl Sub<&SpherePoly> for &SpherePoly {
    type Output = SpherePoly;
    fn sub(self, rhs: &SpherePoly) -> SpherePoly {
        self + &-rhs
    }
}

impl Neg for &SpherePoly {
    type Output = SpherePoly;
    fn neg(self) -> SpherePoly {
        self.scale(&-Rational::one())
    }
}

impl Add for SpherePoly {
    type Output = SpherePoly;
    fn add(self, rhs: SpherePoly) -> SpherePoly {
        &self + &rhs
    }
}

impl Sub for SpherePoly {
    type Output = SpherePoly;
    fn sub(self, rhs: SpherePoly) -> SpherePoly {
        &self - &rhs
    }
}

impl Mul<&Rational> for &SpherePoly {
    type Output = SpherePoly;
    fn mul(self, rhs: &Rational) -> SpherePoly {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn x(i: usize) -> SpherePoly {
        SpherePoly::coord(i)
    }

    #[test]
    fn monomial_table_is_a_bijection() {
        let table = monomials();
        assert_eq!(table.len(), 165);
        for (i, m) in table.iter().enumerate() {
            assert_eq!(mono_index(*m), i);
        }
    }

    #[test]
    fn product_of_coordinates() {
        let p = x(0).try_mul(&x(0)).unwrap();
        assert_eq!(p.poly().coeff([2, 0, 0]), &Rational::one());
        assert_eq!(p.degree(), 2);
        let one = SpherePoly::one();
        assert_eq!(p.try_mul(&one).unwrap(), p);
    }

    #[test]
    fn sphere_relation_is_folded() {
        let mut r2 = SpherePoly::zero();
        for i in 0..3 {
            r2 = &r2 + &x(i).try_mul(&x(i)).unwrap();
        }
        assert_eq!(r2, SpherePoly::one());
        // z^2 has no representative with z-degree 2.
        let z2 = x(2).try_mul(&x(2)).unwrap();
        assert!(z2.poly().terms().all(|(m, _)| m[2] <= 1));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let mut p = SpherePoly::one();
        for _ in 0..8 {
            p = p.try_mul(&x(0)).unwrap();
        }
        assert_eq!(p.degree(), 8);
        assert_eq!(
            p.try_mul(&x(1)),
            Err(Error::DegreeOverflow { degree: 9, cap: 8 })
        );
    }

    #[test]
    fn sphere_means() {
        let z2 = x(2).try_mul(&x(2)).unwrap();
        assert_eq!(z2.integrate_mean(), q(1, 3));
        let x2y2 = x(0).try_mul(&x(0)).unwrap().try_mul(&x(1)).unwrap().try_mul(&x(1)).unwrap();
        assert_eq!(x2y2.integrate_mean(), q(1, 15));
        let x4 = SpherePoly(Poly3::monomial([4, 0, 0], Rational::one()));
        assert_eq!(x4.integrate_mean(), q(1, 5));
        let xyz = SpherePoly(Poly3::monomial([1, 1, 1], Rational::one()));
        assert_eq!(xyz.integrate_mean(), Rational::zero());
        assert_eq!(SpherePoly::one().integrate_mean(), Rational::one());
    }

    #[test]
    fn laplacian_of_coordinates_and_constants() {
        for i in 0..3 {
            assert_eq!(x(i).laplacian(), x(i).scale(&q(-2, 1)));
        }
        assert!(SpherePoly::constant(q(7, 3)).laplacian().is_zero());
    }

    #[test]
    fn gradient_pairing_of_coordinates() {
        for i in 0..3 {
            for j in 0..3 {
                let lhs = &x(i).grad_pair(&x(j)).unwrap() + &x(i).try_mul(&x(j)).unwrap();
                let delta = if i == j { SpherePoly::one() } else { SpherePoly::zero() };
                assert_eq!(lhs, delta);
            }
        }
        assert_eq!(
            x(0).grad_pair(&x(0)).unwrap(),
            &SpherePoly::one() - &x(0).try_mul(&x(0)).unwrap()
        );
        assert!(SpherePoly::constant(q(3, 1)).grad_pair(&x(1)).unwrap().is_zero());
    }

    #[test]
    fn dump_lists_index_multisets() {
        let p = &x(0).try_mul(&x(2)).unwrap().scale(&q(1, 2)) + &SpherePoly::constant(q(-3, 4));
        assert_eq!(p.dump(), "() -3/4\n(1,3) 1/2\n");
        assert_eq!(p.to_string(), "-3/4 + 1/2*x*z");
    }
}
