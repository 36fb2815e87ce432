//! Curvature data at the center of a geodesic ball in three dimensions.
//!
//! The Riemann tensor is never free input: in three dimensions the Weyl tensor
//! vanishes and `Rm` is fixed by the Ricci tensor,
//!
//! ```text
//! R_ijkl = R_ik δ_jl + R_jl δ_ik − R_il δ_jk − R_jk δ_il − (R/2)(δ_ik δ_jl − δ_il δ_jk)
//! ```
//!
//! with the contraction convention `R_jl = Σ_i R_ijil`, so the unit round
//! sphere has `R_1212 = 1` and `Ric = 2δ`.

use std::fs;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{q, Rational};

pub type Sym3 = [[Rational; 3]; 3];
pub type Tensor4 = [[[[Rational; 3]; 3]; 3]; 3];

fn delta(i: usize, j: usize) -> Rational {
    if i == j {
        Rational::one()
    } else {
        Rational::zero()
    }
}

pub fn zero_sym3() -> Sym3 {
    Default::default()
}

pub fn zero_tensor4() -> Tensor4 {
    Default::default()
}

/// `c · δ`.
pub fn scalar_sym3(c: &Rational) -> Sym3 {
    let mut m = zero_sym3();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c.clone();
    }
    m
}

/// Ricci tensor from the six upper-triangle entries `11 12 13 22 23 33`.
pub fn sym3_from_upper(e: [Rational; 6]) -> Sym3 {
    let [a11, a12, a13, a22, a23, a33] = e;
    [
        [a11, a12.clone(), a13.clone()],
        [a12, a22, a23.clone()],
        [a13, a23, a33],
    ]
}

/// Riemann, Ricci and their invariants at the center point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureJet {
    pub ric: Sym3,
    pub rm: Tensor4,
    pub scalar: Rational,
    pub norm_sq_ric: Rational,
    pub norm_sq_rm: Rational,
}

/// Build the full jet from a symmetric Ricci tensor.
pub fn riemann_from_ricci(ric: &Sym3) -> Result<CurvatureJet> {
    for i in 0..3 {
        for j in 0..i {
            if ric[i][j] != ric[j][i] {
                return Err(Error::Input(format!(
                    "Ricci tensor is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let scalar: Rational = (0..3).map(|i| ric[i][i].clone()).sum();
    let half_r = &scalar * &q(1, 2);
    let mut rm = zero_tensor4();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = &ric[i][k] * &delta(j, l) + &ric[j][l] * &delta(i, k)
                        - &ric[i][l] * &delta(j, k)
                        - &ric[j][k] * &delta(i, l);
                    v -= &(&half_r * &(delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k)));
                    rm[i][j][k][l] = v;
                }
            }
        }
    }
    let norm_sq_ric = ric.iter().flatten().map(|x| x * x).sum();
    let norm_sq_rm = rm.iter().flatten().flatten().flatten().map(|x| x * x).sum();
    Ok(CurvatureJet {
        ric: ric.clone(),
        rm,
        scalar,
        norm_sq_ric,
        norm_sq_rm,
    })
}

impl CurvatureJet {
    pub fn flat() -> Self {
        riemann_from_ricci(&zero_sym3()).expect("zero is symmetric")
    }

    /// Round sphere of radius `a`: `Ric = (2/a²) δ`.
    pub fn round(a: &Rational) -> Result<Self> {
        let c = q(2, 1).checked_div(&(a * a))?;
        riemann_from_ricci(&scalar_sym3(&c))
    }

    pub fn random(seed: u64) -> Self {
        riemann_from_ricci(&random_ricci(seed)).expect("generated Ricci is symmetric")
    }

    /// The jet with every curvature entry multiplied by `s`.
    pub fn scaled(&self, s: &Rational) -> Self {
        let ric = self.ric.clone().map(|row| row.map(|x| &x * s));
        riemann_from_ricci(&ric).expect("scaling preserves symmetry")
    }

    /// `(A, B)` with `A = (7|Rc|² − (3/2)R²)/15` and `B = (R² + 2|Rc|²)/15`.
    ///
    /// `A` is recomputed from the Riemann tensor as
    /// `(|Rc|² + |Rm|² + R_minj R_mjni)/15`; disagreement means the Riemann
    /// construction is broken.
    pub fn invariants_ab(&self) -> Result<(Rational, Rational)> {
        let r2 = &self.scalar * &self.scalar;
        let a = (&self.norm_sq_ric * &q(7, 1) - &r2 * &q(3, 2)) * q(1, 15);
        let b = (&r2 + &self.norm_sq_ric * &q(2, 1)) * q(1, 15);
        let a_from_rm = (&self.norm_sq_ric + &self.norm_sq_rm + self.cross_contraction()) * q(1, 15);
        if a != a_from_rm {
            return Err(Error::Verification {
                name: "A".into(),
                computed: a_from_rm.to_string(),
                expected: a.to_string(),
            });
        }
        Ok((a, b))
    }

    /// `R_minj R_mjni`.
    pub fn cross_contraction(&self) -> Rational {
        let mut acc = Rational::zero();
        for m in 0..3 {
            for i in 0..3 {
                for n in 0..3 {
                    for j in 0..3 {
                        acc += &self.rm[m][i][n][j] * &self.rm[m][j][n][i];
                    }
                }
            }
        }
        acc
    }

    /// Contract `R_ijil` back to a Ricci tensor.
    pub fn contracted_ricci(&self) -> Sym3 {
        let mut out = zero_sym3();
        for j in 0..3 {
            for l in 0..3 {
                out[j][l] = (0..3).map(|i| self.rm[i][j][i][l].clone()).sum();
            }
        }
        out
    }

    /// Names of violated algebraic identities; empty for a valid jet.
    pub fn symmetry_violations(&self) -> Vec<&'static str> {
        let rm = &self.rm;
        let mut bad = Vec::new();
        let all = || {
            (0..81).map(|n| (n / 27, (n / 9) % 3, (n / 3) % 3, n % 3))
        };
        if all().any(|(i, j, k, l)| rm[i][j][k][l] != -&rm[j][i][k][l]) {
            bad.push("antisymmetry in first pair");
        }
        if all().any(|(i, j, k, l)| rm[i][j][k][l] != -&rm[i][j][l][k]) {
            bad.push("antisymmetry in second pair");
        }
        if all().any(|(i, j, k, l)| rm[i][j][k][l] != rm[k][l][i][j]) {
            bad.push("pair exchange");
        }
        if all().any(|(i, j, k, l)| !(&(&rm[i][j][k][l] + &rm[i][k][l][j]) + &rm[i][l][j][k]).is_zero()) {
            bad.push("first Bianchi identity");
        }
        if self.contracted_ricci() != self.ric {
            bad.push("Ricci contraction");
        }
        let r2 = &self.scalar * &self.scalar;
        if self.norm_sq_rm != &self.norm_sq_ric * &q(4, 1) - r2 {
            bad.push("|Rm|^2 = 4|Rc|^2 - R^2");
        }
        bad
    }
}

fn small_rational(rng: &mut ChaCha8Rng, max_numer: i64, max_denom: i64) -> Rational {
    let n = rng.gen_range(-max_numer..=max_numer);
    let d = rng.gen_range(1..=max_denom);
    q(n, d)
}

/// Random symmetric Ricci tensor with small rational entries. The stream is
/// determined by `seed` alone.
pub fn random_ricci(seed: u64) -> Sym3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e: [Rational; 6] = std::array::from_fn(|_| small_rational(&mut rng, 12, 7));
    sym3_from_upper(e)
}

/// Second derivatives of the Ricci tensor at the center, `T_ijmn ≈ R_ij;mn`,
/// symmetrized in `(i,j)`, in `(m,n)`, and under exchange of the two pairs.
///
/// The traces are pinned by the contracted Bianchi identity:
/// `Σ T_kkmm = ΔR` and `Σ T_kmkm = ΔR/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeJet {
    pub delta_r: Rational,
    pub t: Tensor4,
}

fn full_trace(t: &Tensor4) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..3 {
        for m in 0..3 {
            acc += &t[k][k][m][m];
        }
    }
    acc
}

fn cross_trace(t: &Tensor4) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..3 {
        for m in 0..3 {
            acc += &t[k][m][k][m];
        }
    }
    acc
}

/// `δ_ij δ_mn` and `δ_im δ_jn + δ_in δ_jm`.
fn trace_tensors() -> (Tensor4, Tensor4) {
    let mut e1 = zero_tensor4();
    let mut e2 = zero_tensor4();
    for i in 0..3 {
        for j in 0..3 {
            for m in 0..3 {
                for n in 0..3 {
                    e1[i][j][m][n] = delta(i, j) * delta(m, n);
                    e2[i][j][m][n] = delta(i, m) * delta(j, n) + delta(i, n) * delta(j, m);
                }
            }
        }
    }
    (e1, e2)
}

fn add_scaled(t: &mut Tensor4, s: &Rational, e: &Tensor4) {
    for i in 0..3 {
        for j in 0..3 {
            for m in 0..3 {
                for n in 0..3 {
                    t[i][j][m][n] += &(s * &e[i][j][m][n]);
                }
            }
        }
    }
}

impl DerivativeJet {
    pub fn zero() -> Self {
        Self {
            delta_r: Rational::zero(),
            t: zero_tensor4(),
        }
    }

    /// Validate symmetries and both trace constraints.
    pub fn new(t: Tensor4, delta_r: Rational) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                for m in 0..3 {
                    for n in 0..3 {
                        let v = &t[i][j][m][n];
                        if v != &t[j][i][m][n] || v != &t[i][j][n][m] || v != &t[m][n][i][j] {
                            return Err(Error::Input(
                                "derivative tensor lacks (ij)(mn) pair symmetry".into(),
                            ));
                        }
                    }
                }
            }
        }
        let full = full_trace(&t);
        if full != delta_r {
            return Err(Error::Input(format!(
                "full trace {full} of derivative tensor differs from Laplacian of scalar curvature {delta_r}"
            )));
        }
        let cross = cross_trace(&t);
        if &cross * &q(2, 1) != delta_r {
            return Err(Error::Input(format!(
                "cross trace {cross} violates the contracted Bianchi identity for {delta_r}"
            )));
        }
        Ok(Self { delta_r, t })
    }

    /// Shift a pair-symmetric tensor by multiples of the two trace tensors so
    /// that it satisfies both trace constraints for `delta_r`.
    pub fn corrected(raw: &Tensor4, delta_r: Rational) -> Result<Self> {
        // [9 6; 3 12] (a, b) = (ΔR − t1, ΔR/2 − t2)
        let r1 = &delta_r - &full_trace(raw);
        let r2 = &delta_r * &q(1, 2) - cross_trace(raw);
        let det = q(90, 1);
        let a = (&r1 * &q(12, 1) - &r2 * &q(6, 1)).checked_div(&det)?;
        let b = (&r2 * &q(9, 1) - &r1 * &q(3, 1)).checked_div(&det)?;
        let (e1, e2) = trace_tensors();
        let mut t = raw.clone();
        add_scaled(&mut t, &a, &e1);
        add_scaled(&mut t, &b, &e2);
        Self::new(t, delta_r)
    }

    /// Pure-trace jet with the given `ΔR`.
    pub fn isotropic(delta_r: Rational) -> Self {
        Self::corrected(&zero_tensor4(), delta_r).expect("trace system is nonsingular")
    }

    /// Same trace-free part, new `ΔR`.
    pub fn with_delta_r(&self, delta_r: Rational) -> Self {
        let shift = &delta_r - &self.delta_r;
        let mut t = self.t.clone();
        add_scaled(&mut t, &Rational::one(), &Self::isotropic(shift).t);
        Self::new(t, delta_r).expect("trace shift is exact")
    }
}

/// Random pair-symmetric tensor corrected to satisfy the trace constraints,
/// with a random small `ΔR`.
pub fn random_derivative_jet(seed: u64) -> DerivativeJet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_d371_a7e7_0000);
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let mut raw = zero_tensor4();
    for p in 0..6 {
        for r in p..6 {
            let v = small_rational(&mut rng, 12, 7);
            let (i, j) = pairs[p];
            let (m, n) = pairs[r];
            for (a, b) in [(i, j), (j, i)] {
                for (c, d) in [(m, n), (n, m)] {
                    raw[a][b][c][d] = v.clone();
                    raw[c][d][a][b] = v.clone();
                }
            }
        }
    }
    let delta_r = small_rational(&mut rng, 12, 7);
    DerivativeJet::corrected(&raw, delta_r).expect("trace system is nonsingular")
}

/// Where a Ricci tensor comes from: `flat`, `round:a`, `random:n`, `file:path`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RicciSource {
    Flat,
    Round(Rational),
    Random(u64),
    File(String),
}

impl FromStr for RicciSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "flat" {
            return Ok(Self::Flat);
        }
        let bad = || Error::Input(format!("unrecognized Ricci source {s:?}"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "round" => {
                let a: Rational = arg.parse()?;
                if a.is_zero() || a.is_negative() {
                    return Err(Error::Input(format!("round radius must be positive, got {a}")));
                }
                Ok(Self::Round(a))
            }
            "random" => arg
                .parse()
                .map(Self::Random)
                .map_err(|_| Error::Input(format!("bad seed {arg:?}"))),
            "file" => Ok(Self::File(arg.to_string())),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for RicciSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Flat => write!(f, "flat"),
            Self::Round(a) => write!(f, "round:{a}"),
            Self::Random(n) => write!(f, "random:{n}"),
            Self::File(p) => write!(f, "file:{p}"),
        }
    }
}

impl RicciSource {
    pub fn load(&self) -> Result<CurvatureJet> {
        match self {
            Self::Flat => Ok(CurvatureJet::flat()),
            Self::Round(a) => CurvatureJet::round(a),
            Self::Random(seed) => Ok(CurvatureJet::random(*seed)),
            Self::File(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
                riemann_from_ricci(&parse_ricci_text(&text)?)
            }
        }
    }
}

/// Parse six whitespace-separated `p/q` tokens `11 12 13 22 23 33`.
/// Lines starting with `#` are ignored.
pub fn parse_ricci_text(text: &str) -> Result<Sym3> {
    let tokens: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .collect();
    if tokens.len() != 6 {
        return Err(Error::Input(format!(
            "expected 6 Ricci entries, found {}",
            tokens.len()
        )));
    }
    let mut vals: Vec<Rational> = Vec::with_capacity(6);
    for t in tokens {
        vals.push(t.parse()?);
    }
    let arr: [Rational; 6] = vals.try_into().expect("length checked");
    Ok(sym3_from_upper(arr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_jet_is_zero() {
        let j = CurvatureJet::flat();
        assert!(j.scalar.is_zero());
        assert!(j.rm.iter().flatten().flatten().flatten().all(Rational::is_zero));
        assert_eq!(j.invariants_ab().unwrap(), (Rational::zero(), Rational::zero()));
    }

    #[test]
    fn unit_round_sphere() {
        let j = CurvatureJet::round(&Rational::one()).unwrap();
        assert_eq!(j.scalar, q(6, 1));
        assert_eq!(j.norm_sq_ric, q(12, 1));
        assert_eq!(j.norm_sq_rm, q(12, 1));
        assert_eq!(j.rm[0][1][0][1], Rational::one());
        assert_eq!(j.invariants_ab().unwrap(), (q(2, 1), q(4, 1)));
        assert!(j.symmetry_violations().is_empty());
    }

    #[test]
    fn round_radius_scales_curvature() {
        let j = CurvatureJet::round(&q(2, 1)).unwrap();
        assert_eq!(j.ric[1][1], q(1, 2));
        assert!(CurvatureJet::round(&Rational::zero()).is_err());
    }

    #[test]
    fn random_jets_are_valid() {
        for seed in 0..50 {
            let j = CurvatureJet::random(seed);
            assert!(j.symmetry_violations().is_empty(), "seed {seed}");
            j.invariants_ab().unwrap();
        }
    }

    #[test]
    fn broken_riemann_is_detected() {
        let mut j = CurvatureJet::random(3);
        j.rm[0][1][0][1] += &Rational::one();
        j.rm[1][0][1][0] += &Rational::one();
        j.norm_sq_rm = j.rm.iter().flatten().flatten().flatten().map(|x| x * x).sum();
        assert!(matches!(j.invariants_ab(), Err(Error::Verification { .. })));
        assert!(!j.symmetry_violations().is_empty());
    }

    #[test]
    fn asymmetric_ricci_rejected() {
        let mut ric = zero_sym3();
        ric[0][1] = q(1, 1);
        assert!(riemann_from_ricci(&ric).is_err());
    }

    #[test]
    fn random_generation_is_deterministic() {
        assert_eq!(random_ricci(11), random_ricci(11));
        assert_ne!(random_ricci(11), random_ricci(12));
        assert_eq!(random_derivative_jet(4), random_derivative_jet(4));
    }

    #[test]
    fn derivative_jets_satisfy_traces() {
        for seed in 0..20 {
            let d = random_derivative_jet(seed);
            assert_eq!(full_trace(&d.t), d.delta_r);
            assert_eq!(&cross_trace(&d.t) * &q(2, 1), d.delta_r);
            let moved = d.with_delta_r(q(120, 1));
            assert_eq!(moved.delta_r, q(120, 1));
        }
        let iso = DerivativeJet::isotropic(q(3, 1));
        assert_eq!(full_trace(&iso.t), q(3, 1));
    }

    #[test]
    fn bad_traces_rejected() {
        let d = random_derivative_jet(1);
        assert!(DerivativeJet::new(d.t.clone(), &d.delta_r + &Rational::one()).is_err());
    }

    #[test]
    fn ricci_sources() {
        assert_eq!("flat".parse::<RicciSource>().unwrap(), RicciSource::Flat);
        assert_eq!("round:1".parse::<RicciSource>().unwrap(), RicciSource::Round(q(1, 1)));
        assert_eq!("random:9".parse::<RicciSource>().unwrap(), RicciSource::Random(9));
        assert!("round:0".parse::<RicciSource>().is_err());
        assert!("banana".parse::<RicciSource>().is_err());
        assert!(matches!(
            parse_ricci_text("1 0 0 1/0 0 1"),
            Err(Error::Parse(_))
        ));
        let ric = parse_ricci_text("# diag\n2 0 0\n2 0\n2\n").unwrap();
        assert_eq!(ric, scalar_sym3(&q(2, 1)));
        assert!(parse_ricci_text("1 2 3").is_err());
    }
}
