//! Tangent covector and symmetric 2-tensor fields on `S²` in ambient form.
//!
//! A covector field is `P_i(X) ∂_a X^i` and a symmetric 2-tensor is
//! `P_ij(X) ∂_a X^i ∂_b X^j + Q(X) σ̃_ab`. The ambient representation is not
//! unique (adding multiples of `X_i` changes nothing), so every operation
//! contracts through the tangential projector `Π^{ij} = δ^{ij} − X^i X^j`.
//!
//! Sphere identities used throughout:
//! `σ̃^{ab} ∂_a X^i ∂_b X^j = Π^{ij}`, `Δ̃X^i = −2X^i`, and
//! `∇̃_a ∇̃_b X^i = −X^i σ̃_ab`.

use std::ops::{Add, Neg, Sub};

use crate::error::Result;
use crate::rational::Rational;
use crate::sphere::poly::SpherePoly;

/// `Σ_i a_i b_i`.
fn dot(a: &[SpherePoly; 3], b: &[SpherePoly; 3]) -> Result<SpherePoly> {
    let mut acc = SpherePoly::zero();
    for i in 0..3 {
        acc = &acc + &a[i].try_mul(&b[i])?;
    }
    Ok(acc)
}

fn coords() -> [SpherePoly; 3] {
    [0, 1, 2].map(SpherePoly::coord)
}

/// `X · v`.
fn radial(v: &[SpherePoly; 3]) -> Result<SpherePoly> {
    dot(&coords(), v)
}

/// `Π^{ij} ∂_i f_j`: tangential divergence of the ambient components.
fn projected_trace_of_jacobian(v: &[SpherePoly; 3]) -> Result<SpherePoly> {
    let x = coords();
    let mut acc = SpherePoly::zero();
    for j in 0..3 {
        let grad = v[j].ambient_gradient();
        acc = &acc + &grad[j];
        // −X_j (X · ∇v_j)
        acc = &acc - &x[j].try_mul(&v[j].radial_derivative())?;
    }
    Ok(acc)
}

/// Covector field `P_i ∂_a X^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TangentField1 {
    pub ambient: [SpherePoly; 3],
}

impl TangentField1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_ambient(ambient: [SpherePoly; 3]) -> Self {
        Self { ambient }
    }

    /// Tangential gradient `∂_a f`.
    pub fn gradient(f: &SpherePoly) -> Self {
        Self {
            ambient: f.ambient_gradient(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            ambient: self.ambient.clone().map(|p| p.scale(s)),
        }
    }

    /// `∇̃^a V_a = Π^{ij} ∂_i P_j + P_i Δ̃X^i = Π^{ij}∂_i P_j − 2 X·P`.
    pub fn divergence(&self) -> Result<SpherePoly> {
        let two_radial = radial(&self.ambient)?.scale(&Rational::from_int(2));
        Ok(&projected_trace_of_jacobian(&self.ambient)? - &two_radial)
    }

    /// The tangential ambient vector `Π P`. Equal fields have equal projections.
    pub fn projected(&self) -> Result<[SpherePoly; 3]> {
        let x = coords();
        let r = radial(&self.ambient)?;
        let mut out = self.ambient.clone();
        for i in 0..3 {
            out[i] = &out[i] - &x[i].try_mul(&r)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.projected()?.iter().all(SpherePoly::is_zero))
    }

    /// `σ̃^{ab} V_a W_b = P · Π · Q`.
    pub fn pair(&self, other: &Self) -> Result<SpherePoly> {
        let full = dot(&self.ambient, &other.ambient)?;
        let r = radial(&self.ambient)?.try_mul(&radial(&other.ambient)?)?;
        Ok(&full - &r)
    }
}

impl Add<&TangentField1> for &TangentField1 {
    type Output = TangentField1;
    fn add(self, rhs: &TangentField1) -> TangentField1 {
        TangentField1 {
            ambient: [0, 1, 2].map(|i| &self.ambient[i] + &rhs.ambient[i]),
        }
    }
}

impl Sub<&TangentField1> for &TangentField1 {
    type Output = TangentField1;
    fn sub(self, rhs: &TangentField1) -> TangentField1 {
        TangentField1 {
            ambient: [0, 1, 2].map(|i| &self.ambient[i] - &rhs.ambient[i]),
        }
    }
}

pub type Mat3 = [[SpherePoly; 3]; 3];

fn zero_mat() -> Mat3 {
    Default::default()
}

/// Symmetric 2-tensor `P_ij ∂_a X^i ∂_b X^j + Q σ̃_ab`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TangentField2 {
    /// Symmetric ambient coefficient matrix `P_ij`.
    pub ambient: Mat3,
    /// Coefficient `Q` of the round metric.
    pub metric: SpherePoly,
}

impl TangentField2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The round metric `σ̃`.
    pub fn round_metric() -> Self {
        Self::conformal(SpherePoly::one())
    }

    /// `Q σ̃`.
    pub fn conformal(q: SpherePoly) -> Self {
        Self {
            ambient: zero_mat(),
            metric: q,
        }
    }

    /// Build from an ambient matrix, symmetrizing it.
    pub fn from_ambient(p: Mat3) -> Self {
        let half = Rational::frac(1, 2);
        let mut ambient = zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                ambient[i][j] = (&p[i][j] + &p[j][i]).scale(&half);
            }
        }
        Self {
            ambient,
            metric: SpherePoly::zero(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            ambient: self.ambient.clone().map(|row| row.map(|p| p.scale(s))),
            metric: self.metric.scale(s),
        }
    }

    /// The metric term folded into the ambient matrix (`σ̃_ab = δ_ij ∂_aX^i ∂_bX^j`).
    fn folded(&self) -> Mat3 {
        let mut p = self.ambient.clone();
        if !self.metric.is_zero() {
            for (i, row) in p.iter_mut().enumerate() {
                row[i] = &row[i] + &self.metric;
            }
        }
        p
    }

    /// `σ̃^{ab} T_ab = Π^{ij} P_ij + 2Q`.
    pub fn trace(&self) -> Result<SpherePoly> {
        let x = coords();
        let mut acc = self.metric.scale(&Rational::from_int(2));
        for i in 0..3 {
            acc = &acc + &self.ambient[i][i];
        }
        let px = mat_vec(&self.ambient, &x)?;
        Ok(&acc - &dot(&x, &px)?)
    }

    /// `σ̃^{ac} σ̃^{bd} T_ab S_cd = tr(Π P Π S)`, expanded as
    /// `P:S − 2 (PX)·(SX) + (XPX)(XSX)`.
    pub fn contract(&self, other: &Self) -> Result<SpherePoly> {
        let p = self.folded();
        let s = other.folded();
        let x = coords();
        let mut full = SpherePoly::zero();
        for i in 0..3 {
            for j in 0..3 {
                full = &full + &p[i][j].try_mul(&s[i][j])?;
            }
        }
        let px = mat_vec(&p, &x)?;
        let sx = mat_vec(&s, &x)?;
        let cross = dot(&px, &sx)?.scale(&Rational::from_int(2));
        let xpx = dot(&x, &px)?;
        let xsx = dot(&x, &sx)?;
        Ok(&(&full - &cross) + &xpx.try_mul(&xsx)?)
    }

    /// Covariant divergence `∇̃^a T_ab`, with components
    /// `W_j = Π^{ki} ∂_k P_ij − 3 (P X)_j` after folding in the metric term.
    pub fn divergence(&self) -> Result<TangentField1> {
        let p = self.folded();
        let x = coords();
        let px = mat_vec(&p, &x)?;
        let three = Rational::from_int(3);
        let mut ambient: [SpherePoly; 3] = Default::default();
        for j in 0..3 {
            let column = [p[0][j].clone(), p[1][j].clone(), p[2][j].clone()];
            ambient[j] = &projected_trace_of_jacobian(&column)? - &px[j].scale(&three);
        }
        Ok(TangentField1 { ambient })
    }

    /// `∇̃^a ∇̃^b T_ab`.
    pub fn divdiv(&self) -> Result<SpherePoly> {
        self.divergence()?.divergence()
    }

    /// Covariant Hessian `∇̃_a ∇̃_b f = ∂_i∂_j F ∂_aX^i ∂_bX^j − (X·∇F) σ̃_ab`.
    pub fn hessian(f: &SpherePoly) -> Self {
        let ambient = f.ambient_gradient().map(|g| g.ambient_gradient());
        Self {
            ambient,
            metric: -&f.radial_derivative(),
        }
    }

    /// Tangential ambient matrix `Π (P + Q δ) Π`.
    pub fn projected(&self) -> Result<Mat3> {
        let p = self.folded();
        let x = coords();
        let px = mat_vec(&p, &x)?;
        let xpx = dot(&x, &px)?;
        let mut out = zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                let mut e = &p[i][j] - &x[i].try_mul(&px[j])?;
                e = &e - &px[i].try_mul(&x[j])?;
                e = &e + &x[i].try_mul(&x[j])?.try_mul(&xpx)?;
                out[i][j] = e;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.projected()?.iter().flatten().all(SpherePoly::is_zero))
    }

    /// Raise one index and apply to a covector: `T_ab σ̃^{bc} V_c`, in ambient
    /// form `P Π v`.
    pub fn apply(&self, v: &TangentField1) -> Result<TangentField1> {
        let p = self.folded();
        let x = coords();
        let r = radial(&v.ambient)?;
        let mut tangential = v.ambient.clone();
        for i in 0..3 {
            tangential[i] = &tangential[i] - &x[i].try_mul(&r)?;
        }
        Ok(TangentField1 {
            ambient: mat_vec(&p, &tangential)?,
        })
    }

    /// Evaluate `Π (P + Qδ) Π` at a floating point on the sphere.
    pub fn eval_projected_f64(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        let mut p = [[0.0; 3]; 3];
        let q = self.metric.eval_f64(x);
        for i in 0..3 {
            for j in 0..3 {
                p[i][j] = self.ambient[i][j].eval_f64(x) + if i == j { q } else { 0.0 };
            }
        }
        let proj = |i: usize, j: usize| (if i == j { 1.0 } else { 0.0 }) - x[i] * x[j];
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += proj(i, k) * p[k][l] * proj(l, j);
                    }
                }
                out[i][j] = s;
            }
        }
        out
    }
}

fn mat_vec(p: &Mat3, v: &[SpherePoly; 3]) -> Result<[SpherePoly; 3]> {
    let mut out: [SpherePoly; 3] = Default::default();
    for i in 0..3 {
        out[i] = dot(&p[i], v)?;
    }
    Ok(out)
}

impl Add<&TangentField2> for &TangentField2 {
    type Output = TangentField2;
    fn add(self, rhs: &TangentField2) -> TangentField2 {
        let mut ambient = zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                ambient[i][j] = &self.ambient[i][j] + &rhs.ambient[i][j];
            }
        }
        TangentField2 {
            ambient,
            metric: &self.metric + &rhs.metric,
        }
    }
}

impl Sub<&TangentField2> for &TangentField2 {
    type Output = TangentField2;
    fn sub(self, rhs: &TangentField2) -> TangentField2 {
        self + &-rhs
    }
}

impl Neg for &TangentField2 {
    type Output = TangentField2;
    fn neg(self) -> TangentField2 {
        self.scale(&-Rational::one())
    }
}
