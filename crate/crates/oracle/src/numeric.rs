//! Geodesic-sphere boundary data sampled on a grid.
//!
//! All quantities are in the rescaled normalization where the flat unit
//! sphere has `σ = σ̃`, `H = 2`, `K = 1`.

use smallsphere_core::{Error, Result};

use crate::grid::{Chart, Grid, Node};
use crate::metric::NormalCoordMetric;

type Sym2 = [[f64; 2]; 2];

const MAX_RADIUS: f64 = 0.2;

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= MAX_RADIUS) {
        return Err(Error::Input(format!("radius {r} outside (0, {MAX_RADIUS}]")));
    }
    Ok(())
}

fn dot3(a: &[f64; 3], g: &[[f64; 3]; 3], b: &[f64; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += a[i] * g[i][j] * b[j];
        }
    }
    acc
}

/// `r⁻² σ_ab` at chart point `(u, v)` of the sphere of radius `r`.
pub fn chart_metric(m: &NormalCoordMetric, chart: Chart, u: f64, v: f64, r: f64) -> Sym2 {
    let x = chart.point(u, v);
    let (eu, ev) = chart.tangents(u, v);
    let g = m.eval([r * x[0], r * x[1], r * x[2]]);
    let e = dot3(&eu, &g, &eu);
    let f = dot3(&eu, &g, &ev);
    let gg = dot3(&ev, &g, &ev);
    [[e, f], [f, gg]]
}

fn positive_definite(s: &Sym2) -> bool {
    s[0][0] > 0.0 && s[0][0] * s[1][1] - s[0][1] * s[1][0] > 0.0
}

fn not_positive(node: &Node, r: f64) -> Error {
    Error::Input(format!(
        "induced metric not positive definite at node {} for r = {r}; jet too large",
        node.index
    ))
}

/// Rescaled induced metric at every node, in that node's chart.
pub fn induced_metric_numeric(m: &NormalCoordMetric, r: f64, grid: &Grid) -> Result<Vec<Sym2>> {
    check_radius(r)?;
    grid.nodes()
        .iter()
        .map(|n| {
            let s = chart_metric(m, n.chart, n.u, n.v, r);
            if positive_definite(&s) {
                Ok(s)
            } else {
                Err(not_positive(n, r))
            }
        })
        .collect()
}

fn inverse(s: &Sym2) -> Sym2 {
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    [[s[1][1] / det, -s[0][1] / det], [-s[1][0] / det, s[0][0] / det]]
}

fn unscaled_metric(m: &NormalCoordMetric, n: &Node, r: f64) -> Sym2 {
    chart_metric(m, n.chart, n.u, n.v, r).map(|row| row.map(|c| c * r * r))
}

fn radial_derivative(m: &NormalCoordMetric, n: &Node, r: f64, h: f64) -> Sym2 {
    let plus = unscaled_metric(m, n, r + h);
    let minus = unscaled_metric(m, n, r - h);
    let mut out = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = (plus[a][b] - minus[a][b]) / (2.0 * h);
        }
    }
    out
}

/// `H = r · tr(σ⁻¹ · ½∂_r σ)` with `∂_r σ` from central differences at steps
/// `r/100` and `r/200`, Richardson-combined.
pub fn mean_curvature_numeric(m: &NormalCoordMetric, r: f64, grid: &Grid) -> Result<Vec<f64>> {
    check_radius(r)?;
    let h = r / 100.0;
    grid.nodes()
        .iter()
        .map(|n| {
            let s = unscaled_metric(m, n, r);
            if !positive_definite(&s) {
                return Err(not_positive(n, r));
            }
            let coarse = radial_derivative(m, n, r, h);
            let fine = radial_derivative(m, n, r, h / 2.0);
            let inv = inverse(&s);
            let mut tr = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    let d = (4.0 * fine[a][b] - coarse[a][b]) / 3.0;
                    tr += inv[a][b] * 0.5 * d;
                }
            }
            Ok(r * tr)
        })
        .collect()
}

/// Metric derivatives needed by the Brioschi formula.
struct Jet2 {
    s: Sym2,
    // [E, F, G] derivatives
    du: [f64; 3],
    dv: [f64; 3],
    e_vv: f64,
    f_uv: f64,
    g_uu: f64,
}

const D1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const D2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

/// Fourth-order central differences of the chart metric with step `h`.
fn metric_jet(m: &NormalCoordMetric, n: &Node, r: f64, h: f64) -> Jet2 {
    let mut samples = [[[0.0; 3]; 5]; 5];
    for (i, row) in samples.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let du = (i as f64 - 2.0) * h;
            let dv = (j as f64 - 2.0) * h;
            let s = chart_metric(m, n.chart, n.u + du, n.v + dv, r);
            *cell = [s[0][0], s[0][1], s[1][1]];
        }
    }
    let mut du = [0.0; 3];
    let mut dv = [0.0; 3];
    for c in 0..3 {
        du[c] = (0..5).map(|i| D1[i] * samples[i][2][c]).sum::<f64>() / (12.0 * h);
        dv[c] = (0..5).map(|j| D1[j] * samples[2][j][c]).sum::<f64>() / (12.0 * h);
    }
    let e_vv = (0..5).map(|j| D2[j] * samples[2][j][0]).sum::<f64>() / (12.0 * h * h);
    let g_uu = (0..5).map(|i| D2[i] * samples[i][2][2]).sum::<f64>() / (12.0 * h * h);
    let mut f_uv = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            f_uv += D1[i] * D1[j] * samples[i][j][1];
        }
    }
    f_uv /= 144.0 * h * h;
    let c = samples[2][2];
    Jet2 {
        s: [[c[0], c[1]], [c[1], c[2]]],
        du,
        dv,
        e_vv,
        f_uv,
        g_uu,
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn brioschi(j: &Jet2) -> f64 {
    let (e, f, g) = (j.s[0][0], j.s[0][1], j.s[1][1]);
    let [e_u, f_u, g_u] = j.du;
    let [e_v, f_v, g_v] = j.dv;
    let a = det3([
        [-0.5 * j.e_vv + j.f_uv - 0.5 * j.g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ]);
    let b = det3([[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]]);
    let w = e * g - f * f;
    (a - b) / (w * w)
}

/// Step of the chart-coordinate difference stencil.
const CHART_STEP: f64 = 1.5e-2;

/// Gauss curvature of the rescaled sphere by the Brioschi formula, with the
/// `h⁴` stencil error removed by Richardson extrapolation in the step.
pub fn gauss_curvature_numeric(m: &NormalCoordMetric, r: f64, grid: &Grid) -> Result<Vec<f64>> {
    check_radius(r)?;
    grid.nodes()
        .iter()
        .map(|n| {
            let coarse = metric_jet(m, n, r, CHART_STEP);
            if !positive_definite(&coarse.s) {
                return Err(not_positive(n, r));
            }
            let fine = metric_jet(m, n, r, CHART_STEP / 2.0);
            Ok((16.0 * brioschi(&fine) - brioschi(&coarse)) / 15.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallsphere_core::CurvatureJet;

    #[test]
    fn flat_sphere_data() {
        let m = NormalCoordMetric::new(CurvatureJet::flat());
        let grid = Grid::new(16, 32);
        for r in [0.1, 0.02] {
            for h in mean_curvature_numeric(&m, r, &grid).unwrap() {
                assert!((h - 2.0).abs() < 1e-10, "{h}");
            }
            for k in gauss_curvature_numeric(&m, r, &grid).unwrap() {
                assert!((k - 1.0).abs() < 1e-10, "{k}");
            }
        }
    }

    #[test]
    fn flat_induced_metric_is_round() {
        let m = NormalCoordMetric::new(CurvatureJet::flat());
        let grid = Grid::new(16, 32);
        let nodes = grid.nodes();
        for (s, n) in induced_metric_numeric(&m, 0.1, &grid).unwrap().iter().zip(&nodes) {
            let (eu, ev) = n.chart.tangents(n.u, n.v);
            let dot = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            assert!((s[0][0] - dot(&eu, &eu)).abs() < 1e-14);
            assert!((s[0][1] - dot(&eu, &ev)).abs() < 1e-14);
            assert!((s[1][1] - dot(&ev, &ev)).abs() < 1e-14);
        }
    }

    #[test]
    fn radius_out_of_range_is_rejected() {
        let m = NormalCoordMetric::new(CurvatureJet::flat());
        assert!(mean_curvature_numeric(&m, 0.5, &Grid::new(16, 32)).is_err());
        assert!(induced_metric_numeric(&m, 0.0, &Grid::new(16, 32)).is_err());
    }
}
