use std::f64::consts::PI;

use serde::Serialize;

/// Latitude–longitude node counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Grid {
    pub n_lat: usize,
    pub n_lon: usize,
}

/// Two spherical charts with disjoint pole sets: the standard one has poles on
/// the `z` axis, the rotated one on the `x` axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Standard,
    Rotated,
}

impl Chart {
    pub fn point(self, u: f64, v: f64) -> [f64; 3] {
        let (su, cu, sv, cv) = (u.sin(), u.cos(), v.sin(), v.cos());
        match self {
            Chart::Standard => [su * cv, su * sv, cu],
            Chart::Rotated => [cu, su * cv, su * sv],
        }
    }

    /// `(∂_u X, ∂_v X)`.
    pub fn tangents(self, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
        let (su, cu, sv, cv) = (u.sin(), u.cos(), v.sin(), v.cos());
        match self {
            Chart::Standard => ([cu * cv, cu * sv, -su], [-su * sv, su * cv, 0.0]),
            Chart::Rotated => ([-su, cu * cv, cu * sv], [0.0, -su * sv, su * cv]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub index: usize,
    pub chart: Chart,
    pub u: f64,
    pub v: f64,
    pub x: [f64; 3],
}

impl Grid {
    pub fn new(n_lat: usize, n_lon: usize) -> Self {
        Self { n_lat, n_lon }
    }

    pub fn len(&self) -> usize {
        self.n_lat * self.n_lon
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shifted latitudes `θ_i = (i + ½)π/n_lat`, so no node sits on a pole.
    /// Nodes within 30° of the `z` axis are expressed in the rotated chart.
    pub fn nodes(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_lat {
            let theta = (i as f64 + 0.5) * PI / self.n_lat as f64;
            for j in 0..self.n_lon {
                let phi = 2.0 * PI * j as f64 / self.n_lon as f64;
                let x = Chart::Standard.point(theta, phi);
                let node = if theta.sin() >= 0.5 {
                    Node { index: out.len(), chart: Chart::Standard, u: theta, v: phi, x }
                } else {
                    let u = x[0].clamp(-1.0, 1.0).acos();
                    let v = x[2].atan2(x[1]);
                    Node { index: out.len(), chart: Chart::Rotated, u, v, x }
                };
                out.push(node);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotated_nodes_reproduce_points() {
        for n in Grid::new(16, 32).nodes() {
            let p = n.chart.point(n.u, n.v);
            for k in 0..3 {
                assert!((p[k] - n.x[k]).abs() < 1e-14);
            }
            // Every node is away from the poles of its chart.
            assert!(n.u.sin() > 0.49);
        }
    }

    #[test]
    fn tangents_match_finite_differences() {
        let h = 1e-6;
        for chart in [Chart::Standard, Chart::Rotated] {
            let (u, v) = (0.7, 2.1);
            let (eu, ev) = chart.tangents(u, v);
            let (pu, mu) = (chart.point(u + h, v), chart.point(u - h, v));
            let (pv, mv) = (chart.point(u, v + h), chart.point(u, v - h));
            for k in 0..3 {
                assert!(((pu[k] - mu[k]) / (2.0 * h) - eu[k]).abs() < 1e-8);
                assert!(((pv[k] - mv[k]) / (2.0 * h) - ev[k]).abs() < 1e-8);
            }
        }
    }
}
