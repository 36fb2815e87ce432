//! Floating-point oracle for the small-sphere expansion.
//!
//! The truncated normal-coordinate metric of a curvature jet makes every
//! coordinate sphere a geodesic sphere, so the boundary data of small geodesic
//! spheres can be sampled directly on a latitude–longitude grid. Fitting the
//! samples at several radii as polynomials in `r²` gives numerical values of
//! the expansion coefficients, which are then compared with the exact
//! pipeline.

// Tensor code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

mod fit;
mod grid;
mod metric;
mod numeric;
mod run;

pub use fit::{fit_expansion, FitResult};
pub use grid::{Chart, Grid, Node};
pub use metric::{scale_to_radius, NormalCoordMetric};
pub use numeric::{
    chart_metric, gauss_curvature_numeric, induced_metric_numeric, mean_curvature_numeric,
};
pub use run::{
    run_oracle, Check, Convergence, CsvRow, KDotArbiter, OracleConfig, OracleRun, OracleSummary,
    Tolerances,
};
