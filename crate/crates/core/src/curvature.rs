//! Edge curvature: finite-t values, the t → 0 limit, and the tree closed form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{local_sums, GeodesicTable, WeightedGraph};
use crate::transport::{neighbor_distribution, wasserstein};

/// Starting t for the limit search.
pub const T_START: f64 = 0.25;
/// Two successive `K(t)/t` values closer than this end the search.
pub const LIMIT_TOL: f64 = 1e-10;
pub const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub edge: usize,
    /// Sampled `(t, K(t))` pairs, largest t first.
    pub kappa_t: Vec<(f64, f64)>,
    pub kappa: f64,
    /// Largest sampled t at which `K(t)/t` already equals the limit.
    pub breakpoint_t: f64,
}

/// `K(t) = 1 - W(t)/P` for the edge `i-j`.
pub fn kappa_t(g: &WeightedGraph, geo: &GeodesicTable, i: usize, j: usize, t: f64) -> Result<f64> {
    g.edge_id(i, j)?;
    let mu = neighbor_distribution(g, geo, i, t)?;
    let nu = neighbor_distribution(g, geo, j, t)?;
    let w = wasserstein(geo, &mu, &nu)?.cost;
    Ok(1.0 - w / geo.dist(i, j))
}

/// The limit of `K(t)/t` with its sampling trace.
///
/// `K` is concave, piecewise linear and vanishes at 0, so once `K(t)/t` and
/// `K(t/2)/(t/2)` coincide the function is linear on `[0, t]`.
pub fn kappa_report(g: &WeightedGraph, geo: &GeodesicTable, i: usize, j: usize) -> Result<CurvatureReport> {
    let edge = g.edge_id(i, j)?;
    let mut t = T_START;
    let mut k = kappa_t(g, geo, i, j, t)?;
    let mut samples = vec![(t, k)];
    for _ in 0..MAX_HALVINGS {
        let half = t / 2.0;
        let kh = kappa_t(g, geo, i, j, half)?;
        samples.push((half, kh));
        if (kh / half - k / t).abs() < LIMIT_TOL {
            return Ok(CurvatureReport {
                edge,
                kappa_t: samples,
                kappa: kh / half,
                breakpoint_t: t,
            });
        }
        t = half;
        k = kh;
    }
    Err(Error::NoConvergence(format!(
        "curvature limit of {}-{} not reached after {MAX_HALVINGS} halvings",
        g.name(i),
        g.name(j)
    )))
}

/// Lin-Lu-Yau curvature of the edge `i-j`.
pub fn kappa(g: &WeightedGraph, geo: &GeodesicTable, i: usize, j: usize) -> Result<f64> {
    kappa_report(g, geo, i, j).map(|r| r.kappa)
}

/// `(2/P²)(1/d_i + 1/d_j) - (1/P)(c_i/d_i + c_j/d_j)`.
pub fn kappa_tree_closed(g: &WeightedGraph, geo: &GeodesicTable, i: usize, j: usize) -> Result<f64> {
    g.edge_id(i, j)?;
    let p = geo.dist(i, j);
    let (ci, di) = local_sums(g, geo, i);
    let (cj, dj) = local_sums(g, geo, j);
    Ok(2.0 / (p * p) * (1.0 / di + 1.0 / dj) - (ci / di + cj / dj) / p)
}
