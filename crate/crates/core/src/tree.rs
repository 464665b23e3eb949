//! Tree equations of motion and the solution families built on them.
//!
//! On a tree the geodesic between adjacent vertices is the edge length, so
//! everything here reads lengths straight from a [`Setting`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::interior_edges;
use crate::graph::{Region, Setting, WeightedGraph};

/// `c_v / d_v` for every vertex under the given lengths.
pub fn vertex_ratios(g: &WeightedGraph, lengths: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; g.vertex_count()];
    let mut d = vec![0.0; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let inv = 1.0 / lengths[e];
        c[u] += inv;
        c[v] += inv;
        d[u] += inv * inv;
        d[v] += inv * inv;
    }
    c.iter().zip(&d).map(|(c, d)| c / d).collect()
}

/// `(a_i² + a_j²)/P - a_i - a_j` with `a = c/d`.
pub fn teom_value(a_i: f64, a_j: f64, p: f64) -> f64 {
    (a_i * a_i + a_j * a_j) / p - a_i - a_j
}

fn check_setting(g: &WeightedGraph, setting: &Setting) -> Result<()> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    if setting.lengths.len() != g.edge_count() {
        return Err(Error::SettingMismatch(format!(
            "{} lengths for {} edges",
            setting.lengths.len(),
            g.edge_count()
        )));
    }
    if let Some(&bad) = setting.lengths.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::NonpositiveLength("*".into(), "*".into(), bad));
    }
    Ok(())
}

/// Residual of the tree equation of motion on edge `e`.
pub fn teom_residual(g: &WeightedGraph, setting: &Setting, e: usize) -> Result<f64> {
    check_setting(g, setting)?;
    let (u, v) = g.edges()[e];
    if g.degree(u) < 2 || g.degree(v) < 2 {
        return Err(Error::BoundaryEdge(g.name(u).to_string(), g.name(v).to_string()));
    }
    let a = vertex_ratios(g, &setting.lengths);
    Ok(teom_value(a[u], a[v], setting.lengths[e]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EomReport {
    /// `(edge id, residual)` for every interior edge.
    pub residuals: Vec<(usize, f64)>,
    pub max_abs_residual: f64,
    pub is_solution: bool,
}

/// Residuals on all edges that do not touch a leaf.
pub fn verify_solution(g: &WeightedGraph, setting: &Setting, tol: f64) -> Result<EomReport> {
    check_setting(g, setting)?;
    let a = vertex_ratios(g, &setting.lengths);
    let residuals: Vec<(usize, f64)> = interior_edges(g)
        .into_iter()
        .map(|e| {
            let (u, v) = g.edges()[e];
            (e, teom_value(a[u], a[v], setting.lengths[e]))
        })
        .collect();
    let max_abs_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.1.abs()));
    Ok(EomReport {
        residuals,
        max_abs_residual,
        is_solution: max_abs_residual < tol,
    })
}

/// Divides every length by `lambda`.
pub fn scale_setting(setting: &Setting, lambda: f64) -> Result<Setting> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonpositiveScale(lambda));
    }
    Ok(Setting {
        lengths: setting.lengths.iter().map(|l| l / lambda).collect(),
    })
}

/// The two admissible successors of ratio `r` along a path: `r` and `(r+1)/(r-1)`.
pub fn t1_next_ratios(r: f64) -> Result<[f64; 2]> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::RatioNotGreaterThanOne(r));
    }
    Ok([r, (r + 1.0) / (r - 1.0)])
}

/// `Σ_{i ∈ ∂Σ} Σ_{j ∼ i, j ∈ Σ} (a_i / P_ij - 1)`; negative rules out bulk solutions.
pub fn nogo_indicator(g: &WeightedGraph, region: &Region, setting: &Setting) -> Result<f64> {
    check_setting(g, setting)?;
    let a = vertex_ratios(g, &setting.lengths);
    let mut total = 0.0;
    for &i in &region.boundary_vertices {
        for &(j, e) in g.neighbors(i) {
            if region.contains(j) {
                total += a[i] / setting.lengths[e] - 1.0;
            }
        }
    }
    Ok(total)
}

/// Curvature and `c²/d` of the geometric half-half solution with ratio `r`.
pub fn geometric_half_half_stats(q: usize, r: f64) -> Result<(f64, f64)> {
    if q.is_multiple_of(2) {
        return Err(Error::QNotOdd(q));
    }
    if r.is_nan() || r <= 0.0 {
        return Err(Error::NonpositiveInput);
    }
    let q = q as f64;
    let kappa = (3.0 - q) / (1.0 + q) - 2.0 * r / (1.0 + r * r);
    let ratio = (q + 1.0) * (1.0 + r).powi(2) / (2.0 * (1.0 + r * r));
    Ok((kappa, ratio))
}

/// Roots `x` of `αy(y+1)(x²+1) = x(x+1)(y²+1)`.
pub fn two_progression_x(alpha: f64, y: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && y > 0.0) {
        return Err(Error::NonpositiveInput);
    }
    // (A - B) x² - B x + A = 0
    let a = alpha * y * (y + 1.0);
    let b = y * y + 1.0;
    let lead = a - b;
    if lead.abs() <= 1e-14 * b {
        return Ok(vec![a / b]);
    }
    let disc = b * b - 4.0 * a * lead;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let sq = disc.sqrt();
    // Avoid cancellation by pairing the larger root with Vieta's product.
    let big = (b + b.signum() * sq) / (2.0 * lead);
    let small = a / (lead * big);
    Ok(vec![big, small])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ball_region, gen_tree, geometric_half_half, ratio_chain_path};
    use proptest::prelude::*;

    #[test]
    fn constant_trees_solve() {
        for q in 1..=4 {
            let g = gen_tree(q, 4).unwrap();
            let s = Setting::constant(&g, 1.0).unwrap();
            let r = verify_solution(&g, &s, 1e-12).unwrap();
            assert!(r.is_solution);
            assert!(!r.residuals.is_empty());
        }
    }

    #[test]
    fn alternating_t1_chain_solves() {
        let g = ratio_chain_path(&[2.0, 3.0, 2.0, 3.0, 2.0]).unwrap();
        let s = Setting::of(&g);
        assert!(verify_solution(&g, &s, 1e-9).unwrap().is_solution);
    }

    #[test]
    fn local_extremum_breaks_equation() {
        // Middle edge is strictly longer than both neighbours.
        let g = ratio_chain_path(&[2.0, 0.25]).unwrap();
        let s = Setting::of(&g);
        assert!(teom_residual(&g, &s, 1).unwrap().abs() > 1e-3);
        let g = ratio_chain_path(&[0.5, 3.0]).unwrap();
        let s = Setting::of(&g);
        assert!(teom_residual(&g, &s, 1).unwrap().abs() > 1e-3);
    }

    #[test]
    fn residual_errors() {
        let g = gen_tree(2, 2).unwrap();
        let s = Setting::of(&g);
        let leaf_edge = g.edge_count() - 1;
        assert!(matches!(teom_residual(&g, &s, leaf_edge), Err(Error::BoundaryEdge(..))));
        let k3 = crate::generators::gen_complete(3).unwrap();
        assert_eq!(teom_residual(&k3, &Setting::of(&k3), 0), Err(Error::NotATree));
    }

    #[test]
    fn scaling() {
        let g = gen_tree(2, 2).unwrap();
        let s = Setting::constant(&g, 1.0).unwrap();
        assert_eq!(scale_setting(&s, 2.0).unwrap(), Setting::constant(&g, 0.5).unwrap());
        assert_eq!(scale_setting(&s, 1.0).unwrap(), s);
        assert_eq!(scale_setting(&s, -1.0), Err(Error::NonpositiveScale(-1.0)));
        let (g, s) = geometric_half_half(3, 3, 2.0).unwrap();
        for lambda in [0.5, 2.0, 7.0] {
            let scaled = scale_setting(&s, lambda).unwrap();
            assert!(verify_solution(&g, &scaled, 1e-9).unwrap().is_solution);
        }
    }

    #[test]
    fn next_ratios() {
        assert_eq!(t1_next_ratios(2.0).unwrap(), [2.0, 3.0]);
        assert_eq!(t1_next_ratios(3.0).unwrap(), [3.0, 2.0]);
        let r = 1.0 + 2f64.sqrt();
        let [a, b] = t1_next_ratios(r).unwrap();
        assert_eq!(a, r);
        assert!((b - r).abs() < 1e-14);
        assert!(t1_next_ratios(1.0).is_err());
    }

    #[test]
    fn nogo_signs() {
        let g = gen_tree(2, 3).unwrap();
        let region = ball_region(&g, 0, 2).unwrap();
        let lv = crate::generators::levels(&g, 0);
        let s = Setting::constant(&g, 1.0).unwrap();
        assert!(nogo_indicator(&g, &region, &s).unwrap().abs() < 1e-12);
        let with_inward = |inward: f64| {
            let lengths = g
                .edges()
                .iter()
                .map(|&(u, v)| if lv[u].max(lv[v]) == 2 { inward } else { 1.0 })
                .collect();
            Setting { lengths }
        };
        assert!(nogo_indicator(&g, &region, &with_inward(1.5)).unwrap() < 0.0);
        assert!(nogo_indicator(&g, &region, &with_inward(0.7)).unwrap() > 0.0);
    }

    #[test]
    fn half_half_stats_examples() {
        let (k, ratio) = geometric_half_half_stats(3, 1.0).unwrap();
        assert!((k + 1.0).abs() < 1e-12 && (ratio - 4.0).abs() < 1e-12);
        let (k, _) = geometric_half_half_stats(1, 2.0).unwrap();
        assert!((k - 0.2).abs() < 1e-12);
        let (k, ratio) = geometric_half_half_stats(5, 1.0).unwrap();
        assert!((k + 4.0 / 3.0).abs() < 1e-12 && (ratio - 6.0).abs() < 1e-12);
        assert_eq!(geometric_half_half_stats(2, 1.0), Err(Error::QNotOdd(2)));
    }

    #[test]
    fn two_progression_roots() {
        let roots = two_progression_x(0.25, 3.0).unwrap();
        let want = (46f64.sqrt() - 5.0) / 7.0;
        assert!(roots.iter().any(|&x| (x - want).abs() < 1e-14));
        assert_eq!(two_progression_x(1.0, 1.0).unwrap(), vec![1.0]);
        assert!(matches!(two_progression_x(10.0, 1.0), Err(Error::NegativeDiscriminant(_))));
    }

    proptest! {
        #[test]
        fn roots_satisfy_defining_identity(alpha in 0.05f64..3.0, y in 0.1f64..5.0) {
            if let Ok(roots) = two_progression_x(alpha, y) {
                for x in roots {
                    let lhs = alpha * y * (y + 1.0) * (x * x + 1.0);
                    let rhs = x * (x + 1.0) * (y * y + 1.0);
                    prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1.0));
                }
            }
        }

        #[test]
        fn q1_half_half_curvature_positive(r in 1.0001f64..100.0) {
            prop_assert!(geometric_half_half_stats(1, r).unwrap().0 > 0.0);
        }

        #[test]
        fn ratio_is_c2_over_d(q in prop::sample::select(vec![1usize, 3, 5, 7]), r in 1.01f64..10.0) {
            let (_, ratio) = geometric_half_half_stats(q, r).unwrap();
            let half = (q + 1) as f64 / 2.0;
            let c = half * (1.0 + 1.0 / r);
            let d = half * (1.0 + 1.0 / (r * r));
            prop_assert!((ratio - c * c / d).abs() < 1e-12 * ratio);
        }

        #[test]
        fn scaling_scales_residuals(seed in any::<u64>(), lambda in 0.1f64..10.0) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = gen_tree(2, 3).unwrap();
            let s = Setting { lengths: (0..g.edge_count()).map(|_| rng.gen_range(0.5..2.0)).collect() };
            let base = verify_solution(&g, &s, 1e-9).unwrap();
            let scaled = verify_solution(&g, &scale_setting(&s, lambda).unwrap(), 1e-9).unwrap();
            for (a, b) in base.residuals.iter().zip(&scaled.residuals) {
                prop_assert!((a.1 / lambda - b.1).abs() < 1e-12 * (1.0 + a.1.abs()));
            }
        }
    }
}
