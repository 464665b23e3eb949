//! The action, its closed forms on regions, and the bounds around them.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{kappa, kappa_tree_closed};
use crate::error::{Error, Result};
use crate::graph::{local_sums, GeodesicTable, Region, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionVariant {
    Plain,
    Ghy,
    RegionPlain,
    TreeAction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionReport {
    pub total: f64,
    /// `(edge id, curvature)`; empty for vertex-based closed forms.
    pub per_edge: Vec<(usize, f64)>,
    pub bound_upper: Option<f64>,
    pub variant: ActionVariant,
    /// Per-vertex closed form of the same quantity, where one exists.
    pub vertex_form: Option<f64>,
}

/// Sum of edge curvatures over `edge_set`.
pub fn action_plain(g: &WeightedGraph, geo: &GeodesicTable, edge_set: &[usize]) -> Result<ActionReport> {
    if let Some(&bad) = edge_set.iter().find(|&&e| e >= g.edge_count()) {
        return Err(Error::NotAnEdge(format!("#{bad}"), "?".into()));
    }
    let per_edge: Vec<(usize, f64)> = edge_set
        .par_iter()
        .map(|&e| {
            let (u, v) = g.edges()[e];
            kappa(g, geo, u, v).map(|k| (e, k))
        })
        .collect::<Result<_>>()?;
    let total = per_edge.iter().map(|p| p.1).sum();
    let whole = edge_set.len() == g.edge_count();
    Ok(ActionReport {
        total,
        per_edge,
        bound_upper: whole.then(|| bound_upper_global(g)),
        variant: ActionVariant::Plain,
        vertex_form: None,
    })
}

/// Action over every edge of `g`.
pub fn action_total(g: &WeightedGraph) -> Result<f64> {
    let geo = g.geodesics();
    let all: Vec<usize> = (0..g.edge_count()).collect();
    Ok(action_plain(g, &geo, &all)?.total)
}

fn require_tree_region(g: &WeightedGraph, region: &Region) -> Result<()> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    for &b in &region.boundary_vertices {
        region.inward_edge(g, b)?;
    }
    Ok(())
}

/// `Σ_interior (2 - c²/d) - Σ_boundary c²/d`.
pub fn action_ghy(g: &WeightedGraph, region: &Region) -> Result<ActionReport> {
    require_tree_region(g, region)?;
    let geo = g.geodesics();
    let ratio = |v: usize| {
        let (c, d) = local_sums(g, &geo, v);
        c * c / d
    };
    let interior: f64 = region.interior.iter().map(|&v| 2.0 - ratio(v)).sum();
    let boundary: f64 = region.boundary_vertices.iter().map(|&v| ratio(v)).sum();
    let total = interior - boundary;
    // c²/d >= 1 at every vertex.
    let bound = region.interior.len() as f64 - region.boundary_vertices.len() as f64;
    Ok(ActionReport {
        total,
        per_edge: Vec::new(),
        bound_upper: Some(bound),
        variant: ActionVariant::Ghy,
        vertex_form: Some(total),
    })
}

/// `(C_i, D_i)`: sums of `1/P` and `1/P²` over edges leaving `Σ` at boundary vertex `i`.
pub fn outside_sums(g: &WeightedGraph, region: &Region, i: usize) -> (f64, f64) {
    g.neighbors(i)
        .iter()
        .filter(|(w, _)| !region.contains(*w))
        .fold((0.0, 0.0), |(c, d), &(_, e)| {
            let p = g.length(e);
            (c + 1.0 / p, d + 1.0 / (p * p))
        })
}

/// `(1 - C P)/(1 + D P²)` for inward length `P`.
pub fn boundary_term(c_out: f64, d_out: f64, p: f64) -> f64 {
    (1.0 - c_out * p) / (1.0 + d_out * p * p)
}

/// Region action on a tree written vertex by vertex.
pub fn action_region_plain(g: &WeightedGraph, region: &Region) -> Result<ActionReport> {
    require_tree_region(g, region)?;
    let geo = g.geodesics();
    let interior: f64 = region
        .interior
        .iter()
        .map(|&v| {
            let (c, d) = local_sums(g, &geo, v);
            2.0 - c * c / d
        })
        .sum();
    let mut boundary = 0.0;
    for &b in &region.boundary_vertices {
        let (_, e) = region.inward_edge(g, b)?;
        let (c_out, d_out) = outside_sums(g, region, b);
        let p = g.length(e);
        let inv = 1.0 / p;
        boundary += 2.0 * inv * inv / (inv * inv + d_out) - inv * (inv + c_out) / (inv * inv + d_out);
    }
    let total = interior + boundary;
    let bound = (region.interior.len() + region.boundary_vertices.len()) as f64;
    Ok(ActionReport {
        total,
        per_edge: Vec::new(),
        bound_upper: Some(bound),
        variant: ActionVariant::RegionPlain,
        vertex_form: Some(total),
    })
}

/// Inward length minimizing the boundary term: `1/C + √(1/C² + 1/D)`.
pub fn boundary_minimizer(c_out: f64, d_out: f64) -> Result<f64> {
    if !(c_out > 0.0 && d_out > 0.0) {
        return Err(Error::NonpositiveInput);
    }
    Ok(1.0 / c_out + (1.0 / (c_out * c_out) + 1.0 / d_out).sqrt())
}

/// Tree-action of a hexagonal-lattice region: the closed-form tree
/// curvature summed over `E(Σ)`, with the per-vertex identity in `vertex_form`.
pub fn tree_action_hex(g: &WeightedGraph, region: &Region) -> Result<ActionReport> {
    for &v in region.sigma.iter() {
        if g.degree(v) != 3 {
            return Err(Error::NotHexRegion(format!("{} has degree {}", g.name(v), g.degree(v))));
        }
    }
    for &b in &region.boundary_vertices {
        region
            .inward_edge(g, b)
            .map_err(|_| Error::NotHexRegion(format!("{} lacks a unique inward edge", g.name(b))))?;
    }
    let geo = g.geodesics();
    let per_edge: Vec<(usize, f64)> = region
        .sigma_edges(g)
        .into_iter()
        .map(|e| {
            let (u, v) = g.edges()[e];
            kappa_tree_closed(g, &geo, u, v).map(|k| (e, k))
        })
        .collect::<Result<_>>()?;
    let total = per_edge.iter().map(|p| p.1).sum();
    let interior: f64 = region
        .interior
        .iter()
        .map(|&v| {
            let (c, d) = local_sums(g, &geo, v);
            2.0 - c * c / d
        })
        .sum();
    let identity = interior - region.boundary_vertices.len() as f64 / 3.0;
    Ok(ActionReport {
        total,
        per_edge,
        bound_upper: Some(region.interior.len() as f64 - region.boundary_vertices.len() as f64 / 3.0),
        variant: ActionVariant::TreeAction,
        vertex_form: Some(identity),
    })
}

/// `2|E|`.
pub fn bound_upper_global(g: &WeightedGraph) -> f64 {
    2.0 * g.edge_count() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCheck {
    pub ratio: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// Whether all incident geodesics are equal.
    pub equal_lengths: bool,
}

/// Checks `1 < c²/d <= deg(i)`; a leaf has ratio exactly 1.
pub fn ratio_bounds(g: &WeightedGraph, geo: &GeodesicTable, i: usize) -> RatioCheck {
    let (c, d) = local_sums(g, geo, i);
    let ratio = c * c / d;
    let deg = g.degree(i) as f64;
    let lower_ok = if g.degree(i) == 1 {
        (ratio - 1.0).abs() < 1e-12
    } else {
        ratio > 1.0
    };
    let ps: Vec<f64> = g.neighbors(i).iter().map(|&(w, _)| geo.dist(i, w)).collect();
    let equal_lengths = ps.iter().all(|&p| (p - ps[0]).abs() <= 1e-12 * ps[0]);
    RatioCheck {
        ratio,
        lower_ok,
        upper_ok: ratio <= deg * (1.0 + 1e-12),
        equal_lengths,
    }
}

/// `Σ_i Σ_{j∼i} (1 + P_ij⁻²/d_i)/2`, the limit of the partial-cost action.
pub fn partial_action_complete(g: &WeightedGraph) -> Result<f64> {
    if !g.is_complete() {
        return Err(Error::NotComplete);
    }
    let geo = g.geodesics();
    let mut total = 0.0;
    for i in 0..g.vertex_count() {
        let (_, d) = local_sums(g, &geo, i);
        for &(j, _) in g.neighbors(i) {
            let p = geo.dist(i, j);
            total += (1.0 + 1.0 / (p * p * d)) / 2.0;
        }
    }
    Ok(total)
}

/// Partial cost `(1 - t - t P⁻²/d_i) P` of moving `i`'s distribution toward `j`.
pub fn partial_cost(g: &WeightedGraph, geo: &GeodesicTable, i: usize, j: usize, t: f64) -> f64 {
    let (_, d) = local_sums(g, geo, i);
    let p = geo.dist(i, j);
    (1.0 - t - t / (p * p * d)) * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        ball_region, find_perfect_matching, gen_complete, gen_cycle, gen_hex_region, gen_tree, levels,
        matching_setting, random_connected, strong_boundary_free_edges, HexRegionSpec,
    };
    use crate::graph::Setting;
    use crate::transport::{neighbor_distribution, wasserstein};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_edges(g: &WeightedGraph) -> Vec<usize> {
        (0..g.edge_count()).collect()
    }

    fn total(g: &WeightedGraph) -> f64 {
        action_total(g).unwrap()
    }

    #[test]
    fn triangle_values() {
        let k3 = gen_complete(3).unwrap();
        assert!((total(&k3) - 4.5).abs() < 1e-9);
        // Edges (0,1), (0,2), (1,2): the long one is 0-2.
        let g = k3.with_lengths(&[1.0, 2.0, 1.0]).unwrap();
        assert!((total(&g) - 3.6).abs() < 1e-9);
    }

    #[test]
    fn square_minimum() {
        let c4 = gen_cycle(4).unwrap();
        let s = 1.0 + 2f64.sqrt();
        // Of the arrangements of two long and two short edges, the adjacent one is lowest.
        let mut best = f64::INFINITY;
        for lengths in [[s, s, 1.0, 1.0], [s, 1.0, s, 1.0], [s, 1.0, 1.0, s]] {
            best = best.min(total(&c4.with_lengths(&lengths).unwrap()));
        }
        assert!((best - (6.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn square_line_setting() {
        // One edge as long as the other three together; value from an LP oracle.
        let g = gen_cycle(4).unwrap().with_lengths(&[3.0, 1.0, 1.0, 1.0]).unwrap();
        assert!((total(&g) - 2.8).abs() < 1e-9);
    }

    #[test]
    fn ghy_star_example() {
        let g = gen_tree(2, 2).unwrap();
        let region = ball_region(&g, 0, 1).unwrap();
        let report = action_ghy(&g, &region).unwrap();
        assert!((report.total + 10.0).abs() < 1e-12);
    }

    #[test]
    fn region_plain_matches_edge_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g0 = gen_tree(2, 3).unwrap();
        let region = ball_region(&g0, 0, 2).unwrap();
        for _ in 0..20 {
            let lengths: Vec<f64> = (0..g0.edge_count()).map(|_| rng.gen_range(0.3..3.0)).collect();
            let g = g0.with_lengths(&lengths).unwrap();
            let geo = g.geodesics();
            let plain = action_plain(&g, &geo, &region.sigma_edges(&g)).unwrap().total;
            let closed = action_region_plain(&g, &region).unwrap().total;
            assert!((plain - closed).abs() < 1e-9, "{plain} vs {closed}");
        }
    }

    #[test]
    fn boundary_term_is_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let (c, d, p) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0), rng.gen_range(1e-6..10.0));
            assert!(boundary_term(c, d, p) <= 1.0);
        }
        assert!((boundary_term(2.0, 2.0, 1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn minimizer_examples() {
        let p = boundary_minimizer(2.0, 2.0).unwrap();
        assert!((p - (0.5 + 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((boundary_minimizer(1.0, 1.0).unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(boundary_minimizer(0.0, 1.0), Err(Error::NonpositiveInput));
    }

    /// Golden-section search, independent of the closed form.
    fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (x1, x2) = (b - r * (b - a), a + r * (b - a));
            if f(x1) < f(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        (a + b) / 2.0
    }

    proptest! {
        #[test]
        fn minimizer_matches_scan(c in 0.2f64..5.0, d in 0.2f64..5.0) {
            let f = |p: f64| boundary_term(c, d, p);
            let star = boundary_minimizer(c, d).unwrap();
            let grid = (1..=10000).map(|k| k as f64 * 1e-3).fold((0.0, f64::INFINITY), |best, p| {
                let v = f(p);
                if v < best.1 { (p, v) } else { best }
            });
            if star <= 10.0 {
                let golden = golden_min(f, (grid.0 - 2e-3).max(1e-9), grid.0 + 2e-3);
                prop_assert!((golden - star).abs() < 1e-6, "{} vs {}", golden, star);
            }
            prop_assert!(f(star) <= grid.1 + 1e-12);
        }

        #[test]
        fn global_bound_and_ratios(seed in any::<u64>(), n in 2usize..=7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_connected(&mut rng, n, 0.4, (0.2, 5.0));
            let geo = g.geodesics();
            let report = action_plain(&g, &geo, &all_edges(&g)).unwrap();
            prop_assert!(report.total <= bound_upper_global(&g) + 1e-9);
            for v in 0..n {
                let r = ratio_bounds(&g, &geo, v);
                prop_assert!(r.lower_ok && r.upper_ok);
                if (r.ratio - g.degree(v) as f64).abs() < 1e-12 * r.ratio {
                    prop_assert!(r.equal_lengths);
                }
            }
        }

        #[test]
        fn complete_graph_pairing(seed in any::<u64>(), n in 3usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g0 = gen_complete(n).unwrap();
            let lengths: Vec<f64> = (0..g0.edge_count()).map(|_| rng.gen_range(-1.5f64..1.5).exp()).collect();
            let g = g0.with_lengths(&lengths).unwrap();
            let geo = g.geodesics();
            prop_assert!((partial_action_complete(&g).unwrap() - (n * n) as f64 / 2.0).abs() < 1e-9);
            let t = 1e-4;
            for &(i, j) in g.edges() {
                let mu = neighbor_distribution(&g, &geo, i, t).unwrap();
                let nu = neighbor_distribution(&g, &geo, j, t).unwrap();
                let w = wasserstein(&geo, &mu, &nu).unwrap().cost;
                let pair = partial_cost(&g, &geo, i, j, t) + partial_cost(&g, &geo, j, i, t);
                // Holds up to second order in t.
                prop_assert!(2.0 * w >= pair - 100.0 * t * t * geo.dist(i, j));
                let (_, di) = local_sums(&g, &geo, i);
                let (_, dj) = local_sums(&g, &geo, j);
                let p = geo.dist(i, j);
                let k = kappa(&g, &geo, i, j).unwrap();
                prop_assert!(k <= 1.0 + (1.0 / di + 1.0 / dj) / (2.0 * p * p) + 1e-9);
            }
        }
    }

    #[test]
    fn partial_action_small_cases() {
        assert!((partial_action_complete(&gen_complete(4).unwrap()).unwrap() - 8.0).abs() < 1e-12);
        assert!((partial_action_complete(&gen_complete(3).unwrap()).unwrap() - 4.5).abs() < 1e-12);
        assert_eq!(partial_action_complete(&gen_cycle(4).unwrap()), Err(Error::NotComplete));
    }

    #[test]
    fn single_edge_bound() {
        let g = WeightedGraph::new(&["a", "b"], &[("a", "b", 3.0)]).unwrap();
        assert_eq!(bound_upper_global(&g), 2.0);
        assert!((total(&g) - 2.0).abs() < 1e-12);
        assert_eq!(bound_upper_global(&gen_complete(5).unwrap()), 20.0);
    }

    #[test]
    fn ratio_examples() {
        let g = WeightedGraph::new(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 2.0)]).unwrap();
        let geo = g.geodesics();
        let r = ratio_bounds(&g, &geo, 1);
        assert!((r.ratio - 9.0 / 5.0).abs() < 1e-15);
        assert!(r.lower_ok && r.upper_ok && !r.equal_lengths);
        let leaf = ratio_bounds(&g, &geo, 0);
        assert!(leaf.lower_ok && leaf.ratio == 1.0);
        let k4 = gen_complete(4).unwrap();
        let r = ratio_bounds(&k4, &k4.geodesics(), 0);
        assert!((r.ratio - 3.0).abs() < 1e-12 && r.equal_lengths);
    }

    #[test]
    fn hex_constant_tree_action() {
        let (g, region) = gen_hex_region(&HexRegionSpec::new(2)).unwrap();
        let report = tree_action_hex(&g, &region).unwrap();
        let want = -(region.interior.len() as f64) - region.boundary_vertices.len() as f64 / 3.0;
        assert!((report.total - want).abs() < 1e-9);
        assert!((report.vertex_form.unwrap() - report.total).abs() < 1e-9);
    }

    #[test]
    fn hex_random_interior_below_plain() {
        let (g0, region) = gen_hex_region(&HexRegionSpec::new(2)).unwrap();
        let free = strong_boundary_free_edges(&g0, &region);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let mut lengths = g0.lengths().to_vec();
            for &e in &free {
                lengths[e] = rng.gen_range(-0.7f64..0.7).exp();
            }
            let g = g0.with_lengths(&lengths).unwrap();
            let geo = g.geodesics();
            let tree = tree_action_hex(&g, &region).unwrap();
            assert!((tree.total - tree.vertex_form.unwrap()).abs() < 1e-9);
            for &(e, kt) in &tree.per_edge {
                let (u, v) = g.edges()[e];
                assert!(kt <= kappa(&g, &geo, u, v).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn ghy_random_settings_stay_above_constant() {
        let g0 = gen_tree(3, 3).unwrap();
        let region = ball_region(&g0, 0, 2).unwrap();
        let base = action_ghy(&g0, &region).unwrap().total;
        let lv = levels(&g0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let lengths: Vec<f64> = g0
                .edges()
                .iter()
                .map(|&(u, v)| if lv[u].max(lv[v]) == 3 { 1.0 } else { rng.gen_range(-1.0f64..1.0).exp() })
                .collect();
            let g = g0.with_lengths(&lengths).unwrap();
            assert!(action_ghy(&g, &region).unwrap().total >= base - 1e-9);
        }
    }

    #[test]
    fn matching_dominates_random_ghy() {
        // Path of 7 edges: has a perfect matching.
        let g0 = crate::generators::ratio_chain_path(&[1.0; 6]).unwrap();
        let region = crate::graph::extract_region(&g0, &(0..8).collect::<Vec<_>>()).unwrap();
        let m = find_perfect_matching(&g0).unwrap().unwrap();
        let s = matching_setting(&g0, &m, 1e-4, None).unwrap();
        let best = action_ghy(&g0.apply(&s).unwrap(), &region).unwrap().total;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let lengths: Vec<f64> = (0..7).map(|_| rng.gen_range(-2.0f64..2.0).exp()).collect();
            let g = g0.apply(&Setting { lengths }).unwrap();
            assert!(action_ghy(&g, &region).unwrap().total <= best + 1e-9);
        }
    }
}
