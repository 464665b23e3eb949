//! Graph families and edge-length settings.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{extract_region, Region, Setting, WeightedGraph};
use crate::tree::{t1_next_ratios, two_progression_x};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("v{k}")).collect()
}

/// Truncation of the `(q+1)`-regular tree with unit lengths.
///
/// Vertex `v0` is the root; leaves sit at distance `depth` from it and
/// vertices are numbered level by level.
pub fn gen_tree(q: usize, depth: usize) -> Result<WeightedGraph> {
    if q < 1 || depth < 1 {
        return Err(Error::BadParams(format!("gen_tree needs q, depth >= 1, got q={q}, depth={depth}")));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1;
    for level in 0..depth {
        let mut next = Vec::new();
        for &p in &frontier {
            let kids = if level == 0 { q + 1 } else { q };
            for _ in 0..kids {
                edges.push((p, next_id, 1.0));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    WeightedGraph::from_indexed(names(next_id), &edges)
}

/// Hop distance of every vertex from `root`.
pub fn levels(g: &WeightedGraph, root: usize) -> Vec<usize> {
    let mut level = vec![usize::MAX; g.vertex_count()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if level[w] == usize::MAX {
                level[w] = level[u] + 1;
                queue.push_back(w);
            }
        }
    }
    level
}

/// `Σ` = vertices within `max_level` hops of the root.
pub fn ball_region(g: &WeightedGraph, root: usize, max_level: usize) -> Result<Region> {
    let lv = levels(g, root);
    let sigma: Vec<usize> = (0..g.vertex_count()).filter(|&v| lv[v] <= max_level).collect();
    extract_region(g, &sigma)
}

/// Edges whose endpoints both have degree above one.
pub fn interior_edges(g: &WeightedGraph) -> Vec<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| g.degree(u) > 1 && g.degree(v) > 1)
        .map(|(e, _)| e)
        .collect()
}

pub fn gen_complete(n: usize) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::BadParams(format!("complete graph needs n >= 3, got {n}")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1.0));
        }
    }
    WeightedGraph::from_indexed(names(n), &edges)
}

/// Cycle `v0 - v1 - ... - v(n-1) - v0`.
pub fn gen_cycle(n: usize) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::BadParams(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n, 1.0)).collect();
    WeightedGraph::from_indexed(names(n), &edges)
}

/// Path whose consecutive lengths grow by the given ratios, starting at 1.
pub fn ratio_chain_path(ratios: &[f64]) -> Result<WeightedGraph> {
    let mut len = 1.0;
    let mut edges = vec![(0, 1, len)];
    for (k, &r) in ratios.iter().enumerate() {
        len *= r;
        edges.push((k + 1, k + 2, len));
    }
    WeightedGraph::from_indexed(names(ratios.len() + 2), &edges)
}

/// Random spanning tree plus each remaining pair with probability `p_extra`.
/// Lengths are log-uniform on `range`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p_extra: f64, range: (f64, f64)) -> WeightedGraph {
    let (lo, hi) = (range.0.ln(), range.1.ln());
    let len = |rng: &mut R| rng.gen_range(lo..=hi).exp();
    let mut edges = Vec::new();
    let mut used = HashSet::new();
    for k in 1..n {
        let p = rng.gen_range(0..k);
        used.insert((p, k));
        edges.push((p, k, len(rng)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !used.contains(&(u, v)) && rng.gen_bool(p_extra) {
                edges.push((u, v, len(rng)));
            }
        }
    }
    WeightedGraph::from_indexed(names(n), &edges).expect("spanning tree keeps the graph connected")
}

pub fn constant_setting(g: &WeightedGraph, a: f64) -> Result<Setting> {
    Setting::constant(g, a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HexRegionSpec {
    pub radius: usize,
    pub strong_margin: usize,
}

impl HexRegionSpec {
    pub fn new(radius: usize) -> Self {
        HexRegionSpec {
            radius,
            strong_margin: 2,
        }
    }
}

const HEX_CORNERS: [(i64, i64); 6] = [(1, 1), (0, 2), (-1, 1), (-1, -1), (0, -2), (1, -1)];

fn hex_distance(q: i64, r: i64) -> usize {
    ((q.abs() + r.abs() + (q + r).abs()) / 2) as usize
}

/// Hexagonal patch with padding rings; unit lengths.
///
/// The patch holds every hexagon within `radius - 1` steps of the center
/// hexagon. `Σ` is the patch plus its pendant vertices, so each boundary
/// vertex of `Σ` has exactly one edge into `Σ`.
pub fn gen_hex_region(spec: &HexRegionSpec) -> Result<(WeightedGraph, Region)> {
    if spec.radius < 1 {
        return Err(Error::BadParams("hex radius must be >= 1".into()));
    }
    if spec.strong_margin < 2 {
        return Err(Error::BadParams("strong margin must be >= 2".into()));
    }
    let patch = spec.radius as i64 - 1;
    let outer = patch + spec.strong_margin as i64 + 1;
    let mut corners: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut hex_edges = BTreeSet::new();
    let mut patch_corners = BTreeSet::new();
    for q in -outer..=outer {
        for r in -outer..=outer {
            let dist = hex_distance(q, r) as i64;
            if dist > outer {
                continue;
            }
            let (cx, cy) = (2 * q + r, 3 * r);
            let pts: Vec<(i64, i64)> = HEX_CORNERS.iter().map(|&(dx, dy)| (cx + dx, cy + dy)).collect();
            for k in 0..6 {
                let (a, b) = (pts[k], pts[(k + 1) % 6]);
                hex_edges.insert((a.min(b), a.max(b)));
                if dist <= patch {
                    patch_corners.insert(a);
                }
            }
        }
    }
    for &(a, b) in &hex_edges {
        corners.insert(a, 0);
        corners.insert(b, 0);
    }
    for (k, id) in corners.values_mut().enumerate() {
        *id = k;
    }
    let vertex_names: Vec<String> = corners.keys().map(|(x, y)| format!("h{x}_{y}")).collect();
    let edges: Vec<(usize, usize, f64)> = hex_edges
        .iter()
        .map(|(a, b)| (corners[a], corners[b], 1.0))
        .collect();
    let g = WeightedGraph::from_indexed(vertex_names, &edges)?;
    let inner: BTreeSet<usize> = patch_corners.iter().map(|p| corners[p]).collect();
    let mut sigma = inner.clone();
    for &v in &inner {
        for &(w, _) in g.neighbors(v) {
            sigma.insert(w);
        }
    }
    let region = extract_region(&g, &sigma.into_iter().collect::<Vec<_>>())?;
    Ok((g, region))
}

/// Edges of `E(Σ)` that the strong boundary condition leaves free: both
/// endpoints at least two hops from `∂Σ`.
pub fn strong_boundary_free_edges(g: &WeightedGraph, region: &Region) -> Vec<usize> {
    let mut hop = vec![usize::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &b in &region.boundary_vertices {
        hop[b] = 0;
        queue.push_back(b);
    }
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if hop[w] == usize::MAX {
                hop[w] = hop[u] + 1;
                queue.push_back(w);
            }
        }
    }
    region
        .sigma_edges(g)
        .into_iter()
        .filter(|&e| {
            let (u, v) = g.edges()[e];
            region.interior.contains(&u) && region.interior.contains(&v) && hop[u] >= 2 && hop[v] >= 2
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub edges: Vec<usize>,
    pub perfect: bool,
}

impl Matching {
    /// Checks disjointness and recomputes the perfect flag.
    pub fn new(g: &WeightedGraph, edges: Vec<usize>) -> Result<Self> {
        let mut covered = vec![false; g.vertex_count()];
        for &e in &edges {
            let (u, v) = g.edges()[e];
            if covered[u] || covered[v] {
                return Err(Error::BadParams("matching edges share a vertex".into()));
            }
            covered[u] = true;
            covered[v] = true;
        }
        let perfect = covered.iter().all(|&c| c);
        Ok(Matching { edges, perfect })
    }
}

/// Exhaustive search with memoized dead ends.
pub fn find_perfect_matching(g: &WeightedGraph) -> Result<Option<Matching>> {
    let n = g.vertex_count();
    if n > 24 {
        return Err(Error::TooLarge(n));
    }
    if n % 2 == 1 {
        return Ok(None);
    }
    fn search(g: &WeightedGraph, used: u32, full: u32, dead: &mut HashSet<u32>, out: &mut Vec<usize>) -> bool {
        if used == full {
            return true;
        }
        if dead.contains(&used) {
            return false;
        }
        let v = (!used).trailing_zeros() as usize;
        for &(w, e) in g.neighbors(v) {
            if used & (1 << w) == 0 {
                out.push(e);
                if search(g, used | 1 << v | 1 << w, full, dead, out) {
                    return true;
                }
                out.pop();
            }
        }
        dead.insert(used);
        false
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut out = Vec::new();
    if search(g, 0, full, &mut HashSet::new(), &mut out) {
        out.sort_unstable();
        Ok(Some(Matching {
            edges: out,
            perfect: true,
        }))
    } else {
        Ok(None)
    }
}

/// Matched edges get `eps`; the rest keep `off` (unit lengths when absent).
pub fn matching_setting(g: &WeightedGraph, m: &Matching, eps: f64, off: Option<&Setting>) -> Result<Setting> {
    if !m.perfect {
        return Err(Error::NotPerfect);
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonpositiveLength("matching".into(), "eps".into(), eps));
    }
    let mut lengths = match off {
        Some(s) => s.lengths.clone(),
        None => vec![1.0; g.edge_count()],
    };
    for &e in &m.edges {
        lengths[e] = eps;
    }
    Setting::new(g, lengths)
}

/// Assigns tree lengths from per-vertex slot classes.
///
/// Every vertex carries the multiset `kinds` of slot classes (one per
/// incident edge) and a scale `λ_v`. An edge in class `k` at one endpoint is
/// in class `partner[k]` at the other, and its length is `λ_v · factor(v, k)`
/// seen from either side.
fn assign_by_classes(
    g: &WeightedGraph,
    kinds: &[usize],
    partner: &[usize],
    factor: impl Fn(usize, usize) -> f64,
) -> Setting {
    let lv = levels(g, 0);
    let mut lengths = vec![0.0; g.edge_count()];
    let mut queue = VecDeque::new();
    queue.push_back((0usize, 1.0f64, kinds.to_vec()));
    while let Some((v, scale, slots)) = queue.pop_front() {
        let children = g.neighbors(v).iter().filter(|(w, _)| lv[*w] == lv[v] + 1);
        for (&(w, e), &k) in children.zip(&slots) {
            let len = scale * factor(v, k);
            lengths[e] = len;
            let back = partner[k];
            let child_scale = len / factor(w, back);
            let mut rest = kinds.to_vec();
            let pos = rest.iter().position(|&x| x == back).expect("partner class present");
            rest.remove(pos);
            queue.push_back((w, child_scale, rest));
        }
    }
    Setting { lengths }
}

/// Half-half setting on the depth-`depth` truncation of `T_q`.
///
/// Vertex `v` sees `(q+1)/2` edges of length `s_v` and `(q+1)/2` of length
/// `ratios[v] · s_v`; every edge is short at one end and long at the other.
/// The ratios must all lie in `{r0, (r0+1)/(r0-1)}` for one `r0 > 1`.
pub fn half_half_setting(q: usize, depth: usize, ratios: &[f64]) -> Result<(WeightedGraph, Setting)> {
    if q.is_multiple_of(2) {
        return Err(Error::QNotOdd(q));
    }
    let g = gen_tree(q, depth)?;
    if ratios.len() != g.vertex_count() {
        return Err(Error::InvalidRatioChain(format!(
            "{} ratios for {} vertices",
            ratios.len(),
            g.vertex_count()
        )));
    }
    let allowed = t1_next_ratios(ratios[0]).map_err(|_| {
        Error::InvalidRatioChain(format!("ratio {} must exceed 1", ratios[0]))
    })?;
    for &r in ratios {
        if !allowed.iter().any(|&a| (a - r).abs() <= 1e-12 * a) {
            return Err(Error::InvalidRatioChain(format!(
                "ratio {r} is neither {} nor {}",
                allowed[0], allowed[1]
            )));
        }
    }
    let half = q.div_ceil(2);
    let kinds: Vec<usize> = (0..q + 1).map(|k| usize::from(k >= half)).collect();
    let setting = assign_by_classes(&g, &kinds, &[1, 0], |v, k| if k == 0 { 1.0 } else { ratios[v] });
    Ok((g, setting))
}

/// Half-half setting with one ratio `r` everywhere.
pub fn geometric_half_half(q: usize, depth: usize, r: f64) -> Result<(WeightedGraph, Setting)> {
    let n = gen_tree(q, depth)?.vertex_count();
    half_half_setting(q, depth, &vec![r; n])
}

/// Two-progression setting: each vertex sees `λ·{1 (m), x (m), α (s), αy (s)}`.
///
/// Crossing a `1` edge divides the scale by `x`, crossing an `x` edge
/// multiplies by `x`, and likewise `α`/`αy` edges divide/multiply by `y`.
#[allow(clippy::too_many_arguments)]
pub fn two_progression_setting(
    q: usize,
    m: usize,
    s: usize,
    alpha: f64,
    x: f64,
    y: f64,
    depth: usize,
) -> Result<(WeightedGraph, Setting)> {
    if 2 * (m + s) != q + 1 || m == 0 || s == 0 {
        return Err(Error::InconsistentParams(format!(
            "need m, s >= 1 and 2(m+s) = q+1, got q={q}, m={m}, s={s}"
        )));
    }
    if !(alpha > 0.0 && x > 0.0 && y > 0.0) {
        return Err(Error::InconsistentParams("alpha, x, y must be positive".into()));
    }
    let roots = two_progression_x(alpha, y).map_err(|e| Error::InconsistentParams(e.to_string()))?;
    if !roots.iter().any(|&r| (r - x).abs() <= 1e-9 * x.max(1.0)) {
        return Err(Error::InconsistentParams(format!(
            "x = {x} is not a root for alpha = {alpha}, y = {y}"
        )));
    }
    let g = gen_tree(q, depth)?;
    let mut kinds = Vec::with_capacity(q + 1);
    kinds.extend(std::iter::repeat_n(0, m));
    kinds.extend(std::iter::repeat_n(1, m));
    kinds.extend(std::iter::repeat_n(2, s));
    kinds.extend(std::iter::repeat_n(3, s));
    let factors = [1.0, x, alpha, alpha * y];
    let setting = assign_by_classes(&g, &kinds, &[1, 0, 3, 2], |_, k| factors[k]);
    Ok((g, setting))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::local_sums;
    use crate::tree::{teom_residual, verify_solution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tree_sizes() {
        let p = gen_tree(1, 5).unwrap();
        assert_eq!(p.edge_count(), 10);
        assert!(p.is_tree());
        assert_eq!(gen_tree(2, 2).unwrap().vertex_count(), 1 + 3 + 6);
        assert_eq!(gen_tree(2, 3).unwrap().vertex_count(), 1 + 3 + 6 + 12);
        let star = gen_tree(3, 1).unwrap();
        assert_eq!(star.edge_count(), 4);
        assert_eq!(star.degree(0), 4);
        assert!(gen_tree(0, 2).is_err());
        assert!(gen_tree(2, 0).is_err());
    }

    #[test]
    fn tree_internal_degrees() {
        let g = gen_tree(3, 4).unwrap();
        let lv = levels(&g, 0);
        for (v, &level) in lv.iter().enumerate() {
            let want = if level == 4 { 1 } else { 4 };
            assert_eq!(g.degree(v), want);
        }
    }

    #[test]
    fn complete_and_cycle() {
        assert_eq!(gen_complete(4).unwrap().edge_count(), 6);
        assert!(gen_cycle(3).unwrap().is_complete());
        let c4 = gen_cycle(4).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4.geodesics().dist(0, 2), 2.0);
        assert!(gen_cycle(2).is_err());
    }

    #[test]
    fn ratio_chain_lengths() {
        let g = ratio_chain_path(&[2.0, 3.0]).unwrap();
        assert_eq!(g.lengths(), &[1.0, 2.0, 6.0]);
    }

    #[test]
    fn random_graphs_are_connected_and_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random_connected(&mut rng, 7, 0.3, (0.5, 2.0));
            assert!(g.lengths().iter().all(|&l| (0.5..=2.0).contains(&l)));
        }
    }

    #[test]
    fn hex_single_hexagon() {
        let (g, region) = gen_hex_region(&HexRegionSpec::new(1)).unwrap();
        assert_eq!(region.interior.len(), 6);
        assert_eq!(region.boundary_vertices.len(), 6);
        for v in &region.sigma {
            assert_eq!(g.degree(*v), 3);
        }
    }

    #[test]
    fn hex_radius_two_structure() {
        let (g, region) = gen_hex_region(&HexRegionSpec::new(2)).unwrap();
        assert_eq!(region.interior.len(), 24);
        assert_eq!(region.boundary_vertices.len(), 12);
        for &b in &region.boundary_vertices {
            assert_eq!(g.degree(b), 3);
            assert!(region.inward_edge(&g, b).is_ok());
            for &(w, _) in g.neighbors(b) {
                assert!(!region.boundary_vertices.contains(&w));
            }
        }
        for &v in &region.interior {
            assert_eq!(g.degree(v), 3);
        }
        assert_eq!(strong_boundary_free_edges(&g, &region).len(), 12);
        let check = extract_region(&g, &region.sigma.iter().copied().collect::<Vec<_>>()).unwrap();
        assert_eq!(check, region);
    }

    #[test]
    fn hex_rejects_bad_parameters() {
        assert!(gen_hex_region(&HexRegionSpec::new(0)).is_err());
        assert!(gen_hex_region(&HexRegionSpec {
            radius: 2,
            strong_margin: 1
        })
        .is_err());
    }

    #[test]
    fn matchings() {
        let k4 = gen_complete(4).unwrap();
        let m = find_perfect_matching(&k4).unwrap().unwrap();
        assert_eq!(m.edges.len(), 2);
        assert!(find_perfect_matching(&gen_complete(5).unwrap()).unwrap().is_none());
        let path = gen_tree(1, 1).unwrap();
        assert!(find_perfect_matching(&path).unwrap().is_none());
        let p4 = ratio_chain_path(&[1.0, 1.0]).unwrap();
        let m = find_perfect_matching(&p4).unwrap().unwrap();
        assert_eq!(m.edges, vec![0, 2]);
        let big = gen_tree(2, 4).unwrap();
        assert!(matches!(find_perfect_matching(&big), Err(Error::TooLarge(46))));
    }

    #[test]
    fn matching_setting_ratios_approach_one() {
        let k4 = gen_complete(4).unwrap();
        let m = find_perfect_matching(&k4).unwrap().unwrap();
        let s = matching_setting(&k4, &m, 1e-4, None).unwrap();
        let g = k4.apply(&s).unwrap();
        let geo = g.geodesics();
        for v in 0..4 {
            let (c, d) = local_sums(&g, &geo, v);
            assert!((c * c / d - 1.0).abs() < 1e-3);
        }
        let half = Matching::new(&k4, vec![m.edges[0]]).unwrap();
        assert_eq!(matching_setting(&k4, &half, 1e-4, None), Err(Error::NotPerfect));
    }

    #[test]
    fn half_half_each_vertex_sees_two_lengths() {
        let (g, s) = geometric_half_half(3, 4, 2.0).unwrap();
        let lv = levels(&g, 0);
        for (v, &level) in lv.iter().enumerate() {
            if level == 4 {
                continue;
            }
            let mut lens: Vec<f64> = g.neighbors(v).iter().map(|&(_, e)| s.lengths[e]).collect();
            lens.sort_by(f64::total_cmp);
            assert!((lens[0] - lens[1]).abs() < 1e-12 * lens[0]);
            assert!((lens[2] - lens[3]).abs() < 1e-12 * lens[2]);
            assert!((lens[2] / lens[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn half_half_mixed_ratios_solve() {
        let n = gen_tree(3, 4).unwrap().vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ratios: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.5) { 2.0 } else { 3.0 }).collect();
        let (g, s) = half_half_setting(3, 4, &ratios).unwrap();
        assert!(verify_solution(&g, &s, 1e-9).unwrap().is_solution);
        let (g, s) = half_half_setting(5, 3, &vec![1.0 + 2f64.sqrt(); gen_tree(5, 3).unwrap().vertex_count()]).unwrap();
        assert!(verify_solution(&g, &s, 1e-9).unwrap().is_solution);
    }

    #[test]
    fn half_half_rejections() {
        assert_eq!(geometric_half_half(2, 3, 2.0).unwrap_err(), Error::QNotOdd(2));
        assert!(matches!(geometric_half_half(3, 3, 1.0), Err(Error::InvalidRatioChain(_))));
        let n = gen_tree(3, 2).unwrap().vertex_count();
        let mut ratios = vec![2.0; n];
        ratios[3] = 2.5;
        assert!(matches!(half_half_setting(3, 2, &ratios), Err(Error::InvalidRatioChain(_))));
    }

    #[test]
    fn two_progression_solves_and_progresses() {
        let x = (46f64.sqrt() - 5.0) / 7.0;
        let (g, s) = two_progression_setting(3, 1, 1, 0.25, x, 3.0, 4).unwrap();
        let report = verify_solution(&g, &s, 1e-9).unwrap();
        assert!(report.is_solution, "{}", report.max_abs_residual);
        // From the root, following the "1" class and then its partner's "1"
        // slot again multiplies lengths by 1/x along the path.
        let lv = levels(&g, 0);
        let first = g.neighbors(0)[0];
        assert_eq!(s.lengths[first.1], 1.0);
        let child = first.0;
        let grand = g
            .neighbors(child)
            .iter()
            .find(|(w, _)| lv[*w] == 2)
            .unwrap();
        assert!((s.lengths[grand.1] - 1.0 / x).abs() < 1e-12);
    }

    #[test]
    fn two_progression_degenerates_to_half_half() {
        let (g, s) = two_progression_setting(3, 1, 1, 1.0, 2.0, 2.0, 3).unwrap();
        let (_, hh) = geometric_half_half(3, 3, 2.0).unwrap();
        let r1: Vec<f64> = crate::generators::interior_edges(&g)
            .iter()
            .map(|&e| teom_residual(&g, &s, e).unwrap())
            .collect();
        assert!(r1.iter().all(|r| r.abs() < 1e-12));
        let mut a = s.lengths.clone();
        let mut b = hh.lengths.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn two_progression_rejections() {
        assert!(two_progression_setting(3, 2, 1, 0.25, 0.25, 3.0, 3).is_err());
        assert!(two_progression_setting(3, 1, 1, 0.25, 0.3, 3.0, 3).is_err());
    }
}
