//! Weighted graphs, geodesic distances, local sums and regions.
//!
//! Vertices are addressed by dense indices `0..n` and carry an opaque string
//! name. Edges are stored once with `u < v`; everything that varies an edge
//! length (settings, solvers) works on a `Vec<f64>` aligned with
//! [`WeightedGraph::edges`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    lengths: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl WeightedGraph {
    /// Builds a graph from named vertices and `(u, v, length)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, f64)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (k, name) in names.iter().enumerate() {
            if index.insert(name.clone(), k).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut indexed = Vec::with_capacity(edges.len());
        for (u, v, len) in edges {
            let iu = *index
                .get(u.as_ref())
                .ok_or_else(|| Error::UnknownVertex(u.as_ref().to_string()))?;
            let iv = *index
                .get(v.as_ref())
                .ok_or_else(|| Error::UnknownVertex(v.as_ref().to_string()))?;
            indexed.push((iu, iv, *len));
        }
        Self::from_indexed(names, &indexed)
    }

    /// Builds a graph from vertex names and index-based edges.
    pub fn from_indexed(names: Vec<String>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (k, name) in names.iter().enumerate() {
            if index.insert(name.clone(), k).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut g = WeightedGraph {
            names,
            index,
            edges: Vec::with_capacity(edges.len()),
            lengths: Vec::with_capacity(edges.len()),
            adj: vec![Vec::new(); n],
            edge_index: HashMap::with_capacity(edges.len()),
        };
        for &(u, v, len) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(format!("#{u}")));
            }
            if v >= n {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            if u == v {
                return Err(Error::SelfLoop(g.names[u].clone()));
            }
            if !(len > 0.0 && len.is_finite()) {
                return Err(Error::NonpositiveLength(
                    g.names[u].clone(),
                    g.names[v].clone(),
                    len,
                ));
            }
            let key = (u.min(v), u.max(v));
            if g.edge_index.contains_key(&key) {
                return Err(Error::DuplicateEdge(g.names[key.0].clone(), g.names[key.1].clone()));
            }
            let e = g.edges.len();
            g.edge_index.insert(key, e);
            g.edges.push(key);
            g.lengths.push(len);
            g.adj[key.0].push((key.1, e));
            g.adj[key.1].push((key.0, e));
        }
        if n == 0 || !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Same topology with new edge lengths (aligned with [`Self::edges`]).
    pub fn with_lengths(&self, lengths: &[f64]) -> Result<Self> {
        if lengths.len() != self.edges.len() {
            return Err(Error::SettingMismatch(format!(
                "{} lengths for {} edges",
                lengths.len(),
                self.edges.len()
            )));
        }
        for (e, &len) in lengths.iter().enumerate() {
            if !(len > 0.0 && len.is_finite()) {
                let (u, v) = self.edges[e];
                return Err(Error::NonpositiveLength(
                    self.names[u].clone(),
                    self.names[v].clone(),
                    len,
                ));
            }
        }
        let mut g = self.clone();
        g.lengths = lengths.to_vec();
        Ok(g)
    }

    pub fn apply(&self, setting: &Setting) -> Result<Self> {
        self.with_lengths(&setting.lengths)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Like [`Self::edge_between`] but reports `NotAnEdge`.
    pub fn edge_id(&self, u: usize, v: usize) -> Result<usize> {
        self.edge_between(u, v)
            .ok_or_else(|| Error::NotAnEdge(self.names[u].clone(), self.names[v].clone()))
    }

    /// `(neighbor, edge id)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.names.len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.names.len();
        self.edges.len() == n * (n - 1) / 2
    }

    fn is_connected(&self) -> bool {
        let n = self.names.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Dijkstra from a single source.
    pub fn shortest_from(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.names.len()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem(0.0, source));
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(w, e) in &self.adj[u] {
                let nd = d + self.lengths[e];
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(HeapItem(nd, w));
                }
            }
        }
        dist
    }

    /// All-pairs geodesic table, one Dijkstra per source.
    ///
    /// The two directions can differ in the last bit; the smaller is kept
    /// so the table is exactly symmetric.
    pub fn geodesics(&self) -> GeodesicTable {
        let n = self.names.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|s| self.shortest_from(s))
            .collect();
        let mut dist: Vec<f64> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in i + 1..n {
                let m = dist[i * n + j].min(dist[j * n + i]);
                dist[i * n + j] = m;
                dist[j * n + i] = m;
            }
        }
        GeodesicTable { n, dist }
    }
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| self.1.cmp(&other.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dense table of shortest-path distances.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTable {
    n: usize,
    dist: Vec<f64>,
}

impl GeodesicTable {
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Shortest-path distance between two named vertices.
pub fn geodesic(g: &WeightedGraph, i: &str, j: &str) -> Result<f64> {
    let i = g.vertex(i)?;
    let j = g.vertex(j)?;
    Ok(g.shortest_from(i)[j])
}

/// `(c_i, d_i)`: sums of `1/P` and `1/P²` over the neighbors of `i`.
pub fn local_sums(g: &WeightedGraph, geo: &GeodesicTable, i: usize) -> (f64, f64) {
    g.neighbors(i).iter().fold((0.0, 0.0), |(c, d), &(w, _)| {
        let p = geo.dist(i, w);
        (c + 1.0 / p, d + 1.0 / (p * p))
    })
}

/// An assignment of a length to every edge, aligned with `WeightedGraph::edges`.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub lengths: Vec<f64>,
}

impl Setting {
    pub fn new(g: &WeightedGraph, lengths: Vec<f64>) -> Result<Self> {
        g.with_lengths(&lengths)?;
        Ok(Setting { lengths })
    }

    pub fn of(g: &WeightedGraph) -> Self {
        Setting {
            lengths: g.lengths().to_vec(),
        }
    }

    pub fn constant(g: &WeightedGraph, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::NonpositiveLength("*".into(), "*".into(), a));
        }
        Ok(Setting {
            lengths: vec![a; g.edge_count()],
        })
    }

    /// Largest minus smallest length.
    pub fn spread(&self) -> f64 {
        let lo = self.lengths.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.lengths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

/// Lengths for a subset of edges, keyed by edge id.
pub type PartialSetting = BTreeMap<usize, f64>;

/// A finite region `Σ` together with its boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub sigma: BTreeSet<usize>,
    pub interior: BTreeSet<usize>,
    pub boundary_vertices: BTreeSet<usize>,
    pub boundary_edges: BTreeSet<usize>,
}

impl Region {
    pub fn contains(&self, v: usize) -> bool {
        self.sigma.contains(&v)
    }

    /// `E(Σ)`: edges with both endpoints in `Σ`.
    pub fn sigma_edges(&self, g: &WeightedGraph) -> Vec<usize> {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| self.sigma.contains(u) && self.sigma.contains(v))
            .map(|(e, _)| e)
            .collect()
    }

    /// The unique edge from boundary vertex `i` into `Σ`, if there is exactly one.
    pub fn inward_edge(&self, g: &WeightedGraph, i: usize) -> Result<(usize, usize)> {
        let mut inward = g.neighbors(i).iter().filter(|(w, _)| self.sigma.contains(w));
        match (inward.next(), inward.next()) {
            (Some(&(w, e)), None) => Ok((w, e)),
            _ => Err(Error::NonUniqueInwardEdge(g.name(i).to_string())),
        }
    }
}

/// Splits `Σ` into interior and boundary per the neighbor-outside rule.
pub fn extract_region(g: &WeightedGraph, sigma_vertices: &[usize]) -> Result<Region> {
    let sigma: BTreeSet<usize> = sigma_vertices.iter().copied().collect();
    if sigma.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if let Some(&v) = sigma.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let start = *sigma.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if sigma.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    if seen.len() != sigma.len() {
        return Err(Error::DisconnectedRegion);
    }
    let boundary_vertices: BTreeSet<usize> = sigma
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|(w, _)| !sigma.contains(w)))
        .collect();
    let interior = sigma.difference(&boundary_vertices).copied().collect();
    let boundary_edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| {
            let (bu, bv) = (boundary_vertices.contains(&u), boundary_vertices.contains(&v));
            (bu && bv) || (bu && !sigma.contains(&v)) || (bv && !sigma.contains(&u))
        })
        .map(|(e, _)| e)
        .collect();
    Ok(Region {
        sigma,
        interior,
        boundary_vertices,
        boundary_edges,
    })
}

/// [`extract_region`] with vertices given by name.
pub fn extract_region_named<S: AsRef<str>>(g: &WeightedGraph, sigma: &[S]) -> Result<Region> {
    let ids = sigma
        .iter()
        .map(|s| g.vertex(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    extract_region(g, &ids)
}
