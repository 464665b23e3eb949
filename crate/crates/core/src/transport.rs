//! Neighbor distributions and exact transportation costs between them.
//!
//! [`wasserstein`] runs a transportation simplex (northwest-corner start,
//! MODI potentials, Bland's rule) and returns a dual potential that certifies
//! optimality. [`wasserstein_oracle`] computes the same cost with
//! successive shortest paths on the bipartite support graph.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{local_sums, GeodesicTable, WeightedGraph};

const MASS_TOL: f64 = 1e-12;

/// Sparse probability mass over vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    mass: BTreeMap<usize, f64>,
}

impl Distribution {
    /// Builds a distribution, dropping zero entries and checking normalization.
    pub fn new(mass: BTreeMap<usize, f64>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (v, m) in mass {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(Error::NotNormalized(m));
            }
            if m > 0.0 {
                clean.insert(v, m);
            }
        }
        let total: f64 = clean.values().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::NotNormalized(total));
        }
        Ok(Distribution { mass: clean })
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.mass.get(&v).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mass.iter().map(|(&v, &m)| (v, m))
    }

    pub fn total(&self) -> f64 {
        self.mass.values().sum()
    }
}

/// Unit mass at `i`.
pub fn delta(i: usize) -> Distribution {
    Distribution {
        mass: BTreeMap::from([(i, 1.0)]),
    }
}

/// `1 - t` at `i` and `t P⁻²/d_i` on each neighbor.
pub fn neighbor_distribution(
    g: &WeightedGraph,
    geo: &GeodesicTable,
    i: usize,
    t: f64,
) -> Result<Distribution> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::TOutOfRange(t));
    }
    let (_, d) = local_sums(g, geo, i);
    let mut mass = BTreeMap::from([(i, 1.0 - t)]);
    for &(w, _) in g.neighbors(i) {
        let p = geo.dist(i, w);
        mass.insert(w, t / (p * p * d));
    }
    Ok(Distribution { mass })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// `(source, target, amount)` with positive amounts.
    pub flows: Vec<(usize, usize, f64)>,
    pub cost: f64,
    /// A 1-Lipschitz potential on all vertices with `Σ f (mu - nu) = cost`.
    pub potential: Vec<f64>,
}

impl TransportPlan {
    /// Largest violation among marginals, Lipschitz bound and duality gap.
    pub fn certificate_error(
        &self,
        geo: &GeodesicTable,
        mu: &Distribution,
        nu: &Distribution,
    ) -> f64 {
        let n = geo.len();
        let mut out = vec![0.0; n];
        let mut inc = vec![0.0; n];
        let mut cost = 0.0;
        for &(s, t, x) in &self.flows {
            out[s] += x;
            inc[t] += x;
            cost += x * geo.dist(s, t);
        }
        let mut err: f64 = (cost - self.cost).abs();
        for v in 0..n {
            err = err.max((out[v] - mu.mass(v)).abs());
            err = err.max((inc[v] - nu.mass(v)).abs());
        }
        let f = &self.potential;
        for a in 0..n {
            for b in 0..n {
                err = err.max(f[a] - f[b] - geo.dist(a, b));
            }
        }
        let dual: f64 = (0..n).map(|v| f[v] * (mu.mass(v) - nu.mass(v))).sum();
        err.max((dual - self.cost).abs())
    }
}

fn check_balance(mu: &Distribution, nu: &Distribution) -> Result<()> {
    let (a, b) = (mu.total(), nu.total());
    if (a - b).abs() > 1e-10 {
        return Err(Error::UnbalancedMass(a, b));
    }
    Ok(())
}

/// Optimal transport plan with geodesic costs.
pub fn wasserstein(
    geo: &GeodesicTable,
    mu: &Distribution,
    nu: &Distribution,
) -> Result<TransportPlan> {
    check_balance(mu, nu)?;
    let src: Vec<(usize, f64)> = mu.support().collect();
    let dst: Vec<(usize, f64)> = nu.support().collect();
    let cost: Vec<Vec<f64>> = src
        .iter()
        .map(|&(s, _)| dst.iter().map(|&(t, _)| geo.dist(s, t)).collect())
        .collect();
    let supply: Vec<f64> = src.iter().map(|p| p.1).collect();
    let demand: Vec<f64> = dst.iter().map(|p| p.1).collect();
    let sol = transportation_simplex(&cost, &supply, &demand)?;

    let mut flows = Vec::new();
    let mut total = 0.0;
    for (&(r, c), &x) in sol.basis.iter().zip(&sol.flow) {
        if x > 0.0 {
            flows.push((src[r].0, dst[c].0, x));
            total += x * cost[r][c];
        }
    }
    // f(x) = min_j (d(x, t_j) - v_j) is 1-Lipschitz, f(s_i) >= u_i and
    // f(t_j) <= -v_j, so it attains the dual value.
    let potential = (0..geo.len())
        .map(|x| {
            dst.iter()
                .zip(&sol.v)
                .map(|(&(t, _), &vj)| geo.dist(x, t) - vj)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(TransportPlan {
        flows,
        cost: total,
        potential,
    })
}

struct SimplexSolution {
    basis: Vec<(usize, usize)>,
    flow: Vec<f64>,
    v: Vec<f64>,
}

fn transportation_simplex(
    cost: &[Vec<f64>],
    supply: &[f64],
    demand: &[f64],
) -> Result<SimplexSolution> {
    let m = supply.len();
    let n = demand.len();

    // Northwest corner: exactly m + n - 1 basic cells, some possibly zero.
    let mut basis = Vec::with_capacity(m + n - 1);
    let mut flow = Vec::with_capacity(m + n - 1);
    let (mut a, mut b) = (supply.to_vec(), demand.to_vec());
    let (mut i, mut j) = (0, 0);
    loop {
        let x = a[i].min(b[j]).max(0.0);
        basis.push((i, j));
        flow.push(x);
        a[i] -= x;
        b[j] -= x;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if i == m - 1 {
            j += 1;
        } else if j == n - 1 || a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }

    let max_iter = 50 * (m * n + 10);
    for _ in 0..max_iter {
        let (u, v) = potentials(cost, &basis, m, n);
        let tol = 1e-12 * (1.0 + cost.iter().flatten().fold(0.0f64, |s, &c| s.max(c)));
        // Bland: lowest-index cell with negative reduced cost enters.
        let entering = (0..m)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| cost[r][c] - u[r] - v[c] < -tol && !basis.contains(&(r, c)));
        let Some((er, ec)) = entering else {
            return Ok(SimplexSolution { basis, flow, v });
        };
        let path = basis_path(&basis, m, n, er, ec);
        // Odd positions along the path lose flow.
        let mut theta = f64::INFINITY;
        for (k, &cell) in path.iter().enumerate() {
            if k % 2 == 0 {
                theta = theta.min(flow[cell]);
            }
        }
        let leaving = path
            .iter()
            .enumerate()
            .filter(|(k, &cell)| k % 2 == 0 && flow[cell] <= theta)
            .map(|(_, &cell)| cell)
            .min_by_key(|&cell| basis[cell].0 * n + basis[cell].1)
            .expect("cycle has a decreasing cell");
        for (k, &cell) in path.iter().enumerate() {
            if k % 2 == 0 {
                flow[cell] = (flow[cell] - theta).max(0.0);
            } else {
                flow[cell] += theta;
            }
        }
        basis[leaving] = (er, ec);
        flow[leaving] = theta;
    }
    Err(Error::NoConvergence("transportation simplex iteration cap".into()))
}

/// Solves `u_r + v_c = cost` over the basis tree with `u_0 = 0`.
fn potentials(
    cost: &[Vec<f64>],
    basis: &[(usize, usize)],
    m: usize,
    n: usize,
) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![f64::NAN; m];
    let mut v = vec![f64::NAN; n];
    u[0] = 0.0;
    let mut changed = true;
    while changed {
        changed = false;
        for &(r, c) in basis {
            if !u[r].is_nan() && v[c].is_nan() {
                v[c] = cost[r][c] - u[r];
                changed = true;
            } else if u[r].is_nan() && !v[c].is_nan() {
                u[r] = cost[r][c] - v[c];
                changed = true;
            }
        }
    }
    (u, v)
}

/// Basis cells on the tree path from row `r` to column `c`, starting at `r`.
fn basis_path(basis: &[(usize, usize)], m: usize, n: usize, r: usize, c: usize) -> Vec<usize> {
    // Nodes 0..m are rows, m..m+n columns.
    let mut adj = vec![Vec::new(); m + n];
    for (k, &(br, bc)) in basis.iter().enumerate() {
        adj[br].push((m + bc, k));
        adj[m + bc].push((br, k));
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; m + n];
    let mut seen = vec![false; m + n];
    seen[r] = true;
    let mut queue = VecDeque::from([r]);
    while let Some(x) = queue.pop_front() {
        if x == m + c {
            break;
        }
        for &(y, k) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut x = m + c;
    while let Some((p, k)) = prev[x] {
        path.push(k);
        x = p;
    }
    path.reverse();
    path
}

/// Transportation cost via successive shortest paths on the bipartite support graph.
pub fn wasserstein_oracle(geo: &GeodesicTable, mu: &Distribution, nu: &Distribution) -> Result<f64> {
    check_balance(mu, nu)?;
    let src: Vec<(usize, f64)> = mu.support().collect();
    let dst: Vec<(usize, f64)> = nu.support().collect();
    let (m, n) = (src.len(), dst.len());
    // Node layout: 0 source, 1..=m supplies, m+1..=m+n demands, m+n+1 sink.
    let sink = m + n + 1;
    let mut net = FlowNetwork::new(sink + 1);
    for (k, &(_, a)) in src.iter().enumerate() {
        net.add_edge(0, 1 + k, a, 0.0);
    }
    for (k, &(_, b)) in dst.iter().enumerate() {
        net.add_edge(1 + m + k, sink, b, 0.0);
    }
    for (r, &(s, _)) in src.iter().enumerate() {
        for (c, &(t, _)) in dst.iter().enumerate() {
            net.add_edge(1 + r, 1 + m + c, f64::INFINITY, geo.dist(s, t));
        }
    }
    let total: f64 = src.iter().map(|p| p.1).sum();
    let (sent, cost) = net.min_cost_flow(0, sink, total);
    if (sent - total).abs() > 1e-10 {
        return Err(Error::NoConvergence("oracle could not route all mass".into()));
    }
    Ok(cost)
}

struct FlowEdge {
    to: usize,
    cap: f64,
    cost: f64,
}

struct FlowNetwork {
    edges: Vec<FlowEdge>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64, cost: f64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(FlowEdge { to, cap, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(FlowEdge {
            to: from,
            cap: 0.0,
            cost: -cost,
        });
    }

    /// Bellman-Ford augmentation; residual costs may be negative.
    fn min_cost_flow(&mut self, s: usize, t: usize, want: f64) -> (f64, f64) {
        let n = self.adj.len();
        let (mut sent, mut cost) = (0.0, 0.0);
        while want - sent > 1e-14 {
            let mut dist = vec![f64::INFINITY; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0.0;
            for _ in 0..n {
                let mut relaxed = false;
                for x in 0..n {
                    if dist[x] == f64::INFINITY {
                        continue;
                    }
                    for &e in &self.adj[x] {
                        let edge = &self.edges[e];
                        if edge.cap > 1e-15 && dist[x] + edge.cost < dist[edge.to] - 1e-15 {
                            dist[edge.to] = dist[x] + edge.cost;
                            via[edge.to] = e;
                            relaxed = true;
                        }
                    }
                }
                if !relaxed {
                    break;
                }
            }
            if dist[t] == f64::INFINITY {
                break;
            }
            let mut push = want - sent;
            let mut x = t;
            while x != s {
                let e = via[x];
                push = push.min(self.edges[e].cap);
                x = self.edges[e ^ 1].to;
            }
            let mut x = t;
            while x != s {
                let e = via[x];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                x = self.edges[e ^ 1].to;
            }
            sent += push;
            cost += push * dist[t];
        }
        (sent, cost)
    }
}
