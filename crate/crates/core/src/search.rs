//! Newton solving of the tree equations and Nelder-Mead action extremization.
//!
//! Both work on log-lengths. Newton takes least-squares steps, so it also
//! handles boundary data that leaves more equations than unknowns.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::action_total;
use crate::error::{Error, Result};
use crate::generators::interior_edges;
use crate::graph::{PartialSetting, Setting, WeightedGraph};
use crate::tree::{teom_value, vertex_ratios};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    #[serde(skip)]
    pub setting: Setting,
    /// Max absolute residual (Newton) or action value (extremization).
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
    /// Some log-length ended within `1e-6` of the box.
    pub at_box_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    pub max_halvings: usize,
    /// Largest allowed change of any log-length in one step.
    pub step_cap: f64,
    pub length_box: (f64, f64),
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 200,
            fd_step: 1e-6,
            max_halvings: 30,
            step_cap: 0.5,
            length_box: (1e-6, 1e3),
        }
    }
}

struct EomSystem<'a> {
    g: &'a WeightedGraph,
    base: Vec<f64>,
    free: Vec<usize>,
    equations: Vec<usize>,
}

impl EomSystem<'_> {
    fn lengths(&self, x: &[f64]) -> Vec<f64> {
        let mut lengths = self.base.clone();
        for (&e, &xe) in self.free.iter().zip(x) {
            lengths[e] = xe.exp();
        }
        lengths
    }

    /// Scale-free residual `ln((a_i² + a_j²)/P) - ln(a_i + a_j)`; it vanishes
    /// exactly where the raw residual does but does not shrink with the lengths.
    fn scaled(&self, x: &[f64]) -> DVector<f64> {
        let lengths = self.lengths(x);
        let a = vertex_ratios(self.g, &lengths);
        DVector::from_iterator(
            self.equations.len(),
            self.equations.iter().map(|&e| {
                let (u, v) = self.g.edges()[e];
                ((a[u] * a[u] + a[v] * a[v]) / lengths[e]).ln() - (a[u] + a[v]).ln()
            }),
        )
    }

    fn raw_max(&self, x: &[f64]) -> f64 {
        let lengths = self.lengths(x);
        let a = vertex_ratios(self.g, &lengths);
        self.equations.iter().fold(0.0f64, |m, &e| {
            let (u, v) = self.g.edges()[e];
            m.max(teom_value(a[u], a[v], lengths[e]).abs())
        })
    }

    fn jacobian(&self, x: &[f64], h: f64) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.equations.len(), x.len());
        let mut probe = x.to_vec();
        for k in 0..x.len() {
            probe[k] = x[k] + h;
            let plus = self.scaled(&probe);
            probe[k] = x[k] - h;
            let minus = self.scaled(&probe);
            probe[k] = x[k];
            jac.set_column(k, &((plus - minus) / (2.0 * h)));
        }
        jac
    }
}

/// Damped Gauss-Newton on the free log-lengths of a tree.
///
/// Edges listed in `boundary` keep their values; every other edge is
/// unknown, starting from `init`. The equations are the residuals on all
/// edges that do not touch a leaf. Converged means the largest raw residual
/// is below `opts.tol`; leaving `opts.length_box` counts as failure.
pub fn newton_solve_teom(
    g: &WeightedGraph,
    boundary: &PartialSetting,
    init: &Setting,
    opts: &NewtonOptions,
) -> Result<SearchResult> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    if init.lengths.len() != g.edge_count() {
        return Err(Error::SettingMismatch("init does not cover the graph".into()));
    }
    let mut base = init.lengths.clone();
    for (&e, &len) in boundary {
        if e >= g.edge_count() {
            return Err(Error::SettingMismatch(format!("boundary edge #{e} out of range")));
        }
        base[e] = len;
    }
    Setting::new(g, base.clone())?;
    let free: Vec<usize> = (0..g.edge_count()).filter(|e| !boundary.contains_key(e)).collect();
    if free.is_empty() {
        return Err(Error::NoFreeEdges);
    }
    let sys = EomSystem {
        g,
        free,
        equations: interior_edges(g),
        base,
    };
    let (lo, hi) = (opts.length_box.0.ln(), opts.length_box.1.ln());
    let mut x: Vec<f64> = sys.free.iter().map(|&e| sys.base[e].ln()).collect();
    let mut f = sys.scaled(&x);
    for it in 0..=opts.max_iter {
        let raw = sys.raw_max(&x);
        if raw < opts.tol {
            let at_box_boundary = x.iter().any(|&v| v - lo < 1e-6 || hi - v < 1e-6);
            return Ok(SearchResult {
                setting: Setting { lengths: sys.lengths(&x) },
                objective: raw,
                iterations: it,
                converged: true,
                restarts_used: 1,
                at_box_boundary,
            });
        }
        if it == opts.max_iter {
            break;
        }
        let jac = sys.jacobian(&x, opts.fd_step);
        if jac.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularJacobian);
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        if smax.is_nan() || smax <= 0.0 {
            return Err(Error::SingularJacobian);
        }
        let mut dx = svd
            .solve(&(-&f), 1e-12 * smax)
            .map_err(|_| Error::SingularJacobian)?;
        let biggest = dx.amax();
        if biggest > opts.step_cap {
            dx *= opts.step_cap / biggest;
        }
        let norm = f.norm();
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + lambda * b).collect();
            let ft = sys.scaled(&trial);
            if ft.iter().all(|v| v.is_finite()) && ft.norm() < norm {
                accepted = Some((trial, ft));
                break;
            }
            lambda /= 2.0;
        }
        let Some((nx, nf)) = accepted else {
            return Err(Error::NoConvergence(format!(
                "line search stalled at iteration {it}, residual {raw:.3e}"
            )));
        };
        x = nx;
        f = nf;
        if x.iter().any(|&v| v < lo || v > hi) {
            return Err(Error::NoConvergence(format!(
                "lengths left [{:e}, {:e}] at iteration {it}",
                opts.length_box.0, opts.length_box.1
            )));
        }
    }
    Err(Error::NoConvergence(format!(
        "{} iterations, residual {:.3e}",
        opts.max_iter,
        sys.raw_max(&x)
    )))
}

/// Free lengths log-uniform in `[e^-spread, e^spread]` times the geometric
/// mean of the boundary values; boundary edges keep their values.
pub fn random_init<R: Rng>(g: &WeightedGraph, boundary: &PartialSetting, rng: &mut R, spread: f64) -> Setting {
    let scale = if boundary.is_empty() {
        1.0
    } else {
        (boundary.values().map(|v| v.ln()).sum::<f64>() / boundary.len() as f64).exp()
    };
    let lengths = (0..g.edge_count())
        .map(|e| match boundary.get(&e) {
            Some(&v) => v,
            None => scale * rng.gen_range(-spread..=spread).exp(),
        })
        .collect();
    Setting { lengths }
}

/// Default half-width of the log-uniform Newton start.
pub const INIT_SPREAD: f64 = 0.405_465_108_108_164_4; // ln 1.5

/// Independent Newton runs from seeded random starts, in restart order.
pub fn newton_restarts(
    g: &WeightedGraph,
    boundary: &PartialSetting,
    restarts: usize,
    seed: u64,
    spread: f64,
    opts: &NewtonOptions,
) -> Vec<Result<SearchResult>> {
    (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let init = random_init(g, boundary, &mut rng, spread);
            newton_solve_teom(g, boundary, &init, opts)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    pub diameter_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_evals: 10_000,
            diameter_tol: 1e-8,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with the standard reflect/expand/contract/shrink moves.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult {
    let n = x0.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += opts.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let diameter = |s: &[(Vec<f64>, f64)]| {
        s.iter()
            .skip(1)
            .map(|(x, _)| x.iter().zip(&s[0].0).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            .fold(0.0f64, f64::max)
    };
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&simplex) < opts.diameter_tol {
            converged = true;
            break;
        }
        if evals.get() >= opts.max_evals {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best.iter().zip(&item.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    let v = eval(&x);
                    *item = (x, v);
                }
            }
        }
    }
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        value,
        evals: evals.get(),
        converged,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremizeOptions {
    pub restarts: usize,
    pub seed: u64,
    pub length_box: (f64, f64),
    /// Half-width of the log-uniform starting lengths.
    pub init_spread: f64,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for ExtremizeOptions {
    fn default() -> Self {
        ExtremizeOptions {
            restarts: 20,
            seed: 42,
            length_box: (1e-6, 1e3),
            init_spread: 1.0,
            nelder_mead: NelderMeadOptions::default(),
        }
    }
}

/// Extremizes the action over the free lengths with Nelder-Mead restarts.
///
/// Log-lengths are clamped to the box. With nothing fixed the result is
/// rescaled to geometric-mean length 1, which leaves the action unchanged.
pub fn extremize_action(
    g: &WeightedGraph,
    fixed: &PartialSetting,
    objective: Objective,
    opts: &ExtremizeOptions,
) -> Result<SearchResult> {
    let free: Vec<usize> = (0..g.edge_count()).filter(|e| !fixed.contains_key(e)).collect();
    if free.is_empty() {
        return Err(Error::NoFreeEdges);
    }
    let (lo, hi) = (opts.length_box.0.ln(), opts.length_box.1.ln());
    let sign = match objective {
        Objective::Min => 1.0,
        Objective::Max => -1.0,
    };
    let lengths_of = |x: &[f64]| -> Vec<f64> {
        let mut lengths = g.lengths().to_vec();
        for (&e, &v) in fixed {
            lengths[e] = v;
        }
        for (&e, &xe) in free.iter().zip(x) {
            lengths[e] = xe.clamp(lo, hi).exp();
        }
        lengths
    };
    let value = |x: &[f64]| -> f64 {
        g.with_lengths(&lengths_of(x))
            .and_then(|h| action_total(&h))
            .map(|s| sign * s)
            .unwrap_or(f64::INFINITY)
    };
    let runs: Vec<NelderMeadResult> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
            let x0: Vec<f64> = free
                .iter()
                .map(|_| rng.gen_range(-opts.init_spread..=opts.init_spread))
                .collect();
            nelder_mead(value, &x0, &opts.nelder_mead)
        })
        .collect();
    let best = runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one restart");
    let clamped: Vec<f64> = best.x.iter().map(|v| v.clamp(lo, hi)).collect();
    let at_box_boundary = clamped.iter().any(|&v| v - lo < 1e-6 || hi - v < 1e-6);
    let mut lengths = lengths_of(&clamped);
    if fixed.is_empty() {
        let mean = (lengths.iter().map(|l| l.ln()).sum::<f64>() / lengths.len() as f64).exp();
        lengths.iter_mut().for_each(|l| *l /= mean);
    }
    Ok(SearchResult {
        setting: Setting { lengths },
        objective: sign * best.value,
        iterations: best.evals,
        converged: best.converged,
        restarts_used: opts.restarts,
        at_box_boundary,
    })
}
