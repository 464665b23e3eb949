//! Lin-Lu-Yau Ricci curvature on weighted graphs, the curvature action built
//! from it, and tools for its tree equations of motion.
//!
//! Edge lengths are positive reals. Distances are geodesic, transport is
//! exact, and the curvature of an edge is the small-`t` slope of
//! `1 - W(D_{t,i}, D_{t,j}) / P_ij`.

pub mod action;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod reproduce;
pub mod search;
pub mod transport;
pub mod tree;

pub use action::{action_ghy, action_plain, action_total, ActionReport, ActionVariant};
pub use curvature::{kappa, kappa_report, kappa_t, kappa_tree_closed, CurvatureReport};
pub use error::{Error, Result};
pub use graph::{extract_region, GeodesicTable, PartialSetting, Region, Setting, WeightedGraph};
pub use search::{extremize_action, newton_solve_teom, Objective, SearchResult};
pub use transport::{wasserstein, Distribution, TransportPlan};
pub use tree::{teom_residual, verify_solution, EomReport};
