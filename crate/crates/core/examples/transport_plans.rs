// Optimal transport between the neighbor measures of an edge, with the
// dual potential that certifies optimality.

use ricci_graph::transport::{neighbor_distribution, wasserstein, wasserstein_oracle};
use ricci_graph::{Result, WeightedGraph};

pub fn run() -> Result<()> {
    let g = WeightedGraph::new(
        &["a", "b", "c", "d"],
        &[("a", "b", 1.0), ("b", "c", 2.0), ("c", "d", 1.0), ("a", "d", 3.0), ("a", "c", 2.5)],
    )?;
    let geo = g.geodesics();
    let (i, j) = (g.vertex("a")?, g.vertex("b")?);
    for t in [0.1, 0.25, 0.5] {
        let mu = neighbor_distribution(&g, &geo, i, t)?;
        let nu = neighbor_distribution(&g, &geo, j, t)?;
        let plan = wasserstein(&geo, &mu, &nu)?;
        let check = wasserstein_oracle(&geo, &mu, &nu)?;
        println!("t = {t}: W = {:.10} (flow oracle {:.10})", plan.cost, check);
        for &(s, d, x) in &plan.flows {
            println!("  {} -> {}: {x:.6}", g.name(s), g.name(d));
        }
        println!("  certificate error {:.1e}", plan.certificate_error(&geo, &mu, &nu));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
