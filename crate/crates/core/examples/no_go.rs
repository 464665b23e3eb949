// Boundary data that admits no interior solution, next to data that does.

use ricci_graph::generators::{ball_region, gen_tree, levels};
use ricci_graph::search::{newton_restarts, NewtonOptions, INIT_SPREAD};
use ricci_graph::tree::nogo_indicator;
use ricci_graph::{PartialSetting, Result, Setting};

pub fn run() -> Result<()> {
    let g = gen_tree(2, 3)?;
    let lv = levels(&g, 0);
    let region = ball_region(&g, 0, 2)?;
    for inward in [1.0, 1.5] {
        let boundary: PartialSetting = g
            .edges()
            .iter()
            .enumerate()
            .filter_map(|(e, &(u, v))| match lv[u].max(lv[v]) {
                3 => Some((e, 1.0)),
                2 => Some((e, inward)),
                _ => None,
            })
            .collect();
        let lengths: Vec<f64> = (0..g.edge_count()).map(|e| boundary.get(&e).copied().unwrap_or(1.0)).collect();
        let indicator = nogo_indicator(&g, &region, &Setting::new(&g, lengths)?)?;
        let runs = newton_restarts(&g, &boundary, 20, 42, INIT_SPREAD, &NewtonOptions::default());
        let solved = runs.iter().filter(|r| r.is_ok()).count();
        println!("inward length {inward}: indicator {indicator:+.6}, {solved}/20 Newton runs solved");
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
