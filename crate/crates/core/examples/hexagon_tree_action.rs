// A hexagonal patch: its curvatures follow the tree formula and the tree
// action stays below the plain action when the interior is perturbed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ricci_graph::action::{action_plain, tree_action_hex};
use ricci_graph::generators::{gen_hex_region, strong_boundary_free_edges, HexRegionSpec};
use ricci_graph::Result;

pub fn run() -> Result<()> {
    let (g, region) = gen_hex_region(&HexRegionSpec::new(2))?;
    println!(
        "graph {} vertices / {} edges; region {} interior, {} boundary",
        g.vertex_count(),
        g.edge_count(),
        region.interior.len(),
        region.boundary_vertices.len()
    );
    let tree = tree_action_hex(&g, &region)?;
    println!("constant: S_T = {:.10}, vertex form {:.10}", tree.total, tree.vertex_form.unwrap_or(f64::NAN));
    let free = strong_boundary_free_edges(&g, &region);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..5 {
        let mut lengths = g.lengths().to_vec();
        for &e in &free {
            lengths[e] = rng.gen_range(-0.7f64..0.7).exp();
        }
        let h = g.with_lengths(&lengths)?;
        let s_t = tree_action_hex(&h, &region)?.total;
        let s = action_plain(&h, &h.geodesics(), &region.sigma_edges(&h))?.total;
        println!("random {k}: S_T = {s_t:+.8} <= S = {s:+.8}");
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
