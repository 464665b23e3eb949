// `K(t)` sampled while halving t, and the limit curvature it settles on.

use ricci_graph::curvature::{kappa_report, kappa_tree_closed};
use ricci_graph::generators::gen_tree;
use ricci_graph::Result;

pub fn run() -> Result<()> {
    let g = gen_tree(2, 2)?.with_lengths(&[1.0, 2.0, 0.5, 1.0, 1.0, 3.0, 1.0, 0.7, 1.2])?;
    let geo = g.geodesics();
    for &(u, v) in g.edges() {
        let r = kappa_report(&g, &geo, u, v)?;
        let closed = kappa_tree_closed(&g, &geo, u, v)?;
        println!(
            "{}-{}: kappa {:+.10}, closed form {:+.10}, linear below t = {}",
            g.name(u),
            g.name(v),
            r.kappa,
            closed,
            r.breakpoint_t
        );
    }
    let (u, v) = g.edges()[0];
    println!("trace for {}-{}:", g.name(u), g.name(v));
    for (t, k) in kappa_report(&g, &geo, u, v)?.kappa_t {
        println!("  t = {t:<10} K = {k:+.12}  K/t = {:+.10}", k / t);
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
