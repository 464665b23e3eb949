// Actions of the triangle and the square at their extremal settings.

use ricci_graph::action::action_total;
use ricci_graph::generators::{gen_complete, gen_cycle};
use ricci_graph::Result;

pub fn run() -> Result<()> {
    let k3 = gen_complete(3)?;
    println!("K3 equal lengths:  S = {:.10}", action_total(&k3)?);
    println!("K3 lengths 1:1:2:  S = {:.10}", action_total(&k3.with_lengths(&[1.0, 2.0, 1.0])?)?);

    // Edges of gen_cycle(4) run around the square: 01, 12, 23, 30.
    let c4 = gen_cycle(4)?;
    let s = 1.0 + 2f64.sqrt();
    println!("C4 equal lengths:  S = {:.10}", action_total(&c4)?);
    println!(
        "C4 (s, s, 1, 1):   S = {:.10}  (6 - 2 sqrt 2 = {:.10})",
        action_total(&c4.with_lengths(&[s, s, 1.0, 1.0])?)?,
        6.0 - 2.0 * 2f64.sqrt()
    );
    for b in [1e1, 1e2, 1e3] {
        let g = c4.with_lengths(&[b + 1.0, b, 1e-6, 1.0])?;
        println!("C4 degenerate b = {b:>6}: S = {:.6}", action_total(&g)?);
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
