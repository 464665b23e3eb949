// Complete graphs: the equal-length action, random settings below it, and
// a perfect matching shrunk towards zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ricci_graph::action::{action_total, partial_action_complete};
use ricci_graph::generators::{find_perfect_matching, gen_complete, matching_setting};
use ricci_graph::{Error, Result};

pub fn run() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 3..=6 {
        let g = gen_complete(n)?;
        let mut best = f64::NEG_INFINITY;
        for _ in 0..50 {
            let lengths: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen_range(-1.5f64..1.5).exp()).collect();
            best = best.max(action_total(&g.with_lengths(&lengths)?)?);
        }
        println!(
            "K{n}: S = {:.8}, n^2/2 = {}, best random {best:.6}, pairwise sum {:.8}",
            action_total(&g)?,
            (n * n) as f64 / 2.0,
            partial_action_complete(&g)?
        );
    }
    let k4 = gen_complete(4)?;
    let m = find_perfect_matching(&k4)?.ok_or(Error::NotPerfect)?;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let g = k4.apply(&matching_setting(&k4, &m, eps, None)?)?;
        println!("K4 matching eps = {eps:e}: S = {:.12}", action_total(&g)?);
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
