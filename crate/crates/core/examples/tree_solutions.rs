// Exact solution families of the tree equations, checked by their residuals.

use ricci_graph::generators::{gen_tree, geometric_half_half, ratio_chain_path, two_progression_setting};
use ricci_graph::tree::{geometric_half_half_stats, t1_next_ratios, two_progression_x, verify_solution};
use ricci_graph::{Result, Setting};

pub fn run() -> Result<()> {
    for q in 1..=4 {
        let g = gen_tree(q, 4)?;
        let r = verify_solution(&g, &Setting::of(&g), 1e-12)?;
        println!("T{q} constant: max residual {:.1e}", r.max_abs_residual);
    }

    for (q, ratio) in [(3, 2.0), (5, 1.0 + 2f64.sqrt())] {
        let (g, s) = geometric_half_half(q, 4, ratio)?;
        let (kappa, c2d) = geometric_half_half_stats(q, ratio)?;
        let r = verify_solution(&g, &s, 1e-9)?;
        println!("T{q} half-half r = {ratio:.4}: residual {:.1e}, kappa {kappa:+.6}, c^2/d {c2d:.6}", r.max_abs_residual);
    }

    let roots = two_progression_x(0.25, 3.0)?;
    println!("two-progression roots for alpha = 1/4, y = 3: {roots:?}");
    let x = roots.into_iter().find(|&x| x > 0.0).unwrap_or(f64::NAN);
    let (g, s) = two_progression_setting(3, 1, 1, 0.25, x, 3.0, 4)?;
    println!("  residual {:.1e}", verify_solution(&g, &s, 1e-9)?.max_abs_residual);

    let mut chain = vec![2.0];
    for _ in 0..7 {
        let options = t1_next_ratios(*chain.last().unwrap_or(&2.0))?;
        chain.push(options[chain.len() % 2]);
    }
    let path = ratio_chain_path(&chain)?;
    let r = verify_solution(&path, &Setting::of(&path), 1e-9)?;
    println!("T1 chain {chain:?}: solution = {}", r.is_solution);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
