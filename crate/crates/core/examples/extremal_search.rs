// Nelder-Mead over log-lengths, looking for the extremes of small actions.

use ricci_graph::generators::{gen_complete, gen_cycle};
use ricci_graph::search::{extremize_action, ExtremizeOptions, Objective};
use ricci_graph::{PartialSetting, Result};

pub fn run() -> Result<()> {
    let opts = ExtremizeOptions {
        restarts: 6,
        ..ExtremizeOptions::default()
    };
    for (name, g) in [("K3", gen_complete(3)?), ("C4", gen_cycle(4)?)] {
        for objective in [Objective::Min, Objective::Max] {
            let r = extremize_action(&g, &PartialSetting::new(), objective, &opts)?;
            let lengths: Vec<String> = r.setting.lengths.iter().map(|l| format!("{l:.4}")).collect();
            println!(
                "{name} {objective:?}: S = {:.6} at [{}]{}",
                r.objective,
                lengths.join(", "),
                if r.at_box_boundary { " (hit the length box)" } else { "" }
            );
        }
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
