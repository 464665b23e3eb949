// Graphs, settings and regions through the JSON formats the CLI reads.

use ricci_graph::generators::{ball_region, geometric_half_half};
use ricci_graph::io::{graph_to_json, load_graph, load_setting_json, region_to_json, setting_from_json, setting_to_json, Bundle};
use ricci_graph::tree::verify_solution;
use ricci_graph::Result;

pub fn run() -> Result<()> {
    let (g, s) = geometric_half_half(3, 3, 2.0)?;
    let bundle = Bundle {
        graph: graph_to_json(&g),
        setting: Some(setting_to_json(&g, &s)),
        region: Some(region_to_json(&g, &ball_region(&g, 0, 2)?)),
    };
    let text = serde_json::to_string(&bundle).expect("bundle serializes");
    println!("bundle: {} bytes", text.len());
    let back = load_graph(&text).expect("graph reads back");
    let json = load_setting_json(&text).expect("setting reads back").expect("bundle has a setting");
    let s2 = setting_from_json(&back, &json)?;
    println!("round trip equal: {}", s2 == s);
    println!("still a solution: {}", verify_solution(&back, &s2, 1e-9)?.is_solution);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
