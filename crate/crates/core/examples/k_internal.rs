//! Out-branchings with at least k internal vertices.

use hamkit::branchings::{detect_k_internal, InternalSieveConfig};
use hamkit::graph::Digraph;
use hamkit::oracle::brute_k_internal;

fn main() -> hamkit::Result<()> {
    let binary_tree = Digraph::new(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])?;
    let graphs = [
        ("path P7", Digraph::path(7)),
        ("out-star S7", Digraph::out_star(7)),
        ("binary tree", binary_tree),
    ];
    for (name, g) in &graphs {
        let cfg = InternalSieveConfig::new(g.n(), 11);
        let verdicts: Vec<String> = (1..=4)
            .map(|k| {
                let got = detect_k_internal(g, k, &cfg).map(|r| r.is_yes()).unwrap_or(false);
                let truth = brute_k_internal(g, k).unwrap_or(false);
                format!(
                    "k={k}: {}{}",
                    if got { "yes" } else { "no" },
                    if got == truth { "" } else { " (!)" }
                )
            })
            .collect();
        println!("{name:>12}  {}", verdicts.join("  "));
    }
    Ok(())
}
