//! Hamiltonicity through the quasi-Laplacian sieve over GF(2^m).
//!
//! Pass an edge-list file to test your own graph.

use hamkit::graph::{find_independent_partition, parse_digraph, Digraph};
use hamkit::hamdetect::{default_trials, detect_hamiltonian_cycle};
use hamkit::oracle::held_karp_count_hc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut graphs = vec![
        ("cycle C12".to_string(), Digraph::cycle(12)),
        ("tournament T8".to_string(), Digraph::transitive_tournament(8)),
        (
            "two triangles".to_string(),
            Digraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (4, 1)])?,
        ),
    ];
    for path in std::env::args().skip(1) {
        let text = std::fs::read_to_string(&path)?;
        graphs.push((path, parse_digraph(&text)?.graph));
    }

    for (name, g) in &graphs {
        let part = find_independent_partition(g)?;
        let report = detect_hamiltonian_cycle(g, default_trials(g.n()), 42)?;
        let exact = held_karp_count_hc(g)
            .map(|c| c.to_string())
            .unwrap_or_else(|_| "?".into());
        println!(
            "{name}: {:?} after {}/{} trials  (|B| = {}, |Y| = {}, failure bound {:.1e}, cycles {exact})",
            report.answer,
            report.trials_run,
            report.trials,
            part.blue.len(),
            part.yellow.len(),
            report.failure_bound
        );
    }
    Ok(())
}
