//! Counting spanning out-branchings with the punctured Laplacian.

use hamkit::graph::Digraph;
use hamkit::matrix::count_out_branchings;
use hamkit::oracle::enumerate_out_branchings;

fn main() -> hamkit::Result<()> {
    for (name, g) in [
        ("path P5", Digraph::path(5)),
        ("cycle C6", Digraph::cycle(6)),
        ("complete K5", Digraph::complete(5)),
        ("tournament T6", Digraph::transitive_tournament(6)),
    ] {
        let by_det = count_out_branchings(&g, 0)?;
        let by_list = enumerate_out_branchings(&g, 0)?.branchings.len();
        println!("{name:>14}: det L_0 = {by_det:>5}, enumerated = {by_list:>5}");
    }

    // Cayley: n^(n-2) spanning trees, each oriented away from the root once
    let big = Digraph::complete(30);
    println!("K30 rooted at 0: {}", count_out_branchings(&big, 0)?);
    Ok(())
}
