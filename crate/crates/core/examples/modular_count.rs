//! Hamiltonian cycle counts modulo p^k, naive sieve against the
//! meet-in-the-middle listing.

use hamkit::graph::Digraph;
use hamkit::hamcount::{count_hc_mod, SieveMode, SieveParams, DEFAULT_BETA, DEFAULT_LAMBDA};
use hamkit::oracle::held_karp_count_hc;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hamkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let g = Digraph::random(14, 0.6, &mut rng);
    let truth = held_karp_count_hc(&g)?;
    println!("n = {}, m = {}, Held-Karp count = {truth}", g.n(), g.arc_count());

    for (p, k) in [(2, 3), (3, 2), (5, 1), (7, 2)] {
        for mode in [SieveMode::Naive, SieveMode::Mitm] {
            let params = SieveParams::with_options(g.n() + 1, p, Some(k), DEFAULT_LAMBDA, DEFAULT_BETA, 1, mode)?;
            let out = count_hc_mod(&g, &params)?;
            let d = &out.diagnostics;
            println!(
                "p^k = {p}^{k}  {mode:?}: {:>3} (expect {:>3})  listed {:>6}/{} subsets, {} blocks",
                out.residue,
                truth % out.modulus as u128,
                d.pairs_listed,
                d.pairs_naive,
                d.blocks
            );
        }
    }
    Ok(())
}
