use hamkit::graph::Digraph;
use hamkit::hamcount::{count_avg_degree, count_exact_capped, crt_count, CappedCount, SieveMode, DEFAULT_LAMBDA};
use hamkit::oracle::held_karp_count_hc;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hamkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = Digraph::random(11, 0.5, &mut rng);
    println!(
        "n = {}, m = {}, exact = {}",
        g.n(),
        g.arc_count(),
        held_karp_count_hc(&g)?
    );

    let c = crt_count(&g, 5, DEFAULT_LAMBDA, 0, SieveMode::Mitm)?;
    println!(
        "primes <= 5 {:?}: count = {} mod {}",
        c.prime_powers, c.residue, c.modulus
    );

    match count_exact_capped(&g, 2.0, 0, SieveMode::Mitm)? {
        CappedCount::Exact { count, modulus } => println!("capped at 2^n: {count} (modulus {modulus})"),
        CappedCount::CapExceeded { residue, modulus } => println!("cap not reached: {residue} mod {modulus}"),
    }
    println!(
        "average out-degree bound: {}",
        count_avg_degree(&g, 0, SieveMode::Mitm)?
    );
    Ok(())
}
